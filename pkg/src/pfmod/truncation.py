"""The finite modules M / I^k M for a maximal ideal I."""
from .finite import from_lattice
from .ideals import ideal_prime, power_quotient


def truncation_data(m, ideal, k):
    """Lattice description of M / I^k M.

    Returns (quotient ring, n, generating vectors, action or None, modulus):
    M / I^k M is Z^n modulo the span of the vectors, with the block-diagonal
    action of the ring generator.
    """
    P = power_quotient(m.ring, ideal, k)
    e, g = P.dim, m.gens
    n = e * g
    vecs = []
    for b in range(g):
        for v in P.basis:
            w = [0] * n
            w[b * e:(b + 1) * e] = v
            vecs.append(w)
    A = None
    if P.action is not None:
        A = [[0] * n for _ in range(n)]
        for b in range(g):
            for i in range(e):
                for j in range(e):
                    A[b * e + i][b * e + j] = P.action[i][j]
    for col in m.cleared_relations():
        v = []
        for entry in col:
            v.extend(P.embed(entry))
        vecs.append(v)
        if A is not None:
            for _ in range(e - 1):
                v = [sum(A[i][t] * v[t] for t in range(n)) for i in range(n)]
                vecs.append(v)
    return P, n, vecs, A, ideal_prime(ideal) ** k


def power_truncation(m, ideal, k):
    """M / I^k M as a FiniteModule."""
    _, n, vecs, A, mod = truncation_data(m, ideal, k)
    return from_lattice(m.ring, n, vecs, A, modulus=mod)[0]
