"""Exact integer linear algebra: Hermite and Smith normal forms, lattice kernels.

Lattices in Z^n are described by generating vectors. The Hermite form used
throughout is "pivot-last": basis vector j has its last nonzero coordinate at
position j, the pivot is positive, and the entries at coordinate j of the
vectors with larger pivots are reduced into [0, pivot). Written with the basis
vectors as columns this is an upper triangular matrix, e.g. the ideal
2Z + (1 + w)Z of a quadratic order is [[2, 1], [0, 1]].
"""
from dataclasses import dataclass, field
from typing import Optional

from .arith import lcm


def _reduce_mod(v, m):
    return [x % m for x in v] if m else list(v)


def echelon(vectors, n, modulus=None):
    """Echelon basis of the lattice spanned by ``vectors`` (plus ``modulus * Z^n``).

    Returns a dict pivot -> vector. With a modulus every coordinate gets a
    pivot (coordinates missing one are filled with ``modulus * e_c``) and all
    entries are kept reduced mod ``modulus``.
    """
    m = modulus
    rows = [_reduce_mod(v, m) for v in vectors]
    rows = [r for r in rows if any(r)]
    piv = {}
    for c in range(n - 1, -1, -1):
        active = [r for r in rows if r[c]]
        rest = [r for r in rows if not r[c]]
        if m:
            e = [0] * n
            e[c] = m
            active.append(e)
        if not active:
            rows = rest
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                if m:
                    r = [x % m if i != c else x for i, x in enumerate(r)]
                if r[c]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        p = active[0]
        if p[c] < 0:
            p = [-x for x in p]
        if m:
            p = [x % m if i != c else x for i, x in enumerate(p)]
            g = p[c]
            h = [(m // g) * x % m for x in p[:c]] + [0] * (n - c)
            if any(h):
                rest.append(h)
        piv[c] = p
        rows = rest
    # reduce each vector against the lower pivots, highest coordinate first
    for c2 in sorted(piv):
        v = piv[c2]
        for c in range(c2 - 1, -1, -1):
            if c in piv:
                q = v[c] // piv[c][c]
                if q:
                    v = [a - q * b for a, b in zip(v, piv[c])]
                    if m:
                        v = [x % m if i != c2 else x for i, x in enumerate(v)]
        piv[c2] = v
    return piv


def hnf(vectors, n, modulus=None):
    """Hermite basis as a tuple of vectors ordered by pivot."""
    piv = echelon(vectors, n, modulus)
    return tuple(tuple(piv[c]) for c in sorted(piv))


def hnf_full(vectors, n, modulus=None):
    """Hermite basis of a full-rank lattice; raises if rank < n."""
    basis = hnf(vectors, n, modulus)
    if len(basis) != n:
        raise ValueError("lattice is not of full rank")
    return basis


def lattice_index(basis):
    """Index in Z^n of a full-rank lattice given by its Hermite basis."""
    idx = 1
    for j, b in enumerate(basis):
        idx *= b[j]
    return idx


def reduce_vector(v, basis):
    """Canonical representative of v modulo a full-rank Hermite basis."""
    v = list(v)
    for j in range(len(basis) - 1, -1, -1):
        q = v[j] // basis[j][j]
        if q:
            v = [a - q * b for a, b in zip(v, basis[j])]
    return tuple(v)


def in_lattice(v, basis):
    return not any(reduce_vector(v, basis))


def coords_in_basis(v, basis):
    """Integer coordinates of v in a full-rank Hermite basis (ValueError if v not in lattice)."""
    v = list(v)
    n = len(basis)
    c = [0] * n
    for j in range(n - 1, -1, -1):
        q, r = divmod(v[j], basis[j][j])
        if r:
            raise ValueError("vector not in lattice")
        c[j] = q
        if q:
            v = [a - q * b for a, b in zip(v, basis[j])]
    return c


def kernel_mod(A, row_moduli, var_moduli):
    """Solutions of A x = 0 (mod row_moduli[i] per row) with x_j taken mod var_moduli[j].

    A is a list of rows. Returns the full-rank Hermite basis of
    {x in Z^V : A x = 0 mod r}; the caller guarantees that var_moduli[j] e_j
    lies in it (i.e. the system is well defined on the finite group).
    """
    V = len(var_moduli)
    R = len(row_moduli)
    if V == 0:
        return ()
    m = lcm(*var_moduli, *row_moduli) if R else lcm(*var_moduli)
    vecs = []
    for j in range(V):
        v = [0] * (V + R)
        v[j] = 1
        for i in range(R):
            v[V + i] = A[i][j]
        vecs.append(v)
    for i in range(R):
        v = [0] * (V + R)
        v[V + i] = row_moduli[i]
        vecs.append(v)
    piv = echelon(vecs, V + R, m)
    ker = [piv[c][:V] for c in piv if c < V]
    for j in range(V):
        e = [0] * V
        e[j] = var_moduli[j]
        ker.append(e)
    return hnf_full(ker, V, m)


def integer_kernel(A, ncols):
    """Z-basis of {x in Z^ncols : A x = 0} (A given as list of rows)."""
    R = len(A)
    vecs = []
    for j in range(ncols):
        v = [0] * (ncols + R)
        v[j] = 1
        for i in range(R):
            v[ncols + i] = A[i][j]
        vecs.append(v)
    piv = echelon(vecs, ncols + R)
    return [tuple(piv[c][:ncols]) for c in sorted(piv) if c < ncols]


def intersect(basis1, basis2, n):
    """Intersection of two full-rank lattices in Z^n."""
    m = lcm(lattice_index(basis1), lattice_index(basis2))
    vecs = [list(b) + list(b) for b in basis1] + [[0] * n + list(b) for b in basis2]
    piv = echelon(vecs, 2 * n, m)
    return hnf_full([piv[c][:n] for c in piv if c < n], n, m)


def mat_mul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def mat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(M):
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@dataclass
class SnfResult:
    """Smith form of a relation matrix whose columns are relators.

    ``invariant_factors`` lists the nonzero diagonal entries (including 1s) in
    divisibility order; ``free_rank`` is the rank of the cokernel. When
    transforms are requested ``U @ m @ V`` is the diagonal form.
    """
    invariant_factors: tuple
    free_rank: int
    U: Optional[list] = field(default=None, repr=False)
    V: Optional[list] = field(default=None, repr=False)
    Uinv: Optional[list] = field(default=None, repr=False)
    Vinv: Optional[list] = field(default=None, repr=False)

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d > 1)


def smith_normal_form(m, nrows=None, transforms=True):
    """Smith normal form of an integer matrix given as a list of rows.

    Pivot choice is the entry of minimal absolute value, so results are
    deterministic. ``nrows`` is needed only for matrices with no columns.
    """
    A = [list(r) for r in m]
    rows = len(A) if nrows is None else nrows
    if not A:
        A = [[] for _ in range(rows)]
    cols = len(A[0]) if A else 0
    U = identity(rows) if transforms else None
    Uinv = identity(rows) if transforms else None
    V = identity(cols) if transforms else None
    Vinv = identity(cols) if transforms else None

    def row_add(i, j, q):  # row_i += q * row_j
        A[i] = [a + q * b for a, b in zip(A[i], A[j])]
        if transforms:
            U[i] = [a + q * b for a, b in zip(U[i], U[j])]
            for r in Uinv:
                r[j] -= q * r[i]

    def col_add(i, j, q):  # col_i += q * col_j
        for r in A:
            r[i] += q * r[j]
        if transforms:
            for r in V:
                r[i] += q * r[j]
            Vinv[j] = [a - q * b for a, b in zip(Vinv[j], Vinv[i])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for r in Uinv:
                r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if transforms:
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        if transforms:
            U[i] = [-a for a in U[i]]
            for r in Uinv:
                r[i] = -r[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        row_swap(t, i)
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        col_swap(t, j)
                        done = False
            if done:
                d = A[t][t]
                for i in range(t + 1, rows):
                    if any(A[i][j] % d for j in range(t + 1, cols)):
                        row_add(t, i, 1)
                        done = False
                        break
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    diag = [A[i][i] for i in range(min(rows, cols)) if A[i][i]]
    res = SnfResult(tuple(diag), rows - len(diag))
    if transforms:
        res.U, res.V, res.Uinv, res.Vinv = U, V, Uinv, Vinv
    return res
