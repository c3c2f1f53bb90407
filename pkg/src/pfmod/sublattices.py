"""Enumeration of action-stable finite-index sublattices by maximal descent.

Every Lambda-submodule of finite index is reached from the whole lattice by a
chain of maximal submodules, and a maximal submodule of L is the kernel of a
nonzero Lambda-linear map L -> Lambda/P for a maximal ideal P. Such maps are
the solutions Phi of a linear system over F_p: Phi kills the relations and
intertwines the action on L with multiplication by the generator on the
residue field.
"""
from .ideals import ResidueField, maximal_ideals
from .intmat import coords_in_basis, hnf_full, kernel_mod, lattice_index
from .modules import presentation_lattice
from .polymod import nullspace_mod_p
from .rings import LaurentZ


def residue_companion(ring, ideal):
    """(p, degree, C): C is the F_p matrix of the ring generator on Lambda/P, or None over ZZ."""
    F = ResidueField(ring, ideal)
    p, f = F.p, F.field.degree
    g = F.generator_image()
    if g is None:
        return p, 1, None
    C = [[0] * f for _ in range(f)]
    basis = [F.field.elem((0,) * j + (1,)) for j in range(f)]
    for j, b in enumerate(basis):
        img = F.field.mul(g, b)
        for i in range(f):
            C[i][j] = img[i]
    return p, f, C


def _projective_combinations(basis, p):
    """Nonzero combinations of basis vectors, one per line through the origin."""
    s = len(basis)
    n = len(basis[0]) if basis else 0
    for lead in range(s):
        # coefficient 1 at position lead, zeros before, free after
        free = s - lead - 1
        for t in range(p ** free):
            coeffs = [0] * lead + [1]
            for _ in range(free):
                coeffs.append(t % p)
                t //= p
            yield [sum(c * basis[i][j] for i, c in enumerate(coeffs)) % p for j in range(n)]


def maximal_children(L, rels, action, comp):
    """Maximal submodules of the lattice L (Hermite basis) that contain rels.

    ``comp`` is the output of residue_companion for the chosen maximal ideal.
    """
    p, f, C = comp
    n = len(L)
    cr = [coords_in_basis(r, L) for r in rels]
    eqs = []
    # unknown Phi[a][j] at index a*n + j
    for c in cr:
        for a in range(f):
            row = [0] * (f * n)
            for j in range(n):
                row[a * n + j] = c[j]
            eqs.append(row)
    if action is not None:
        WL = [coords_in_basis([sum(action[i][t] * v[t] for t in range(n)) for i in range(n)], L)
              for v in L]                      # WL[j] = coords of W b_j
        for a in range(f):
            for j in range(n):
                row = [0] * (f * n)
                for t in range(n):
                    row[a * n + t] += WL[j][t]
                for b in range(f):
                    row[b * n + j] -= C[a][b]
                eqs.append(row)
    sol = nullspace_mod_p(eqs, f * n, p) if eqs else [
        [int(i == j) for j in range(f * n)] for i in range(f * n)]
    idx = lattice_index(L)
    q = p ** f
    out = set()
    for phi in _projective_combinations(sol, p):
        rows = [phi[a * n:(a + 1) * n] for a in range(f)]
        K = kernel_mod(rows, [p] * f, [p] * n)
        vecs = [[sum(L[t][i] * k[t] for t in range(n)) for i in range(n)] for k in K]
        child = hnf_full(vecs, n, idx * q)
        out.add(child)
    return out


def lattice_descent(ring, n, rels, action, ideals, bound):
    """All stable lattices L with rels in L and [Z^n : L] <= bound reachable through
    maximal steps with residue fields from ``ideals``. Returns {basis: index}.
    """
    top = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {top: 1}
    frontier = [top]
    comps = [(I, residue_companion(ring, I)) for I in ideals]
    while frontier:
        nxt = []
        for L in frontier:
            idx = seen[L]
            for I, comp in comps:
                q = comp[0] ** comp[1]
                if idx * q > bound:
                    continue
                for child in maximal_children(L, rels, action, comp):
                    if child not in seen:
                        seen[child] = idx * q
                        nxt.append(child)
        frontier = nxt
    return seen


def invariant_sublattices(m, index_bound):
    """Every action-stable sublattice of index <= index_bound containing the relations,
    with its quotient module. Output sorted by (index, basis)."""
    from .finite import from_lattice
    if isinstance(m.ring, LaurentZ):
        raise TypeError("LaurentZ modules are not finitely generated over Z; use target enumeration")
    n, rels, action = presentation_lattice(m)
    ideals = maximal_ideals(m.ring, index_bound) if index_bound >= 2 else []
    found = lattice_descent(m.ring, n, rels, action, ideals, index_bound)
    out = []
    for L, idx in sorted(found.items(), key=lambda t: (t[1], t[0])):
        q = from_lattice(m.ring, n, list(L), action)[0]
        out.append((L, q))
    return out
