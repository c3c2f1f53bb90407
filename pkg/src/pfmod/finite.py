"""Finite modules as abelian groups with an action, and their canonical codes.

A ``FiniteModule`` is the group Z/d_1 + ... + Z/d_k (d_1 | ... | d_k, all >= 2)
with at most one action matrix: multiplication by w over a quadratic order,
by x over LaurentZ, none over ZZ. Column j of the action is the image of
the j-th generator and row i is reduced mod d_i.

Submodules are handled as lattices in Z^k containing the relation lattice
D = d_1 Z + ... + d_k Z, always stored in Hermite form modulo the exponent.
"""
from dataclasses import dataclass, field
from itertools import product

from .arith import factorize, lcm
from .ideals import LaurentIdeal, PrincipalIdeal, QuadIdeal, ideal_prime, ideal_sort_key, quad_primes_above
from .intmat import coords_in_basis, hnf_full, kernel_mod, lattice_index, mat_mul, smith_normal_form
from .polymod import factor_poly, pdivmod, pmul, psub, ptrim, rank_mod_p
from .rings import ZZ, LaurentZ, QuadOrder, ZZLoc

DEFAULT_CEILING = 256


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed the configured order ceiling."""


def check_ceiling(order, ceiling, what="order"):
    if ceiling is not None and order > ceiling:
        raise ResourceLimitError(f"{what} {order} exceeds the ceiling {ceiling}")


@dataclass(frozen=True, eq=False)
class FiniteModule:
    ring: object
    factors: tuple
    action: object = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        f = tuple(self.factors)
        for i, d in enumerate(f):
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if i and d % f[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")
        object.__setattr__(self, "factors", f)
        k = len(f)
        A = self.action
        if self.ring.has_action:
            if A is None:
                raise ValueError(f"an action matrix is required over {self.ring}")
            A = tuple(tuple(A[i][j] % f[i] for j in range(k)) for i in range(k))
            for j in range(k):
                for i in range(k):
                    if A[i][j] * f[j] % f[i]:
                        raise ValueError("action matrix is not well defined on the group")
            object.__setattr__(self, "action", A)
            if isinstance(self.ring, QuadOrder):
                t, n = self.ring.trace, self.ring.norm_w
                A2 = self.mat_mul(A, A)
                for j in range(k):
                    for i in range(k):
                        if (A2[i][j] - t * A[i][j] + (n if i == j else 0)) % f[i]:
                            raise ValueError("action does not satisfy the quadratic relation")
            elif isinstance(self.ring, LaurentZ) and k:
                if self.kernel_order(A) != 1:
                    raise ValueError("x must act invertibly")
        else:
            object.__setattr__(self, "action", None)

    # -- basic structure -----------------------------------------------------
    @property
    def k(self):
        return len(self.factors)

    @property
    def order(self):
        out = 1
        for d in self.factors:
            out *= d
        return out

    @property
    def exponent(self):
        return self.factors[-1] if self.factors else 1

    def is_zero(self):
        return not self.factors

    def __repr__(self):
        if self.action is None:
            return f"FiniteModule({self.ring}, {self.factors})"
        return f"FiniteModule({self.ring}, {self.factors}, action={[list(r) for r in self.action]})"

    def reduce(self, v):
        return tuple(x % d for x, d in zip(v, self.factors))

    def mat_vec(self, M, v):
        return tuple(sum(M[i][j] * v[j] for j in range(self.k)) % self.factors[i] for i in range(self.k))

    def mat_mul(self, M, N):
        k = self.k
        return tuple(tuple(sum(M[i][t] * N[t][j] for t in range(k)) % self.factors[i] for j in range(k))
                     for i in range(k))

    def identity(self):
        return tuple(tuple(int(i == j) % self.factors[i] for j in range(self.k)) for i in range(self.k))

    def scalar(self, c):
        return tuple(tuple((c if i == j else 0) % self.factors[i] for j in range(self.k))
                     for i in range(self.k))

    def mat_add(self, M, N, c=1):
        return tuple(tuple((M[i][j] + c * N[i][j]) % self.factors[i] for j in range(self.k))
                     for i in range(self.k))

    def mat_pow(self, M, e):
        R = self.identity()
        while e:
            if e & 1:
                R = self.mat_mul(R, M)
            M = self.mat_mul(M, M)
            e >>= 1
        return R

    def apply(self, v):
        return self.mat_vec(self.action, v) if self.action is not None else self.reduce(v)

    def elements(self):
        for t in product(*(range(d) for d in self.factors)):
            yield t

    @property
    def diag_lattice(self):
        return [tuple(d if i == j else 0 for j in range(self.k)) for i, d in enumerate(self.factors)]

    def lattice(self, vecs):
        """Hermite basis of span(vecs) + D (no action closure)."""
        if not self.k:
            return ()
        return hnf_full([list(v) for v in vecs] + self.diag_lattice, self.k, self.exponent)

    def kernel_order(self, M):
        """Size of the kernel of the endomorphism M."""
        if not self.k:
            return 1
        K = kernel_mod([list(r) for r in M], list(self.factors), list(self.factors))
        return self.order // lattice_index(K)

    # -- action by ring elements ---------------------------------------------
    def action_inverse(self):
        if "inv" not in self._cache:
            A = self.action
            o = 1
            for j in range(self.k):
                e = tuple(int(i == j) for i in range(self.k))
                v, t = self.mat_vec(A, e), 1
                while v != self.reduce(e):
                    v, t = self.mat_vec(A, v), t + 1
                o = lcm(o, t)
            self._cache["inv"] = self.mat_pow(A, o - 1)
        return self._cache["inv"]

    def poly_matrix(self, coeffs):
        """sum_i coeffs[i] * A^i (integer polynomial, lowest degree first)."""
        R = self.scalar(0)
        for c in reversed(list(coeffs)):
            R = self.mat_add(self.mat_mul(R, self.action), self.identity(), c)
        return R

    def elem_matrix(self, elem):
        """Matrix of multiplication by a ring element."""
        ring = self.ring
        elem = ring.coerce(elem)
        if isinstance(ring, (ZZ, ZZLoc)):
            return self.scalar(elem)
        if isinstance(ring, QuadOrder):
            return self.mat_add(self.scalar(elem[0]), self.action, elem[1])
        R = self.scalar(0)
        if not elem:
            return R
        lo = elem.min_exp
        shifted = elem.shift(-lo).poly_coeffs()
        R = self.poly_matrix(shifted)
        if lo > 0:
            R = self.mat_mul(R, self.mat_pow(self.action, lo))
        elif lo < 0:
            R = self.mat_mul(R, self.mat_pow(self.action_inverse(), -lo))
        return R

    def annihilated_by(self, elem):
        M = self.elem_matrix(elem)
        return all(x == 0 for row in M for x in row)

    # -- submodules ----------------------------------------------------------
    def span(self, vecs):
        """Hermite basis of the submodule generated by vecs (closed under the action)."""
        L = self.lattice(vecs)
        if self.action is None:
            return L
        while True:
            L2 = self.lattice(list(L) + [self.mat_vec(self.action, v) for v in L])
            if L2 == L:
                return L
            L = L2

    def sub_order(self, L):
        """Order of the submodule given by the lattice L (containing D)."""
        return self.order // lattice_index(L) if self.k else 1

    def whole(self):
        return self.lattice([tuple(int(i == j) for j in range(self.k)) for i in range(self.k)])

    def ideal_matrices(self, ideal):
        """Matrices of a generating set of the ideal."""
        if isinstance(ideal, PrincipalIdeal):
            return [self.elem_matrix(ideal.gen)]
        if isinstance(ideal, QuadIdeal):
            if ideal.den != 1:
                raise ValueError("integral ideal required")
            return [self.elem_matrix(e) for e in ideal.elements()]
        if isinstance(ideal, LaurentIdeal):
            return [self.scalar(ideal.p), self.poly_matrix(list(ideal.f))]
        raise TypeError(f"unsupported ideal {ideal!r}")

    def ideal_times(self, ideal, L=None):
        """Lattice of I*S where S is given by L (default: the whole module)."""
        if L is None:
            L = self.whole()
        mats = self.ideal_matrices(ideal)
        return self.lattice([self.mat_vec(M, v) for M in mats for v in L])

    def kernel_lattice(self, mats):
        """Lattice of the common kernel of endomorphisms."""
        rows, mods = [], []
        for M in mats:
            for i in range(self.k):
                rows.append(list(M[i]))
                mods.append(self.factors[i])
        return kernel_mod(rows, mods, list(self.factors))

    def quotient(self, L):
        """Q / S for the submodule lattice L. Returns (module, projection rows)."""
        return from_lattice(self.ring, self.k, list(L), self.action)

    def submodule(self, L):
        """The submodule with lattice L as a FiniteModule of its own.

        Returns (module, inclusion) where inclusion maps module coordinates to
        coordinates of self.
        """
        k = self.k
        if not k:
            return self, []
        B = [list(v) for v in L]                   # basis vectors
        rel = [coords_in_basis(v, L) for v in self.diag_lattice]
        act = None
        if self.action is not None:
            imgs = [coords_in_basis(self.mat_vec(self.action, v), L) for v in L]
            act = [[imgs[j][i] for j in range(k)] for i in range(k)]
        sub, proj, lift = from_lattice(self.ring, k, rel, act, with_lift=True)
        incl = []
        for col in lift:
            v = [sum(B[t][i] * col[t] for t in range(k)) for i in range(k)]
            incl.append(self.reduce(v))
        return sub, incl


def from_lattice(ring, n, vecs, action, with_lift=False, modulus=None):
    """Z^n / span(vecs) with the induced action (the span must have full rank).

    Returns (module, projection rows) and, when with_lift is set, also the
    generator lifts as vectors in Z^n.
    """
    if n == 0:
        q = FiniteModule(ring, (), () if ring.has_action else None)
        return (q, [], []) if with_lift else (q, [])
    basis = hnf_full([list(v) for v in vecs], n, modulus)
    Bmat = [[basis[j][i] for j in range(n)] for i in range(n)]
    snf = smith_normal_form(Bmat)
    diag = list(snf.invariant_factors)
    keep = [i for i, d in enumerate(diag) if d > 1]
    factors = tuple(diag[i] for i in keep)
    U, Uinv = snf.U, snf.Uinv
    act = None
    if action is not None:
        T = mat_mul(mat_mul(U, [list(r) for r in action]), Uinv)
        act = [[T[i][j] for j in keep] for i in keep]
    elif ring.has_action:
        raise ValueError("action matrix required")
    q = FiniteModule(ring, factors, act if ring.has_action else None)
    proj = [U[i] for i in keep]
    if with_lift:
        lift = [[Uinv[r][i] for r in range(n)] for i in keep]
        return q, proj, lift
    return q, proj


def project(proj, q, v):
    return q.reduce([sum(a * b for a, b in zip(row, v)) for row in proj])


def direct_sum_finite(mods):
    """Direct sum of finite modules over the same ring (re-normalized)."""
    mods = [m for m in mods if m.k]
    if not mods:
        return None
    ring = mods[0].ring
    n = sum(m.k for m in mods)
    vecs, A = [], ([[0] * n for _ in range(n)] if ring.has_action else None)
    off = 0
    for m in mods:
        for i, d in enumerate(m.factors):
            v = [0] * n
            v[off + i] = d
            vecs.append(v)
        if A is not None:
            for i in range(m.k):
                for j in range(m.k):
                    A[off + i][off + j] = m.action[i][j]
        off += m.k
    return from_lattice(ring, n, vecs, A)[0]


def zero_finite(ring):
    return FiniteModule(ring, (), () if ring.has_action else None)


def sum_or_zero(ring, mods):
    out = direct_sum_finite(mods)
    return out if out is not None else zero_finite(ring)


def combine_factors(factor_lists):
    """Invariant factors of a direct sum of abelian groups."""
    primes = {}
    for fl in factor_lists:
        for d in fl:
            for p, e in factorize(d).items():
                primes.setdefault(p, []).append(e)
    if not primes:
        return ()
    k = max(len(v) for v in primes.values())
    out = [1] * k
    for p, es in primes.items():
        es = sorted(es)
        es = [0] * (k - len(es)) + es
        for i, e in enumerate(es):
            out[i] *= p ** e
    return tuple(out)


# ----- maximal ideals supporting a finite module ------------------------------

def support_ideals(q):
    """Maximal ideals I with Q_I nonzero, sorted."""
    ring = q.ring
    out = []
    for p in sorted(factorize(q.order)):
        if isinstance(ring, (ZZ, ZZLoc)):
            out.append(PrincipalIdeal(ring, p))
        elif isinstance(ring, QuadOrder):
            for P in quad_primes_above(ring, p):
                if q.sub_order(q.ideal_times(P)) < q.order:
                    out.append(P)
        else:
            out.extend(laurent_support(q, p))
    return out


def laurent_support(q, p):
    """Maximal ideals (p, f) in the support: factors of the char. polynomial on Q/pQ."""
    pQ = q.lattice([q.mat_vec(q.scalar(p), v) for v in q.whole()])
    top, proj = q.quotient(pQ)
    if not top.k:
        return []
    M = [[x % p for x in row] for row in top.action]
    cp = charpoly_mod_p(M, p)
    return [LaurentIdeal(p, f) for f, _ in factor_poly(cp, p)]


def charpoly_mod_p(M, p):
    """Characteristic polynomial det(X - M) over F_p via evaluation and interpolation."""
    n = len(M)
    # fraction-free elimination over F_p[X]; every division is exact
    A = [[ptrim(((-M[i][j]) % p,) if i != j else ((-M[i][j]) % p, 1), p) for j in range(n)] for i in range(n)]
    sign = 1
    prev = (1,)
    for kk in range(n - 1):
        if not A[kk][kk]:
            sw = next((i for i in range(kk + 1, n) if A[i][kk]), None)
            if sw is None:
                return ()
            A[kk], A[sw] = A[sw], A[kk]
            sign = -sign
        for i in range(kk + 1, n):
            for j in range(kk + 1, n):
                num = psub(pmul(A[i][j], A[kk][kk], p), pmul(A[i][kk], A[kk][j], p), p)
                qt, r = pdivmod(num, prev, p)
                A[i][j] = qt
        prev = A[kk][kk]
    det = A[n - 1][n - 1]
    if sign < 0:
        det = ptrim(tuple(-c for c in det), p)
    return det


# ----- canonical codes --------------------------------------------------------

def factors_code(factors):
    return "(" + ",".join(map(str, factors)) + ")"


def code_order(code):
    """Group order recorded in the invariant-factor head of a code."""
    head = code[1:code.index(")")]
    out = 1
    for d in filter(None, head.split(",")):
        out *= int(d)
    return out


def canonical_code(q, ceiling=DEFAULT_CEILING):
    """String code; equal codes exactly for isomorphic modules."""
    check_ceiling(q.order, ceiling)
    if isinstance(q.ring, (ZZ, ZZLoc)):
        return factors_code(q.factors)
    parts = []
    for I in support_ideals(q):
        P = q if isinstance(q.ring, QuadOrder) else primary_part(q, I)
        parts.append((I, part_code(P, I)))
    return compose_code(q.ring, q.factors, parts)


def part_code(P, ideal):
    """Code of an I-primary module over a ring with action."""
    if isinstance(P.ring, QuadOrder):
        return _partition_str(quad_partition(P, ideal))
    return laurent_part_code(P)


def compose_code(ring, factors, parts):
    """Assemble a module code from its invariant factors and (ideal, part code) pairs."""
    head = factors_code(factors)
    if isinstance(ring, (ZZ, ZZLoc)):
        return head
    parts = sorted(parts, key=lambda t: ideal_sort_key(t[0]))
    return head + "|" + ";".join(f"{I.label}:{c}" for I, c in parts)


def _partition_str(lam):
    return "[" + ",".join(map(str, lam)) + "]"


def layer_sizes(q, ideal):
    """|I^j Q| for j = 0, 1, ... until the sequence stabilizes."""
    L = q.whole()
    sizes = [q.sub_order(L)]
    while True:
        L2 = q.ideal_times(ideal, L)
        s = q.sub_order(L2)
        if s == sizes[-1]:
            return sizes
        sizes.append(s)
        L = L2


def quad_partition(q, P):
    """Partition (largest part first) of the P-primary part of a module over a Dedekind order."""
    N = P.norm
    sizes = layer_sizes(q, P)
    dims = []
    for a, b in zip(sizes, sizes[1:]):
        r, t = a // b, 0
        while r > 1:
            r //= N
            t += 1
        dims.append(t)
    # dims[j] = number of parts > j
    if not dims:
        return ()
    return tuple(sum(1 for d in dims if d > i) for i in range(dims[0]))


def primary_part(q, ideal):
    """The I-primary component Q_I as a FiniteModule."""
    p = ideal_prime(ideal)
    N = q.order.bit_length()
    pa = p ** max(1, N)
    mats = [q.scalar(pa)]
    if isinstance(ideal, LaurentIdeal):
        F = q.poly_matrix(list(ideal.f))
        mats.append(q.mat_pow(F, N))
    elif isinstance(ideal, QuadIdeal):
        # w - r (split/ramified) or nothing extra (inert: p-part is already primary)
        (a, b), (_, c) = ideal.hnf_rows
        if c == 1:
            mats.append(q.mat_pow(q.elem_matrix((b, 1)), N))
    L = q.kernel_lattice(mats)
    return q.submodule(L)[0]


def top_dimension(q, ideal):
    """dim over Lambda/I of Q/IQ."""
    s = q.order // q.sub_order(q.ideal_times(ideal))
    r, t = s, 0
    N = ideal.norm
    while r > 1:
        r //= N
        t += 1
    return t


def _cyclic_key(q, gens, T):
    cols = []
    for g in gens:
        v = g
        for _ in range(T):
            cols.append(v)
            v = q.mat_vec(q.action, v)
    rows = [[c[i] for c in cols] for i in range(q.k)]
    return kernel_mod(rows, list(q.factors), [q.exponent] * len(cols))


def laurent_part_code(P):
    """Code of an I-primary Laurent module (assumed nonzero)."""
    ideals = support_ideals(P)
    if len(ideals) != 1:
        raise ValueError("module is not primary")
    I = ideals[0]
    r = top_dimension(P, I)
    IP = P.ideal_times(I)
    if P.sub_order(IP) == 1:
        return f"s{r}"
    T = P.order.bit_length() + 2
    p = I.p
    top, proj = P.quotient(IP)
    deg = I.degree

    def top_rows(vs):
        rows = []
        for v in vs:
            w = v
            for _ in range(deg):
                rows.append(list(project(proj, top, w)))
                w = P.mat_vec(P.action, w)
        return rows

    candidates = [()]
    best = None
    for stage in range(r):
        scored = []
        for prefix in candidates:
            base_rank = rank_mod_p(top_rows(prefix), p) if prefix else 0
            for v in P.elements():
                if rank_mod_p(top_rows(prefix + (v,)), p) != base_rank + deg:
                    continue
                key = _cyclic_key(P, prefix + (v,), T)
                scored.append((key, prefix + (v,)))
                if r == 1:
                    break  # any generator of a cyclic module gives the annihilator
            if r == 1:
                break
        best = min(k for k, _ in scored)
        candidates = [t for k, t in scored if k == best]
    flat = ";".join(",".join(map(str, v)) for v in best)
    tag = "c" if r == 1 else f"g{r}"
    return f"{tag}[{flat}]"
