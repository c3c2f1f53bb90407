"""Finite quotients of finitely presented modules: fingerprints, M/M(nu), comparisons.

Every finite quotient splits over the maximal ideals in its support, so the
set of quotient classes of order <= B is assembled from the I-primary quotient
classes for each maximal ideal I of norm <= B.
"""
import random
from dataclasses import dataclass, field
from itertools import product

from .arith import int_log
from .finite import (
    DEFAULT_CEILING, ResourceLimitError, check_ceiling, code_order, combine_factors,
    compose_code, direct_sum_finite, factors_code, from_lattice, part_code, project,
    zero_finite,
)
from .ideals import ResidueField, maximal_ideals, power_quotient
from .intmat import hnf_full, intersect, kernel_mod
from .modules import FpModule, SteinitzModule, mu_local, presentation_lattice, steinitz_to_presentation
from .polymod import rank_mod_p
from .rings import LaurentZ
from .sublattices import lattice_descent
from .truncation import truncation_data

STRATEGIES = ("auto", "subgroups", "targets", "truncation")
HOM_LIMIT = 1 << 20
EPI_SEARCH_LIMIT = 1 << 18


def as_presentation(m):
    if isinstance(m, SteinitzModule):
        return steinitz_to_presentation(m)
    if not isinstance(m, FpModule):
        raise TypeError(f"expected a module presentation, got {type(m).__name__}")
    return m


@dataclass(frozen=True)
class Fingerprint:
    """Canonical codes of the finite quotients of order <= bound."""
    bound: int
    classes: tuple
    members: dict = field(default_factory=dict, compare=False, repr=False)

    def __contains__(self, code):
        return code in self.classes

    def __len__(self):
        return len(self.classes)

    def restrict(self, bound):
        """The fingerprint at a smaller bound."""
        if bound > self.bound:
            raise ValueError("cannot extend a fingerprint to a larger bound")
        keep = {c: q for c, q in self.members.items() if q.order <= bound}
        return Fingerprint(bound, tuple(sorted(keep)), keep)


# ----- quotients of a Z-lattice with action -----------------------------------

def _descent_quotients(ring, n, rels, action, ideal, bound, modulus=None):
    """{code: module} for the quotients Z^n / L with L stable, supported at ideal."""
    out = {}
    found = lattice_descent(ring, n, rels, action, [ideal], bound)
    for L, idx in found.items():
        if idx == 1:
            continue
        q = from_lattice(ring, n, list(L), action, modulus=modulus)[0]
        out.setdefault(_part_code(q, ideal), q)
    return out


def _part_code(q, ideal):
    if q.action is None:
        return factors_code(q.factors)
    return part_code(q, ideal)


def _classes_subgroups(m, ideal, bound):
    if isinstance(m.ring, LaurentZ):
        raise TypeError("sublattice enumeration needs a module that is finitely generated over Z")
    n, rels, action = presentation_lattice(m)
    return _descent_quotients(m.ring, n, rels, action, ideal, bound)


def _classes_truncation(m, ideal, bound):
    if not mu_local(m, ideal):
        return {}
    ell = int_log(bound, ideal.norm)
    _, n, vecs, action, mod = truncation_data(m, ideal, ell)
    T = from_lattice(m.ring, n, vecs, action, modulus=mod)[0]
    if T.is_zero():
        return {}
    return _descent_quotients(m.ring, T.k, T.diag_lattice, T.action, ideal, bound)


# ----- targets and epimorphisms ----------------------------------------------

def partitions(total_max, parts_max):
    """Nonempty partitions (weakly decreasing tuples) of size <= total_max with <= parts_max parts."""
    out = []

    def rec(prefix, remaining, cap):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) == parts_max:
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(prefix + [part], remaining - part, part)

    rec([], total_max, total_max)
    return out


def _power_module(ring, ideal, k):
    P = power_quotient(ring, ideal, k)
    return from_lattice(ring, P.dim, P.basis, P.action)[0]


def _dedekind_targets(ring, ideal, bound, mu):
    top = int_log(bound, ideal.norm)
    out = []
    for lam in partitions(top, mu):
        out.append(direct_sum_finite([_power_module(ring, ideal, k) for k in lam]))
    return out


def _laurent_targets(ring, ideal, bound, mu):
    """Quotients of (Lambda/I^l)^s, s <= mu, with order <= bound."""
    out = {}
    q = ideal.norm
    for s in range(1, mu + 1):
        ell = int_log(bound, q) - s + 1
        if ell < 1:
            break
        F = direct_sum_finite([_power_module(ring, ideal, ell)] * s)
        for code, Q in _descent_quotients(ring, F.k, F.diag_lattice, F.action, ideal, bound).items():
            out.setdefault(code, Q)
    return list(out.values())


def hom_lattice(m, Q):
    """Lattice X in Z^(g*k) of generator images defining Lambda-maps M -> Q.

    Homomorphisms correspond to X modulo the diagonal lattice of Q repeated g times.
    """
    g, k = m.gens, Q.k
    rows, row_mod = [], []
    for col in m.cleared_relations():
        mats = [Q.elem_matrix(e) for e in col]
        for l in range(k):
            row = [0] * (g * k)
            for i in range(g):
                for t in range(k):
                    row[i * k + t] = mats[i][l][t]
            rows.append(row)
            row_mod.append(Q.factors[l])
    var_mod = list(Q.factors) * g
    if not rows:
        return tuple(tuple(int(i == j) for j in range(g * k)) for i in range(g * k))
    return kernel_mod(rows, row_mod, var_mod)


def lattice_points(X, moduli):
    """Representatives of X modulo diag(moduli), X a Hermite basis containing it."""
    n = len(moduli)
    ranges = [range(moduli[c] // X[c][c]) for c in range(n)]
    for ts in product(*ranges):
        v = [0] * n
        for c, t in enumerate(ts):
            if t:
                for i in range(c + 1):
                    v[i] += t * X[c][i]
        yield tuple(x % d for x, d in zip(v, moduli))


def count_homs(m, Q):
    X = hom_lattice(m, Q)
    total = Q.order ** m.gens
    for c in range(len(X)):
        total //= X[c][c]
    return total


def _top_images(Q, ideal):
    """Projection to Q/IQ and a function mapping generator images to top vectors."""
    top, proj = Q.quotient(Q.ideal_times(ideal))
    return top, proj, ResidueField(Q.ring, ideal).field.degree


def _spanning_rank(Q, proj, top, deg, images, p):
    rows = []
    for v in images:
        w = v
        for _ in range(deg):
            rows.append(list(project(proj, top, w)))
            if Q.action is not None:
                w = Q.mat_vec(Q.action, w)
    return rank_mod_p(rows, p) if rows else 0


def epi_exists(m, Q, ideal, rng=None):
    """Whether some Lambda-epimorphism M -> Q exists, for an ideal-primary Q."""
    if Q.is_zero():
        return True
    g, k = m.gens, Q.k
    top, proj, deg = _top_images(Q, ideal)
    p = top.factors[0]
    X = hom_lattice(m, Q)

    def split(v):
        return [tuple(v[i * k:(i + 1) * k]) for i in range(g)]

    def full(v):
        return _spanning_rank(Q, proj, top, deg, split(v), p) == top.k

    # the top part of a hom depends only on the hom mod p
    gens = [row for row in X if any(x % p for x in row)]
    gens_p = []
    for row in gens:
        r = [x % p for x in row]
        if rank_mod_p(gens_p + [r], p) > len(gens_p):
            gens_p.append(r)
    if not gens_p:
        return False
    rng = rng or random.Random(0)
    for _ in range(64):
        c = [rng.randrange(p) for _ in gens_p]
        v = [sum(ci * row[j] for ci, row in zip(c, gens_p)) for j in range(g * k)]
        if full(v):
            return True
    s = len(gens_p)
    if p ** s > EPI_SEARCH_LIMIT:
        raise ResourceLimitError(f"epimorphism search space {p}^{s} exceeds the search limit")
    for c in product(range(p), repeat=s):
        if not any(c):
            continue
        v = [sum(ci * row[j] for ci, row in zip(c, gens_p)) for j in range(g * k)]
        if full(v):
            return True
    return False


def _classes_targets(m, ideal, bound):
    mu = mu_local(m, ideal)
    if not mu:
        return {}
    if isinstance(m.ring, LaurentZ):
        targets = _laurent_targets(m.ring, ideal, bound, mu)
    else:
        targets = _dedekind_targets(m.ring, ideal, bound, mu)
    out = {}
    for Q in targets:
        code = _part_code(Q, ideal)
        if code not in out and epi_exists(m, Q, ideal):
            out[code] = Q
    return out


_COLLECTORS = {
    "subgroups": _classes_subgroups,
    "truncation": _classes_truncation,
    "targets": _classes_targets,
}


# ----- fingerprints -----------------------------------------------------------

def _resolve_strategy(ring, strategy):
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    if strategy == "auto":
        return "truncation" if isinstance(ring, LaurentZ) else "subgroups"
    return strategy


def primary_classes(m, ideal, bound, strategy="auto"):
    """{part code: module} for the nonzero ideal-primary quotients of order <= bound."""
    m = as_presentation(m)
    return _COLLECTORS[_resolve_strategy(m.ring, strategy)](m, ideal, bound)


def assemble(ring, bound, per_ideal):
    """All direct sums (at most one part per ideal) of order <= bound, keyed by code."""
    items = [(I, sorted(classes.items(), key=lambda t: t[1].order)) for I, classes in per_ideal]
    members = {}

    def rec(i, chosen, order):
        if i == len(items):
            factors = combine_factors([q.factors for _, _, q in chosen])
            code = compose_code(ring, factors, [(I, c) for I, c, _ in chosen])
            if code not in members:
                mods = [q for _, _, q in chosen]
                members[code] = direct_sum_finite(mods) if mods else zero_finite(ring)
            return
        rec(i + 1, chosen, order)
        I, classes = items[i]
        for c, q in classes:
            if order * q.order > bound:
                break
            rec(i + 1, chosen + [(I, c, q)], order * q.order)

    rec(0, [], 1)
    return members


def fingerprint(m, bound, strategy="auto", ceiling=DEFAULT_CEILING):
    """Isomorphism classes of finite quotients of order <= bound."""
    if bound < 1:
        raise ValueError("bound must be positive")
    check_ceiling(bound, ceiling, "bound")
    m = as_presentation(m)
    strategy = _resolve_strategy(m.ring, strategy)
    per_ideal = []
    for I in (maximal_ideals(m.ring, bound) if bound >= 2 else []):
        classes = _COLLECTORS[strategy](m, I, bound)
        if classes:
            per_ideal.append((I, classes))
    members = assemble(m.ring, bound, per_ideal)
    return Fingerprint(bound, tuple(sorted(members)), members)


@dataclass(frozen=True)
class Distinguished:
    witness: str
    present_in: str

    def __str__(self):
        return f"Distinguished(witness {self.witness} only in {self.present_in})"


@dataclass(frozen=True)
class IndistinguishableUpTo:
    bound: int

    def __str__(self):
        return f"IndistinguishableUpTo({self.bound})"


def compare_fingerprints(fa, fb):
    """Verdict for two fingerprints; the witness is a differing class of largest order."""
    sa, sb = set(fa.classes), set(fb.classes)
    only = [(c, "first") for c in sa - sb] + [(c, "second") for c in sb - sa]
    if only:
        c, side = min(only, key=lambda t: (-code_order(t[0]), t[0]))
        return Distinguished(c, side)
    return IndistinguishableUpTo(fa.bound)


def compare(a, b, bound, strategy="auto", ceiling=DEFAULT_CEILING):
    """Bounded comparison of two modules by their finite quotients."""
    a, b = as_presentation(a), as_presentation(b)
    if a.ring != b.ring:
        raise ValueError(f"cannot compare modules over {a.ring} and {b.ring}")
    return compare_fingerprints(fingerprint(a, bound, strategy, ceiling),
                                fingerprint(b, bound, strategy, ceiling))


# ----- M / M(nu) --------------------------------------------------------------

def m_nu_parts(m, nu, ceiling=DEFAULT_CEILING):
    """{ideal: (M/M(nu))_I} over the maximal ideals where it is nonzero."""
    if nu < 1:
        raise ValueError("nu must be positive")
    check_ceiling(nu, ceiling, "nu")
    m = as_presentation(m)
    out = {}
    for I in (maximal_ideals(m.ring, nu) if nu >= 2 else []):
        if not mu_local(m, I):
            continue
        ell = int_log(nu, I.norm)
        _, n, vecs, action, mod = truncation_data(m, I, ell)
        T = from_lattice(m.ring, n, vecs, action, modulus=mod)[0]
        if T.is_zero():
            continue
        found = lattice_descent(m.ring, T.k, T.diag_lattice, T.action, [I], nu)
        inter = None
        for L in found:
            inter = L if inter is None else intersect(inter, L, T.k)
        Q = T.quotient(hnf_full(list(inter), T.k, T.exponent))[0]
        if not Q.is_zero():
            out[I] = Q
    return out


def m_nu_quotient(m, nu, ceiling=DEFAULT_CEILING):
    """M/M(nu), where M(nu) is the intersection of all submodules of index <= nu."""
    m = as_presentation(m)
    parts = m_nu_parts(m, nu, ceiling)
    if not parts:
        return zero_finite(m.ring)
    return direct_sum_finite(list(parts.values()))


# ----- epimorphisms between truncations ---------------------------------------

@dataclass(frozen=True)
class IdealEpiCount:
    ideal: str
    homomorphisms: int
    epimorphisms: int
    bijective: int


@dataclass(frozen=True)
class EpiIsoReport:
    nu: int
    order_first: int
    order_second: int
    per_ideal: tuple
    epimorphisms: int
    all_bijective: bool


def finite_homs(A, B, limit=HOM_LIMIT):
    """All Lambda-homomorphisms A -> B as tuples of generator images."""
    k, g = B.k, A.k
    rows, row_mod = [], []
    for j in range(g):
        # d_j * q_j = 0
        for l in range(k):
            row = [0] * (g * k)
            row[j * k + l] = A.factors[j]
            rows.append(row)
            row_mod.append(B.factors[l])
    if A.action is not None:
        for j in range(g):
            # sum_m A[m][j] q_m - B.action q_j = 0
            for l in range(k):
                row = [0] * (g * k)
                for mm in range(g):
                    row[mm * k + l] += A.action[mm][j]
                for t in range(k):
                    row[j * k + t] -= B.action[l][t]
                rows.append(row)
                row_mod.append(B.factors[l])
    var_mod = list(B.factors) * g
    X = kernel_mod(rows, row_mod, var_mod)
    total = 1
    for c in range(len(X)):
        total *= var_mod[c] // X[c][c]
    if total > limit:
        raise ResourceLimitError(f"{total} homomorphisms exceed the enumeration limit {limit}")
    for v in lattice_points(X, var_mod):
        yield [tuple(v[j * k:(j + 1) * k]) for j in range(g)]


def epi_implies_iso_check(a, b, nu, ceiling=DEFAULT_CEILING):
    """Enumerate the epimorphisms M/M(nu) -> N/N(nu) and test each for bijectivity."""
    pa, pb = m_nu_parts(a, nu, ceiling), m_nu_parts(b, nu, ceiling)
    ring = as_presentation(a).ring
    ideals = sorted(set(pa) | set(pb), key=lambda I: (I.norm, I.label))
    rows = []
    total_epi = 1
    all_bij = True
    for I in ideals:
        A = pa.get(I, zero_finite(ring))
        B = pb.get(I, zero_finite(ring))
        if B.is_zero():
            homs, epis, bij = 1, 1, int(A.is_zero())
        elif A.is_zero():
            homs, epis, bij = 1, 0, 0
        else:
            top, proj, deg = _top_images(B, I)
            p = top.factors[0]
            homs = epis = bij = 0
            for imgs in finite_homs(A, B):
                homs += 1
                if _spanning_rank(B, proj, top, deg, imgs, p) == top.k:
                    epis += 1
                    if A.order == B.order:
                        bij += 1
        rows.append(IdealEpiCount(I.label, homs, epis, bij))
        total_epi *= epis
        all_bij = all_bij and epis == bij
    oa = 1
    for q in pa.values():
        oa *= q.order
    ob = 1
    for q in pb.values():
        ob *= q.order
    return EpiIsoReport(nu, oa, ob, tuple(rows), total_epi, total_epi == 0 or all_bij)
