"""Class groups of imaginary quadratic orders and Steinitz-class genus tables."""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd, isqrt

from .arith import is_squarefree
from .finite import DEFAULT_CEILING, check_ceiling
from .ideals import QuadIdeal, ideal_product, unit_ideal
from .invariants import ProjectiveOfRank, generic_rank_defect, projectivity_verdict
from .modules import FpModule, SteinitzModule
from .quotients import IndistinguishableUpTo, compare_fingerprints, fingerprint
from .rings import QuadOrder


class NotProjectiveError(ValueError):
    """A Steinitz class was requested for a module without a projective part."""


# ----- binary quadratic forms -------------------------------------------------

def reduce_form(a, b, c):
    D = b * b - 4 * a * c
    while True:
        if c < a:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            b = r
            c = (b * b - D) // (4 * a)
            continue
        break
    if b < 0 and (b == -a or a == c):
        b = -b
    return a, b, c


def is_reduced(form):
    a, b, c = form
    if not abs(b) <= a <= c:
        return False
    return b >= 0 or (abs(b) != a and a != c)


def reduced_forms(D):
    """Reduced primitive positive definite forms of discriminant D < 0."""
    out = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if is_reduced((a, b, c)):
                out.append((a, b, c))
    return sorted(out)


def compose_forms(f, g):
    """Dirichlet composition followed by reduction."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = b1 * b1 - 4 * a1 * c1
    e = gcd(gcd(a1, a2), (b1 + b2) // 2)
    a3 = a1 * a2 // (e * e)
    m1, m2 = 2 * a1 // e, 2 * a2 // e
    for B in range(-a3, a3 + 1):
        if (B - b1) % m1 == 0 and (B - b2) % m2 == 0 and (B * B - D) % (4 * a3) == 0:
            return reduce_form(a3, B, (B * B - D) // (4 * a3))
    raise ArithmeticError(f"forms {f} and {g} do not compose")


def principal_form(D):
    t = D % 2
    return (1, t, (t - D) // 4)


def fundamental_discriminant(d):
    return d if d % 4 == 1 else 4 * d


@dataclass(frozen=True)
class FormClassGroup:
    discriminant: int
    forms: tuple
    table: tuple
    identity: int

    @property
    def order(self):
        return len(self.forms)

    def index(self, form):
        return self.forms.index(reduce_form(*form))

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        a, b, c = self.forms[i]
        return self.index((a, -b, c))

    def power(self, i, k):
        out = self.identity
        for _ in range(k % self.order):
            out = self.mul(out, i)
        return out

    def verify(self):
        """Closure, identity, inverses and associativity, checked exhaustively."""
        n = self.order
        for f in self.forms:
            a, b, c = f
            assert is_reduced(f) and b * b - 4 * a * c == self.discriminant
        for i in range(n):
            assert self.mul(self.identity, i) == i == self.mul(i, self.identity)
            assert self.mul(i, self.inverse(i)) == self.identity
            for j in range(n):
                assert self.mul(i, j) == self.mul(j, i)
                for k in range(n):
                    assert self.mul(self.mul(i, j), k) == self.mul(i, self.mul(j, k))
        return True


@lru_cache(maxsize=None)
def class_group(d):
    if d >= 0:
        raise ValueError("only imaginary quadratic orders (d < 0) are supported")
    if not is_squarefree(-d):
        raise ValueError(f"{d} is not squarefree")
    D = fundamental_discriminant(d)
    forms = tuple(reduced_forms(D))
    index = {f: i for i, f in enumerate(forms)}
    table = tuple(tuple(index[compose_forms(f, g)] for g in forms) for f in forms)
    return FormClassGroup(D, forms, table, index[principal_form(D)])


def _group_for(ring, group=None):
    if group is not None:
        return group
    return class_group(ring.d)


# ----- ideals and classes -----------------------------------------------------

def ideal_form(ring, ideal):
    """The norm form N(x*alpha + y*beta) / N(I) of the Hermite basis (alpha, beta)."""
    (a, b), (_, c) = ideal.hnf_rows
    t, n = ring.trace, ring.norm_w
    return (a // c, (2 * b + t * c) // c, (b * b + t * b * c + n * c * c) // (a * c))


def ideal_to_class(group, ideal):
    if ideal is None:
        raise ValueError("the zero ideal has no class")
    ring = ideal.ring
    return group.index(ideal_form(ring, ideal))


def class_ideal(group, ring, i):
    """A fixed integral representative ideal of class i."""
    a, b, _ = group.forms[i]
    return QuadIdeal(ring, ((a, 0), ((b - ring.trace) // 2, 1)))


def _wedge_ideal(ring, cols, r):
    """The ideal generated by one row-set's r x r minors of the relation columns.

    For a rank-r direct summand K spanned by the columns, this ideal represents
    the class of the top exterior power of K.
    """
    from .invariants import _det
    g = len(cols[0])
    rows = list(combinations(range(g), r))
    colsets = list(combinations(range(len(cols)), r))
    for rs in rows:
        vals = []
        for cs in colsets:
            M = [[cols[j][i] for j in cs] for i in rs]
            vals.append(_det(ring, M))
        nz = [v for v in vals if not ring.is_zero(v)]
        if nz:
            return QuadIdeal.from_generators(ring, nz)
    raise ValueError("relation columns have no nonzero minor of the expected size")


def steinitz_class(m, group=None, norm_bound=50):
    """Class of the ideal factor of a projective module over a quadratic order.

    Accepts a SteinitzModule, a list of ideals (a sum of rank-one projectives,
    classified by the product), or a presentation that passes the projectivity
    test up to norm_bound.
    """
    if isinstance(m, (list, tuple)):
        if not m:
            raise ValueError("empty ideal list")
        ring = m[0].ring
        G = _group_for(ring, group)
        prod = unit_ideal(ring)
        for I in m:
            prod = ideal_product(ring, prod, I)
        return ideal_to_class(G, prod)
    G = _group_for(m.ring, group)
    if isinstance(m, SteinitzModule):
        if m.rank < 1:
            raise NotProjectiveError("a torsion module has no Steinitz class")
        if m.torsion:
            raise NotProjectiveError("the module has torsion; it is not projective")
        return ideal_to_class(G, m.ideal)
    if not isinstance(m, FpModule) or not isinstance(m.ring, QuadOrder):
        raise TypeError("a module over a quadratic order is required")
    verdict = projectivity_verdict(m, norm_bound)
    if not isinstance(verdict, ProjectiveOfRank):
        raise NotProjectiveError(f"presentation is not projective: {verdict}")
    r = m.gens - generic_rank_defect(m)
    if r == 0:
        return G.identity
    # M + K = Lambda^g with K the relation span, so [M] = [K]^-1
    return G.inverse(ideal_to_class(G, _wedge_ideal(m.ring, m.relations, r)))


# ----- genus tables -----------------------------------------------------------

@dataclass(frozen=True)
class GenusEntry:
    class_index: object
    form: object
    candidate: SteinitzModule


@dataclass(frozen=True)
class GenusTable:
    base: SteinitzModule
    entries: tuple
    fingerprint_bound: int
    cross_check: tuple            # (i, j, verdict) for every pair of entries
    class_number: int

    @property
    def all_indistinguishable(self):
        return all(isinstance(v, IndistinguishableUpTo) for _, _, v in self.cross_check)

    @property
    def distinct_classes(self):
        keys = [e.class_index for e in self.entries]
        return len(set(keys)) == len(keys)


def genus_candidates(m, bound, group=None, ceiling=DEFAULT_CEILING):
    """One candidate T + Lambda^(r-1) + I_c per ideal class, cross-checked by fingerprints."""
    if not isinstance(m, SteinitzModule):
        raise TypeError("genus tables need a module in Steinitz form")
    check_ceiling(bound, ceiling, "bound")
    G = _group_for(m.ring, group)
    if m.rank < 1:
        entries = (GenusEntry(None, None, m),)
    else:
        own = ideal_to_class(G, m.ideal)
        entries = []
        for i, form in enumerate(G.forms):
            if i == own:
                cand = m
            else:
                cand = SteinitzModule(m.ring, m.torsion, m.rank, class_ideal(G, m.ring, i),
                                      label=f"class {form}")
            entries.append(GenusEntry(i, form, cand))
        entries = tuple(entries)
    prints = [fingerprint(e.candidate, bound, ceiling=ceiling) for e in entries]
    checks = tuple((i, j, compare_fingerprints(prints[i], prints[j]))
                   for i, j in combinations(range(len(entries)), 2))
    return GenusTable(m, entries, bound, checks, G.order)
