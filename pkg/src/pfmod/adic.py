"""Finite levels of I-adic completions: truncations, CRT splitting, Hensel inversion."""
from dataclasses import dataclass

from .arith import factorize
from .finite import DEFAULT_CEILING, FiniteModule, check_ceiling, from_lattice, project, support_ideals
from .ideals import (
    PrincipalIdeal, QuadIdeal, ResidueField, UnsupportedIdealError, check_maximal, ideal_power,
    power_quotient, quad_ideal_factorization, quotient_ring,
)
from .quotients import Fingerprint, as_presentation, fingerprint
from .rings import Laurent, QuadOrder, ZZ, ZZLoc
from .truncation import truncation_data


class NotInvertibleError(ValueError):
    """The element vanishes in the residue field; carries the residue image."""

    def __init__(self, elem, ideal, residue):
        super().__init__(f"{elem} is not a unit modulo {ideal.label} (residue {residue})")
        self.residue = residue


@dataclass(frozen=True)
class AdicTruncation:
    ideal: object
    level: int
    quotient: FiniteModule

    def power_generators(self):
        return ideal_power_generators(self.quotient.ring, self.ideal, self.level)

    def is_annihilated(self):
        """Whether every generator of I^k kills the quotient."""
        return all(self.quotient.annihilated_by(z) for z in self.power_generators())


def ideal_power_generators(ring, ideal, k):
    """Ring elements generating I^k."""
    if isinstance(ideal, PrincipalIdeal):
        return [ideal.gen ** k]
    if isinstance(ideal, QuadIdeal):
        return list(ideal_power(ring, ideal, k).elements())
    f = ideal.f_lift()
    return [Laurent(ideal.p ** (k - b)) * f ** b for b in range(k + 1)]


def adic_truncation(m, ideal, k, ceiling=DEFAULT_CEILING):
    """M / I^k M with the induced action."""
    if k < 1:
        raise ValueError("level must be positive")
    m = as_presentation(m)
    check_maximal(m.ring, ideal)
    check_ceiling(ideal.norm ** k, ceiling, "residue ring order")
    _, n, vecs, action, mod = truncation_data(m, ideal, k)
    q = from_lattice(m.ring, n, vecs, action, modulus=mod)[0]
    check_ceiling(q.order, ceiling, "truncation order")
    return AdicTruncation(ideal, k, q)


@dataclass(frozen=True)
class TowerMap:
    """The natural surjection M/I^(k+1)M -> M/I^k M on generator images."""
    source: FiniteModule
    target: FiniteModule
    images: tuple

    def is_module_map(self):
        S, T = self.source, self.target
        for j, d in enumerate(S.factors):
            if any(x for x in T.reduce([d * c for c in self.images[j]])):
                return False
        if S.action is None:
            return True
        for j in range(S.k):
            lhs = T.reduce([sum(S.action[i][j] * self.images[i][t] for i in range(S.k))
                            for t in range(T.k)])
            if lhs != T.mat_vec(T.action, self.images[j]):
                return False
        return True

    def is_surjective(self):
        T = self.target
        return T.sub_order(T.span(list(self.images))) == T.order


def tower_map(m, ideal, k):
    """The map from level k+1 to level k, built from generator lifts."""
    m = as_presentation(m)
    Pk1, n1, vecs1, act1, mod1 = truncation_data(m, ideal, k + 1)
    Pk, n0, vecs0, act0, mod0 = truncation_data(m, ideal, k)
    src, _, lifts = from_lattice(m.ring, n1, vecs1, act1, with_lift=True, modulus=mod1)
    dst, proj = from_lattice(m.ring, n0, vecs0, act0, modulus=mod0)
    e1 = Pk1.dim
    images = []
    for lift in lifts:
        v = []
        for b in range(m.gens):
            elem = Pk1.lift(tuple(lift[b * e1:(b + 1) * e1]))
            v.extend(Pk.embed(elem))
        images.append(project(proj, dst, v))
    return TowerMap(src, dst, tuple(images))


# ----- CRT --------------------------------------------------------------------

@dataclass(frozen=True)
class CrtFactor:
    ideal: object
    exponent: int
    ring_quotient: object

    @property
    def order(self):
        return self.ring_quotient.order

    @property
    def label(self):
        return f"{self.ideal.label}^{self.exponent}"


def _prime_power_factors(ring, target):
    if isinstance(ring, (ZZ, ZZLoc)):
        n = target.gen if isinstance(target, PrincipalIdeal) else int(target)
        if n <= 0:
            raise ValueError("a positive modulus is required")
        if isinstance(ring, ZZLoc):
            n = ring.strip_units(n)
        whole = quotient_ring(ring, PrincipalIdeal(ring, n))
        return whole, [(PrincipalIdeal(ring, p), e) for p, e in sorted(factorize(n).items())]
    if isinstance(ring, QuadOrder):
        J = target if isinstance(target, QuadIdeal) else QuadIdeal(ring, ((int(target), 0), (0, int(target))))
        if J.den != 1:
            raise ValueError("an integral ideal is required")
        return quotient_ring(ring, J), quad_ideal_factorization(ring, J)
    raise UnsupportedIdealError(f"CRT splitting is not available over {ring}")


def crt_decompose(ring, target, ceiling=DEFAULT_CEILING, all_pairs=False):
    """Factors Lambda/P^e of Lambda/J with the CRT map verified.

    Bijectivity is checked on every element. Sums and products are checked
    for every element against the additive generators, which already proves
    the map is a ring homomorphism; ``all_pairs`` checks every pair instead.
    Orders beyond ceiling**2 are refused.
    """
    whole, parts = _prime_power_factors(ring, target)
    check_ceiling(whole.order, ceiling * ceiling, "quotient ring order")
    factors = [CrtFactor(P, e, power_quotient(ring, P, e)) for P, e in parts]
    verify_crt(whole, factors, exhaustive=all_pairs)
    return factors


def crt_map(whole, factors, v):
    elem = whole.lift(v)
    return tuple(f.ring_quotient.embed(elem) for f in factors)


def verify_crt(whole, factors, exhaustive=True):
    """Check that Lambda/J -> prod Lambda/P^e is a bijective ring homomorphism.

    With ``exhaustive`` the second operand ranges over all elements, otherwise
    over an additive generating set (sufficient by bilinearity).
    """
    elems = list(whole.elements())
    gens = elems if exhaustive else [whole.reduce(b) for b in _unit_vectors(whole.dim)]
    images = {v: crt_map(whole, factors, v) for v in elems}
    if len(set(images.values())) != len(elems):
        raise AssertionError("CRT map is not injective")
    total = 1
    for f in factors:
        total *= f.order
    if total != len(elems):
        raise AssertionError("factor orders do not multiply to the quotient order")
    if crt_map(whole, factors, whole.one) != tuple(f.ring_quotient.one for f in factors):
        raise AssertionError("CRT map does not preserve 1")
    for u in elems:
        for v in gens:
            prod = images[whole.mul(u, v)]
            expect = tuple(f.ring_quotient.mul(a, b) for f, a, b in zip(factors, images[u], images[v]))
            if prod != expect:
                raise AssertionError("CRT map does not preserve products")
            add = images[whole.add(u, v)]
            expect = tuple(f.ring_quotient.add(a, b) for f, a, b in zip(factors, images[u], images[v]))
            if add != expect:
                raise AssertionError("CRT map does not preserve sums")
    return True


def _unit_vectors(n):
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


# ----- localization -----------------------------------------------------------

def is_primary_at(q, ideal):
    return q.is_zero() or support_ideals(q) == [ideal]


def localized_fingerprint(m, ideal, bound, ceiling=DEFAULT_CEILING):
    """Members of the fingerprint supported only at the given maximal ideal."""
    m = as_presentation(m)
    check_maximal(m.ring, ideal)
    fp = fingerprint(m, bound, ceiling=ceiling)
    keep = {c: q for c, q in fp.members.items() if is_primary_at(q, ideal)}
    return Fingerprint(bound, tuple(sorted(keep)), keep)


# ----- Hensel -----------------------------------------------------------------

def hensel_invert(ring, ideal, k, elem):
    """Inverse of a unit of Lambda/I^k as a reduced ring element, by Newton iteration."""
    if k < 1:
        raise ValueError("level must be positive")
    check_maximal(ring, ideal)
    elem = ring.coerce(elem)
    F = ResidueField(ring, ideal)
    r = F.reduce(elem)
    if F.field.is_zero(r):
        raise NotInvertibleError(elem, ideal, r)
    P = power_quotient(ring, ideal, k)
    a = P.embed(elem)
    y = P.embed(F.lift(F.field.inv(r)))
    two = P.embed(ring.from_int(2))
    precision = 1
    while precision < k:
        y = P.mul(y, P.sub(two, P.mul(a, y)))
        precision *= 2
    if P.mul(a, y) != P.one:
        raise AssertionError("Newton iteration failed to produce an inverse")
    return P.lift(y)


def multiplication_injective(ring, ideal, k, elem):
    """Whether multiplication by elem on Lambda/I^k is injective (exhaustive)."""
    P = power_quotient(ring, ideal, k)
    a = P.embed(ring.coerce(elem))
    zero = P.zero
    return all(P.mul(a, v) != zero for v in P.elements() if v != zero)
