"""Annihilators, local generator counts, Fitting ideals and projectivity."""
from dataclasses import dataclass, field
from itertools import combinations
from math import gcd

from .finite import DEFAULT_CEILING, from_lattice
from .ideals import (
    LaurentIdeal, PrincipalIdeal, QuadIdeal, check_maximal, ideal_power, ideal_product,
    maximal_ideals, unit_ideal,
)
from .intmat import kernel_mod
from .modules import SteinitzModule, mu_local as _mu_local, presentation_lattice, relation_snf
from .polymod import pmonic, ptrim
from .quotients import as_presentation, fingerprint
from .rings import Laurent, LaurentZ, QuadOrder, ZZ, ZZLoc, laurent_divmod_exact

ZERO = "zero"
UNIT = "unit"


class UnsupportedError(ValueError):
    """Raised for presentations outside the supported shapes."""


# ----- integer polynomial gcd -------------------------------------------------

def _content(f):
    g = 0
    for c in f:
        g = gcd(g, c)
    return g


def _primitive(f):
    c = _content(f)
    f = [x // c for x in f]
    return f if f[-1] > 0 else [-x for x in f]


def _prem(a, b):
    """Pseudo-remainder of a by b (coefficient lists, low degree first)."""
    a = list(a)
    lb, db = b[-1], len(b) - 1
    while len(a) - 1 >= db and any(a):
        shift = len(a) - 1 - db
        la = a[-1]
        a = [x * lb for x in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        while a and a[-1] == 0:
            a.pop()
    return a


def zpoly_gcd(a, b):
    """Gcd in Z[x] (positive leading coefficient) by the primitive remainder sequence."""
    a = [c for c in a]
    b = [c for c in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a:
        return _primitive(b) if b else []
    if not b:
        return _primitive(a)
    cont = gcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else [])
    return [cont * c for c in _primitive(a)]


def laurent_gcd(a, b):
    pa = a.normalized().poly_coeffs()
    pb = b.normalized().poly_coeffs()
    return Laurent.from_poly(zpoly_gcd(pa, pb)).normalized()


def laurent_lcm(a, b):
    g = laurent_gcd(a, b)
    q = laurent_divmod_exact(a * b, g)
    return q.normalized()


# ----- annihilators -----------------------------------------------------------

def _quad_finite_module(m):
    n, rels, action = presentation_lattice(m)
    return from_lattice(m.ring, n, rels, action)[0]


def _quad_annihilator_of(q):
    """The annihilator of a finite module over a quadratic order as a QuadIdeal."""
    if q.is_zero():
        return unit_ideal(q.ring)
    k = q.k
    rows, mods = [], []
    for i in range(k):
        for j in range(k):
            rows.append([int(i == j), q.action[i][j]])
            mods.append(q.factors[i])
    K = kernel_mod(rows, mods, [q.exponent, q.exponent])
    return QuadIdeal(q.ring, (tuple(K[0]), tuple(K[1])))


def _steinitz_annihilator(s):
    if s.rank >= 1:
        return ZERO
    best = {}
    for P, k in s.torsion:
        key = P.basis
        if key not in best or best[key][1] < k:
            best[key] = (P, k)
    out = unit_ideal(s.ring)
    for P, k in best.values():
        out = ideal_product(s.ring, out, ideal_power(s.ring, P, k))
    return out


def _laurent_cyclic_annihilators(m):
    """Per-generator annihilators of a presentation that is a sum of cyclic modules."""
    per_gen = [[] for _ in range(m.gens)]
    for col in m.relations:
        nz = [i for i, e in enumerate(col) if e]
        if len(nz) > 1:
            raise UnsupportedError("cyclic-sum required: a relation couples several generators")
        if nz:
            per_gen[nz[0]].append(col[nz[0]])
    out = []
    for rels in per_gen:
        if not rels:
            out.append(ZERO)
        elif len(rels) == 1:
            out.append(PrincipalIdeal(m.ring, rels[0]))
        elif len(rels) == 2:
            out.append(_prime_poly_ideal(rels))
        else:
            raise UnsupportedError("cyclic-sum required: at most two relations per generator")
    return out


def _prime_poly_ideal(rels):
    """(p, f) from relations given as an integer prime and a polynomial."""
    consts = [r for r in rels if r.width == 0 and r.min_exp == 0]
    if len(consts) != 1:
        raise UnsupportedError("cyclic-sum required: expected relations p and f(x)")
    p = abs(consts[0].terms[0][1])
    f = next(r for r in rels if r is not consts[0])
    coeffs = tuple(c % p for c in f.normalized().poly_coeffs())
    coeffs = ptrim(coeffs, p)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]           # x is a unit
    if not coeffs:
        return PrincipalIdeal(LaurentZ(), Laurent(p))
    if len(coeffs) == 1:
        return UNIT
    try:
        return LaurentIdeal(p, pmonic(coeffs, p))
    except ValueError as exc:
        raise UnsupportedError(f"cyclic-sum required: {exc}") from None


def _laurent_intersection(ideals):
    ideals = [I for I in ideals if I != UNIT]
    if any(I == ZERO for I in ideals):
        return ZERO
    if not ideals:
        return UNIT
    principal = [I for I in ideals if isinstance(I, PrincipalIdeal)]
    others = [I for I in ideals if isinstance(I, LaurentIdeal)]
    if principal and others:
        raise UnsupportedError("cyclic-sum required: mixed principal and (p, f) summands")
    if principal:
        g = principal[0].gen
        for I in principal[1:]:
            g = laurent_lcm(g, I.gen)
        return PrincipalIdeal(LaurentZ(), g)
    from .polymod import pdivmod
    p = others[0].p
    if any(I.p != p for I in others):
        raise UnsupportedError("cyclic-sum required: (p, f) summands over different primes")
    # (p, f) contains (p, g) exactly when f divides g mod p; a chain is required
    smallest = others[0]
    for I in others[1:]:
        if not pdivmod(I.f, smallest.f, p)[1]:
            smallest = I
        elif pdivmod(smallest.f, I.f, p)[1]:
            raise UnsupportedError("cyclic-sum required: (p, f) summands do not form a chain")
    return smallest


def annihilator(m):
    """Ann(M) as an ideal, or ZERO."""
    if isinstance(m, SteinitzModule):
        return _steinitz_annihilator(m)
    R = m.ring
    if isinstance(R, (ZZ, ZZLoc)):
        snf = relation_snf(m)
        if snf.free_rank:
            return ZERO
        d = snf.invariant_factors[-1] if snf.invariant_factors else 1
        return PrincipalIdeal(R, d)
    if isinstance(R, QuadOrder):
        if generic_rank_defect(m):
            return ZERO
        return _quad_annihilator_of(_quad_finite_module(m))
    return _laurent_intersection(_laurent_cyclic_annihilators(m))


def annihilator_elements(ideal):
    """Ring elements generating the ideal (empty for ZERO)."""
    if ideal == ZERO:
        return []
    if ideal == UNIT:
        return [1]
    if isinstance(ideal, PrincipalIdeal):
        return [ideal.gen]
    if isinstance(ideal, QuadIdeal):
        return list(ideal.elements())
    return [Laurent(ideal.p), ideal.f_lift()]


def truncated_profinite_annihilator(m, bound, probe_degree=1, probe_height=5, ceiling=DEFAULT_CEILING):
    """Probe elements that annihilate every finite quotient of order <= bound."""
    fp = fingerprint(m, bound, ceiling=ceiling)
    R = as_presentation(m).ring
    members = list(fp.members.values())
    h = probe_height
    if isinstance(R, (ZZ, ZZLoc)):
        probes = list(range(-h, h + 1))
    elif isinstance(R, QuadOrder):
        probes = [(a, b) for b in range(-h, h + 1) for a in range(-h, h + 1)]
    else:
        seen = set()
        probes = []
        for e in range(0, probe_degree + 1):
            for a in range(-h, h + 1):
                for b in range(-h, h + 1):
                    elem = Laurent({e: a}) - b if e else Laurent(-b)
                    if elem not in seen:
                        seen.add(elem)
                        probes.append(elem)
    return [z for z in probes if all(q.annihilated_by(z) for q in members)]


# ----- mu, Fitting ideals and generic rank ------------------------------------

def mu_local(m, ideal):
    """Minimal number of generators of M localized at the maximal ideal."""
    m = as_presentation(m)
    check_maximal(m.ring, ideal)
    return _mu_local(m, ideal)


def _det(ring, M):
    n = len(M)
    if n == 0:
        return ring.one
    if n == 1:
        return M[0][0]
    total = ring.zero
    for j in range(n):
        if ring.is_zero(M[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = ring.mul(M[0][j], _det(ring, minor))
        total = ring.add(total, term) if j % 2 == 0 else ring.sub(total, term)
    return total


def minors(m, size):
    """Nonzero size x size minors of the relation matrix (rows = generators)."""
    R = m.ring
    rows = m.rows
    out = []
    for ri in combinations(range(m.gens), size):
        for ci in combinations(range(m.ncols), size):
            d = _det(R, [[rows[i][j] for j in ci] for i in ri])
            if not R.is_zero(d):
                out.append(d)
    return out


@dataclass(frozen=True)
class FittingIdeal:
    kind: str                  # "zero", "unit" or "generators"
    generators: tuple = ()
    gcd: object = None         # single generator when the ring is a PID we handle directly

    def __str__(self):
        if self.kind != "generators":
            return self.kind
        return "(" + ", ".join(map(str, self.generators)) + ")"


def _normalize_elem(R, e):
    if isinstance(R, ZZLoc):
        return R.strip_units(e)
    if isinstance(R, ZZ):
        return abs(e)
    if isinstance(R, LaurentZ):
        return e.normalized()
    return e


def fitting_ideal(m, k):
    """Fitt_k(M): the ideal of (g-k)-minors of the relation matrix."""
    m = as_presentation(m)
    R = m.ring
    size = m.gens - k
    if size <= 0:
        return FittingIdeal(UNIT)
    found = minors(m, size) if size <= m.ncols else []
    if not found:
        return FittingIdeal(ZERO)
    gens = []
    for e in found:
        e = _normalize_elem(R, e)
        if e not in gens:
            gens.append(e)
    if isinstance(R, (ZZ, ZZLoc)):
        g = 0
        for e in gens:
            g = gcd(g, e)
        g = _normalize_elem(R, g)
        return FittingIdeal(UNIT if g == 1 else "generators", tuple(sorted(gens)), g)
    if isinstance(R, QuadOrder):
        J = QuadIdeal.from_generators(R, gens)
        return FittingIdeal(UNIT if J.norm == 1 else "generators", tuple(gens), J)
    if any(e.is_unit() for e in gens):
        return FittingIdeal(UNIT, tuple(gens))
    return FittingIdeal("generators", tuple(sorted(gens, key=lambda e: (e.width, e.terms))))


def generic_rank(ring, rows):
    """Rank over the fraction field, by division-free elimination."""
    A = [list(r) for r in rows]
    if not A or not A[0]:
        return 0
    rank, ncols = 0, len(A[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if not ring.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        p = A[rank][c]
        for i in range(rank + 1, len(A)):
            f = A[i][c]
            if ring.is_zero(f):
                continue
            A[i] = [ring.sub(ring.mul(p, A[i][j]), ring.mul(f, A[rank][j])) for j in range(ncols)]
        rank += 1
    return rank


def generic_rank_defect(m):
    """g minus the generic rank of the relations: the rank of M over the fraction field."""
    return m.gens - generic_rank(m.ring, m.rows)


# ----- projectivity -----------------------------------------------------------

@dataclass(frozen=True)
class NotProjective:
    reason: str
    witness: object = None

    def __str__(self):
        return f"NotProjective({self.reason})"


@dataclass(frozen=True)
class ProjectiveOfRank:
    rank: int
    certified_up_to_norm: int

    def __str__(self):
        return f"ProjectiveOfRank({self.rank}, norm <= {self.certified_up_to_norm})"


def projectivity_verdict(m, norm_bound):
    if norm_bound < 2:
        raise ValueError("norm_bound must be at least 2")
    if isinstance(m, SteinitzModule):
        if m.torsion:
            return NotProjective("nonzero torsion part", m.torsion[0][0])
        return ProjectiveOfRank(m.rank, norm_bound)
    nu = generic_rank_defect(m)
    if nu >= 1:
        fit = fitting_ideal(m, nu - 1)
        if fit.kind != ZERO:
            return NotProjective(f"Fitt_{nu - 1} is nonzero", fit.generators[0] if fit.generators else None)
    for I in maximal_ideals(m.ring, norm_bound):
        mu = _mu_local(m, I)
        if mu != nu:
            return NotProjective(f"mu at {I.label} is {mu}, generic rank is {nu}", I)
    return ProjectiveOfRank(nu, norm_bound)


@dataclass(frozen=True)
class InvariantReport:
    annihilator: object
    mu_table: dict = field(default_factory=dict)
    projectivity: object = None


def invariant_report(m, norm_bound):
    """Annihilator, mu over every maximal ideal of norm <= norm_bound, projectivity."""
    try:
        ann = annihilator(m)
    except UnsupportedError as exc:
        ann = f"unsupported: {exc}"
    pres = as_presentation(m)
    table = {I.label: _mu_local(pres, I) for I in maximal_ideals(pres.ring, norm_bound)}
    return InvariantReport(ann, table, projectivity_verdict(m, norm_bound))
