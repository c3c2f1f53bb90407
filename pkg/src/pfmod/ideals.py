"""Ideals, maximal-ideal enumeration, residue fields and finite quotient rings."""
from dataclasses import dataclass
from math import gcd

from .arith import is_prime, primes_upto
from .intmat import hnf, hnf_full, in_lattice, intersect, lattice_index, mat_vec, reduce_vector
from .polymod import (GF, irreducible_monics, is_irreducible, pmod,
                      poly_str, ptrim)
from .rings import ZZ, Laurent, LaurentZ, QuadOrder, ZZLoc, laurent_divmod_exact


class UnsupportedIdealError(ValueError):
    """Raised for ideal shapes outside the supported ones."""


class NotMaximalError(ValueError):
    """Raised when an operation requires a maximal ideal."""


@dataclass(frozen=True)
class PrincipalIdeal:
    """(gen) over ZZ, ZZ[1/S] or LaurentZ. A zero generator is the zero ideal."""
    ring: object
    gen: object

    def __post_init__(self):
        r = self.ring
        if isinstance(r, ZZLoc):
            object.__setattr__(self, "gen", r.strip_units(r.coerce(self.gen)))
        elif isinstance(r, ZZ):
            object.__setattr__(self, "gen", abs(r.coerce(self.gen)))
        elif isinstance(r, LaurentZ):
            object.__setattr__(self, "gen", r.coerce(self.gen).normalized())
        else:
            raise UnsupportedIdealError(f"principal ideal over {r} not supported here")

    @property
    def is_zero(self):
        return not self.gen

    @property
    def norm(self):
        if isinstance(self.ring, LaurentZ):
            raise UnsupportedIdealError("principal Laurent ideals have infinite index")
        return self.gen

    @property
    def label(self):
        return f"({self.gen})"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class QuadIdeal:
    """Fractional ideal (1/den) * L of a quadratic order.

    ``basis`` holds the two Hermite basis vectors (a, 0) and (b, c) in the
    coordinates of (1, w); the matrix with these as columns is [[a, b], [0, c]].
    """
    ring: QuadOrder
    basis: tuple
    den: int = 1

    def __post_init__(self):
        b = hnf_full([tuple(v) for v in self.basis], 2)
        g = gcd(gcd(b[0][0], b[1][0]), gcd(b[1][1], self.den))
        den = self.den
        if g > 1 and den > 1:
            g = gcd(g, den)
            b = tuple(tuple(x // g for x in v) for v in b)
            den //= g
        if den < 1:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "den", den)
        W = self.ring.action_matrix()
        for v in b:
            if not in_lattice(mat_vec(W, v), b):
                raise ValueError(f"lattice {self.hnf_rows} is not stable under w")

    @classmethod
    def from_hnf_rows(cls, ring, rows, den=1):
        (a, b), (z, c) = rows
        if z != 0:
            raise ValueError("Hermite matrix must be upper triangular")
        return cls(ring, ((a, 0), (b, c)), den)

    @classmethod
    def from_generators(cls, ring, gens, den=1):
        W = ring.action_matrix()
        vecs = []
        for g in gens:
            g = ring.coerce(g)
            vecs.append(g)
            vecs.append(tuple(mat_vec(W, g)))
        b = hnf(vecs, 2)
        if len(b) != 2:
            raise ValueError("zero ideal")
        return cls(ring, b, den)

    @property
    def hnf_rows(self):
        (a, _), (b, c) = self.basis
        return [[a, b], [0, c]]

    @property
    def norm_numerator(self):
        return lattice_index(self.basis)

    @property
    def norm(self):
        """Absolute norm; a Fraction-free integer for integral ideals."""
        if self.den != 1:
            from fractions import Fraction
            return Fraction(self.norm_numerator, self.den ** 2)
        return self.norm_numerator

    @property
    def is_integral(self):
        return self.den == 1

    @property
    def label(self):
        (a, b), (_, c) = self.hnf_rows
        s = f"[{a},{b};{c}]"
        return s if self.den == 1 else f"{s}/{self.den}"

    def __str__(self):
        return self.label

    def elements(self):
        """Z-basis as ring elements (numerators; divide by ``den``)."""
        return [tuple(v) for v in self.basis]


@dataclass(frozen=True)
class LaurentIdeal:
    """The ideal (p, f(x)) of Z[x^+-1], f monic over F_p given low degree first."""
    p: int
    f: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise UnsupportedIdealError(f"{self.p} is not prime")
        f = ptrim(self.f, self.p)
        if not f or f[-1] != 1:
            raise UnsupportedIdealError("f must be monic mod p")
        object.__setattr__(self, "f", f)

    @property
    def ring(self):
        return LaurentZ()

    @property
    def degree(self):
        return len(self.f) - 1

    @property
    def norm(self):
        return self.p ** self.degree

    @property
    def is_maximal(self):
        return self.degree >= 1 and self.f != (0, 1) and is_irreducible(self.f, self.p)

    @property
    def label(self):
        return f"({self.p},{poly_str(self.f)})"

    def __str__(self):
        return self.label

    def f_lift(self):
        return Laurent.from_poly(list(self.f))


def zz_ideal(n, ring=None):
    return PrincipalIdeal(ring or ZZ(), n)


# ----- enumeration -----------------------------------------------------------

def quad_primes_above(ring, p):
    """Prime ideals of the order above the rational prime p."""
    t, n = ring.trace, ring.norm_w
    roots = [r for r in range(p) if (r * r - t * r + n) % p == 0]
    if not roots:
        return [QuadIdeal(ring, ((p, 0), (0, p)))]
    return [QuadIdeal(ring, ((p, 0), (-r % p, 1))) for r in roots]


def maximal_ideals(ring, norm_bound):
    """All maximal ideals with residue field of size <= norm_bound, each once."""
    if norm_bound < 2:
        raise ValueError("norm_bound must be at least 2")
    out = []
    if isinstance(ring, ZZLoc):
        out = [PrincipalIdeal(ring, p) for p in primes_upto(norm_bound) if p not in ring.S]
    elif isinstance(ring, ZZ):
        out = [PrincipalIdeal(ring, p) for p in primes_upto(norm_bound)]
    elif isinstance(ring, QuadOrder):
        for p in primes_upto(norm_bound):
            out.extend(P for P in quad_primes_above(ring, p) if P.norm <= norm_bound)
    elif isinstance(ring, LaurentZ):
        for p in primes_upto(norm_bound):
            d = 1
            while p ** d <= norm_bound:
                out.extend(LaurentIdeal(p, f) for f in irreducible_monics(p, d) if f != (0, 1))
                d += 1
    else:
        raise TypeError(f"unknown ring {ring!r}")
    return sorted(out, key=ideal_sort_key)


def ideal_sort_key(I):
    if isinstance(I, PrincipalIdeal):
        return (I.norm, 0, I.label)
    if isinstance(I, QuadIdeal):
        return (I.norm, 0, tuple(map(tuple, I.hnf_rows)))
    return (I.norm, I.p, I.f)


def maximal_ideals_above(ring, p, norm_bound=None):
    """Maximal ideals containing the prime p (with norm <= norm_bound if given)."""
    if isinstance(ring, (ZZ, ZZLoc)):
        if isinstance(ring, ZZLoc) and p in ring.S:
            return []
        return [PrincipalIdeal(ring, p)]
    if isinstance(ring, QuadOrder):
        return [P for P in quad_primes_above(ring, p) if norm_bound is None or P.norm <= norm_bound]
    if isinstance(ring, LaurentZ):
        if norm_bound is None:
            raise ValueError("a norm bound is required over LaurentZ")
        out = []
        d = 1
        while p ** d <= norm_bound:
            out.extend(LaurentIdeal(p, f) for f in irreducible_monics(p, d) if f != (0, 1))
            d += 1
        return out
    raise TypeError(f"unknown ring {ring!r}")


def is_maximal(ring, ideal):
    if isinstance(ideal, PrincipalIdeal):
        if isinstance(ring, LaurentZ):
            return False
        return is_prime(ideal.gen) and not (isinstance(ring, ZZLoc) and ideal.gen in ring.S)
    if isinstance(ideal, QuadIdeal):
        if ideal.den != 1:
            return False
        N = ideal.norm
        if is_prime(N):
            return True
        (a, b), (_, c) = ideal.hnf_rows
        return a == c and b == 0 and is_prime(a) and len(quad_primes_above(ring, a)) == 1 \
            and quad_primes_above(ring, a)[0] == ideal
    if isinstance(ideal, LaurentIdeal):
        return ideal.is_maximal
    return False


def check_maximal(ring, ideal):
    if not is_maximal(ring, ideal):
        raise NotMaximalError(f"{ideal} is not a maximal ideal of {ring}")


def ideal_prime(ideal):
    """The rational prime under a maximal ideal."""
    if isinstance(ideal, PrincipalIdeal):
        return ideal.gen
    if isinstance(ideal, QuadIdeal):
        return ideal.hnf_rows[0][0]
    return ideal.p


# ----- residue fields --------------------------------------------------------

class ResidueField:
    """Explicit isomorphism Lambda/I -> F_q for a maximal ideal I."""

    def __init__(self, ring, ideal):
        check_maximal(ring, ideal)
        self.ring = ring
        self.ideal = ideal
        p = ideal_prime(ideal)
        self.p = p
        if isinstance(ideal, PrincipalIdeal):
            self.field = GF(p)
            self.kind = "int"
        elif isinstance(ideal, QuadIdeal):
            (a, b), (_, c) = ideal.hnf_rows
            if c == 1:
                self.field = GF(p)
                self.kind = "split"
                self.w_image = -b % p
            else:
                self.field = GF(p, (ring.norm_w % p, -ring.trace % p, 1))
                self.kind = "inert"
        else:
            self.field = GF(p, ideal.f)
            self.kind = "laurent"
        self.order = self.field.order

    def reduce(self, elem):
        F = self.field
        if self.kind == "int":
            return F.from_int(elem)
        if self.kind == "split":
            return F.from_int(elem[0] + elem[1] * self.w_image)
        if self.kind == "inert":
            return F.elem((elem[0], elem[1]))
        if not elem:
            return F.zero
        xi = F.gen
        acc = F.zero
        for e, c in elem.terms:
            acc = F.add(acc, F.scale(c % self.p, F.pow(xi, e)))
        return acc

    def lift(self, fe):
        """A ring element reducing to the field element fe."""
        if self.kind in ("int",):
            return fe[0]
        if self.kind == "split":
            return (fe[0], 0)
        if self.kind == "inert":
            return (fe[0], fe[1])
        return Laurent.from_poly(list(fe))

    def generator_image(self):
        """Image of the ring generator (w or x); None for ZZ."""
        if self.kind == "int":
            return None
        if self.kind == "split":
            return self.field.from_int(self.w_image)
        return self.field.gen


def residue_field_reduce(ring, ideal, elem):
    """Image of elem in the explicit finite field Lambda/ideal."""
    return ResidueField(ring, ideal).reduce(ring.coerce(elem))


# ----- products and membership ----------------------------------------------

def ideal_product(ring, a, b):
    if getattr(a, "ring", ring) != ring or getattr(b, "ring", ring) != ring:
        raise ValueError("ideals over different rings")
    if isinstance(ring, QuadOrder):
        a, b = _as_quad(ring, a), _as_quad(ring, b)
        gens = [ring.mul(x, y) for x in a.elements() for y in b.elements()]
        return QuadIdeal.from_generators(ring, gens, a.den * b.den)
    if isinstance(ring, (ZZ, ZZLoc)):
        return PrincipalIdeal(ring, a.gen * b.gen)
    if isinstance(ring, LaurentZ):
        if isinstance(a, PrincipalIdeal) and isinstance(b, PrincipalIdeal):
            return PrincipalIdeal(ring, a.gen * b.gen)
        raise UnsupportedIdealError("Laurent ideal products are limited to principal ideals")
    raise TypeError(f"unknown ring {ring!r}")


def _as_quad(ring, I):
    if isinstance(I, QuadIdeal):
        return I
    if I is None or I == "unit":
        return unit_ideal(ring)
    raise UnsupportedIdealError(f"not a quadratic ideal: {I!r}")


def unit_ideal(ring):
    if isinstance(ring, QuadOrder):
        return QuadIdeal(ring, ((1, 0), (0, 1)))
    if isinstance(ring, (ZZ, ZZLoc, LaurentZ)):
        return PrincipalIdeal(ring, 1)
    raise TypeError(f"unknown ring {ring!r}")


def ideal_power(ring, I, k):
    out = unit_ideal(ring)
    for _ in range(k):
        out = ideal_product(ring, out, I)
    return out


def ideal_membership(ring, ideal, elem):
    elem = ring.coerce(elem)
    if isinstance(ideal, QuadIdeal):
        v = (elem[0] * ideal.den, elem[1] * ideal.den)
        return in_lattice(v, ideal.basis)
    if isinstance(ideal, LaurentIdeal):
        p = ideal.p
        if not elem:
            return True
        poly = elem.shift(-elem.min_exp).poly_coeffs()
        return not pmod(ptrim(poly, p), ideal.f, p)
    if isinstance(ideal, PrincipalIdeal):
        if isinstance(ring, LaurentZ):
            if not ideal.gen:
                return not elem
            return laurent_divmod_exact(elem, ideal.gen) is not None
        if ideal.gen == 0:
            return elem == 0
        return elem % ideal.gen == 0
    raise UnsupportedIdealError(f"unsupported ideal {ideal!r}")


def ideal_contains(ring, big, small):
    """True when the integral ideal ``small`` is contained in ``big``."""
    if isinstance(small, QuadIdeal):
        if small.den != 1:
            raise UnsupportedIdealError("containment implemented for integral ideals")
        return all(ideal_membership(ring, big, v) for v in small.elements())
    if isinstance(small, PrincipalIdeal):
        return ideal_membership(ring, big, small.gen)
    if isinstance(small, LaurentIdeal):
        return ideal_membership(ring, big, small.p) and ideal_membership(ring, big, small.f_lift())
    raise UnsupportedIdealError(f"unsupported ideal {small!r}")


def quad_ideal_intersection(ring, a, b):
    if a.den != 1 or b.den != 1:
        raise UnsupportedIdealError("intersection implemented for integral ideals")
    return QuadIdeal(ring, intersect(a.basis, b.basis, 2))


def ideal_generators(ring, ideal):
    """Finitely many ring elements generating the ideal (integral ideals only)."""
    if isinstance(ideal, PrincipalIdeal):
        return [ideal.gen if not isinstance(ring, LaurentZ) else ideal.gen]
    if isinstance(ideal, QuadIdeal):
        if ideal.den != 1:
            raise UnsupportedIdealError("fractional ideal")
        return ideal.elements()
    return [Laurent(ideal.p), ideal.f_lift()]


# ----- finite quotient rings --------------------------------------------------

def _poly_mod_monic(a, F):
    """Remainder of integer polynomial a by the monic integer polynomial F."""
    a = list(a)
    n = len(F) - 1
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i]
        if c:
            for j in range(n + 1):
                a[i - n + j] -= c * F[j]
    a = a[:n] + [0] * max(0, n - len(a))
    return a


def _int_poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


class QuotientRing:
    """The finite ring Lambda/J as Z^dim modulo a full-rank lattice.

    ``action`` is the matrix of multiplication by the ring generator (w or x)
    in the chosen basis, or None over ZZ. Elements are reduced coordinate
    tuples. Build instances with ``quotient_ring`` or ``power_quotient``.
    """

    def __init__(self, ring, dim, basis, action, embed_fn, lift_fn, label=""):
        self.ring = ring
        self.dim = dim
        self.basis = basis
        self.action = action
        self._embed = embed_fn
        self._lift = lift_fn
        self.label = label
        self.order = lattice_index(basis)

    def reduce(self, v):
        return reduce_vector(v, self.basis)

    def embed(self, elem):
        return self.reduce(self._embed(self.ring.coerce(elem)))

    def lift(self, v):
        return self._lift(v)

    def mul(self, u, v):
        return self.embed(self.ring.mul(self.lift(u), self.lift(v)))

    def add(self, u, v):
        return self.reduce([a + b for a, b in zip(u, v)])

    def sub(self, u, v):
        return self.reduce([a - b for a, b in zip(u, v)])

    @property
    def one(self):
        return self.embed(self.ring.one)

    @property
    def zero(self):
        return self.embed(self.ring.zero)

    def elements(self):
        """All reduced representatives, in a fixed order."""
        pivots = [self.basis[j][j] for j in range(self.dim)]

        def rec(j, prefix):
            if j < 0:
                yield tuple(prefix)
                return
            for t in range(pivots[j]):
                prefix[j] = t
                yield from rec(j - 1, prefix)
            prefix[j] = 0

        yield from rec(self.dim - 1, [0] * self.dim)

    def is_unit(self, u):
        return self.ring_inverse_bruteforce(u) is not None

    def ring_inverse_bruteforce(self, u):
        one = self.one
        for v in self.elements():
            if self.mul(u, v) == one:
                return v
        return None

    def pow(self, u, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, u)
            u = self.mul(u, u)
            e >>= 1
        return r

    def __repr__(self):
        return f"QuotientRing({self.ring}, {self.label}, order={self.order})"


def quotient_ring(ring, ideal):
    """Lambda/ideal for a finite-index integral ideal."""
    if isinstance(ring, (ZZ, ZZLoc)):
        n = ideal.gen if isinstance(ideal, PrincipalIdeal) else int(ideal)
        if n <= 0:
            raise ValueError("ideal must have finite index")
        return QuotientRing(ring, 1, ((n,),), None, lambda a: (a,), lambda v: v[0], f"({n})")
    if isinstance(ring, QuadOrder):
        if ideal.den != 1:
            raise ValueError("integral ideal required")
        return QuotientRing(ring, 2, ideal.basis, ring.action_matrix(), lambda a: a,
                            lambda v: (v[0], v[1]), ideal.label)
    raise UnsupportedIdealError("use power_quotient for Laurent ideals")


def power_quotient(ring, ideal, k):
    """Lambda/I^k for a maximal ideal I and k >= 1."""
    if k < 1:
        raise ValueError("k must be positive")
    if isinstance(ring, (ZZ, ZZLoc)):
        return quotient_ring(ring, PrincipalIdeal(ring, ideal.gen ** k))
    if isinstance(ring, QuadOrder):
        return quotient_ring(ring, ideal_power(ring, ideal, k))
    if isinstance(ring, LaurentZ):
        return _laurent_power_quotient(ideal, k)
    raise TypeError(f"unknown ring {ring!r}")


def _laurent_power_quotient(I, k):
    p, e = I.p, I.degree
    f = list(I.f)
    F = [1]
    for _ in range(k):
        F = _int_poly_mul(F, f)
    n = e * k
    vecs = []
    fb = [1]
    for b in range(k + 1):
        a = k - b
        g = [c * p ** a for c in fb]
        for i in range(n):
            vecs.append(_poly_mod_monic([0] * i + g, F))
        fb = _int_poly_mul(fb, f)
    basis = hnf_full(vecs, n, p ** k)
    # companion matrix of F: column j = x * x^j
    action = [[0] * n for _ in range(n)]
    for j in range(n):
        col = _poly_mod_monic([0] * (j + 1) + [1], F)
        for i in range(n):
            action[i][j] = col[i]
    ring = LaurentZ()
    unit_order = (p ** e) ** k - (p ** e) ** (k - 1)
    x_inv_holder = {}

    def embed(a):
        if not a:
            return (0,) * n
        s = a.min_exp
        poly = a.shift(-s).poly_coeffs() if s < 0 else a.poly_coeffs()
        v = _poly_mod_monic(poly + [0] * max(0, n - len(poly)), F)
        if s < 0:
            xi = x_inv_holder.get("v")
            if xi is None:
                xi = qr.pow(qr.reduce(_poly_mod_monic([0, 1] + [0] * max(0, n - 2), F)), unit_order - 1)
                x_inv_holder["v"] = xi
            for _ in range(-s):
                v = list(qr.mul(tuple(v), xi))
        return tuple(v)

    def lift(v):
        return Laurent.from_poly(list(v))

    qr = QuotientRing(ring, n, basis, action, embed, lift, f"{I.label}^{k}")
    # mul on polynomial representatives must not recurse through x^-1
    def mul(u, v, _F=F, _qr=qr):
        return _qr.reduce(_poly_mod_monic(_int_poly_mul(list(u), list(v)) or [0], _F))
    qr.mul = mul
    return qr


def quad_ideal_factorization(ring, ideal):
    """Prime factorization [(P, e)] of an integral quadratic ideal."""
    from .arith import factorize
    N = ideal.norm
    out = []
    for p in sorted(factorize(N)):
        for P in quad_primes_above(ring, p):
            e = 0
            Pe = P
            while ideal_contains(ring, Pe, ideal):
                e += 1
                Pe = ideal_product(ring, Pe, P)
            if e:
                out.append((P, e))
    return out
