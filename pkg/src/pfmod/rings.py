"""The four supported coefficient rings and their element arithmetic.

* ``ZZ``: the integers; elements are ``int``.
* ``ZZLoc(S)``: Z with the primes in S inverted; elements are ``int`` (every
  finite module of interest has order prime to S, so integer entries suffice).
* ``QuadOrder(d)``: the maximal order Z[w] of Q(sqrt d), d < 0 squarefree;
  elements are pairs ``(a, b)`` meaning a + b*w.
* ``LaurentZ``: Z[x, 1/x]; elements are ``Laurent`` values.
"""
from dataclasses import dataclass
from math import gcd

from .arith import is_prime, is_squarefree


class Laurent:
    """Immutable Laurent polynomial with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, int):
            coeffs = {0: coeffs}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        acc = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def x(cls, power=1):
        return cls({power: 1})

    @classmethod
    def from_poly(cls, coeffs, shift=0):
        """From a coefficient list, lowest degree first."""
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in reversed(self.terms):
            mono = "" if e == 0 else ("x" if e == 1 else f"x^{e}")
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}{mono}"
            out.append(s)
        return "+".join(out).replace("+-", "-")

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent(other)
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent(other)
        return Laurent(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Laurent(tuple((e, c * other) for e, c in self.terms))
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return Laurent(acc)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            if len(self.terms) != 1 or abs(self.terms[0][1]) != 1:
                raise ValueError("only unit monomials have negative powers")
            e, c = self.terms[0]
            return Laurent({e * k: 1 if k % 2 == 0 else c})
        r = Laurent(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    @property
    def min_exp(self):
        return self.terms[0][0] if self.terms else 0

    @property
    def max_exp(self):
        return self.terms[-1][0] if self.terms else 0

    @property
    def width(self):
        """Degree after shifting so that the lowest exponent is 0."""
        return self.max_exp - self.min_exp if self.terms else -1

    def shift(self, k):
        return Laurent(tuple((e + k, c) for e, c in self.terms))

    def poly_coeffs(self):
        """Coefficient list from exponent 0 upward; requires min_exp >= 0."""
        if self.terms and self.min_exp < 0:
            raise ValueError("negative exponents present")
        if not self.terms:
            return []
        out = [0] * (self.max_exp + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def content(self):
        g = 0
        for _, c in self.terms:
            g = gcd(g, c)
        return g

    def normalized(self):
        """Associate with lowest exponent 0 and positive leading coefficient."""
        if not self.terms:
            return self
        f = self.shift(-self.min_exp)
        return -f if f.terms[-1][1] < 0 else f

    def is_unit(self):
        return len(self.terms) == 1 and abs(self.terms[0][1]) == 1

    def eval_int(self, x, m):
        """Value at an integer x modulo m (x must be invertible mod m if exponents are negative)."""
        acc = 0
        for e, c in self.terms:
            acc += c * pow(x, e, m)
        return acc % m


def laurent_divmod_exact(a, b):
    """Exact quotient a / b in Z[x^+-1] or None when b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return Laurent()
    # shift both to polynomials; divide from the top
    sa, sb = a.min_exp, b.min_exp
    num = a.shift(-sa).poly_coeffs()
    den = b.shift(-sb).poly_coeffs()
    if len(num) < len(den):
        return None
    q = [0] * (len(num) - len(den) + 1)
    num = list(num)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            return None
        c //= lead
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        return None
    return Laurent.from_poly(q, sa - sb)


class Ring:
    """Common element arithmetic interface."""

    tag = "?"
    has_action = False

    def __str__(self):
        return self.tag

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def coerce(self, a):
        return a

    def is_unit(self, a):
        return a in (1, -1)


@dataclass(frozen=True)
class ZZ(Ring):
    tag = "ZZ"

    def __str__(self):
        return "ZZ"

    def coerce(self, a):
        if isinstance(a, bool) or not isinstance(a, int):
            raise TypeError(f"integer expected, got {a!r}")
        return a


@dataclass(frozen=True)
class ZZLoc(Ring):
    S: tuple = ()

    def __post_init__(self):
        s = tuple(sorted(set(self.S)))
        if len(s) != len(self.S):
            raise ValueError("inverted primes must be distinct")
        for p in s:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "S", s)

    @property
    def tag(self):
        return "ZZ[1/" + ",".join(map(str, self.S)) + "]"

    def __str__(self):
        return self.tag

    def coerce(self, a):
        return ZZ().coerce(a)

    def strip_units(self, n):
        """Remove the inverted primes from n (result is the nonnegative associate)."""
        n = abs(n)
        if n == 0:
            return 0
        for p in self.S:
            while n % p == 0:
                n //= p
        return n

    def is_unit(self, a):
        return a != 0 and self.strip_units(a) == 1


@dataclass(frozen=True)
class QuadOrder(Ring):
    d: int = -1

    has_action = True

    def __post_init__(self):
        if self.d >= 0:
            raise ValueError("only imaginary quadratic orders (d < 0) are supported")
        if not is_squarefree(self.d):
            raise ValueError(f"{self.d} is not squarefree")

    @property
    def tag(self):
        return f"QO({self.d})"

    def __str__(self):
        return self.tag

    @property
    def trace(self):
        """t with w^2 = t*w - n."""
        return 1 if self.d % 4 == 1 else 0

    @property
    def norm_w(self):
        return (1 - self.d) // 4 if self.d % 4 == 1 else -self.d

    @property
    def disc(self):
        return self.d if self.d % 4 == 1 else 4 * self.d

    def action_matrix(self):
        """Matrix of multiplication by w on the basis (1, w); column j is the image of basis j."""
        return [[0, -self.norm_w], [1, self.trace]]

    def coerce(self, a):
        if isinstance(a, int) and not isinstance(a, bool):
            return (a, 0)
        if isinstance(a, (tuple, list)) and len(a) == 2 and all(isinstance(x, int) for x in a):
            return (a[0], a[1])
        raise TypeError(f"quadratic order element expected, got {a!r}")

    def from_int(self, n):
        return (n, 0)

    @property
    def omega(self):
        return (0, 1)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        t, n = self.trace, self.norm_w
        return (a[0] * b[0] - n * a[1] * b[1], a[0] * b[1] + a[1] * b[0] + t * a[1] * b[1])

    def is_zero(self, a):
        return a == (0, 0)

    def conj(self, a):
        # conj(w) = t - w
        return (a[0] + self.trace * a[1], -a[1])

    def norm(self, a):
        return a[0] * a[0] + self.trace * a[0] * a[1] + self.norm_w * a[1] * a[1]

    def is_unit(self, a):
        return self.norm(a) == 1

    def exact_div(self, a, b):
        """a / b if it lies in the order, else None."""
        nb = self.norm(b)
        if nb == 0:
            raise ZeroDivisionError("division by zero")
        num = self.mul(a, self.conj(b))
        if num[0] % nb or num[1] % nb:
            return None
        return (num[0] // nb, num[1] // nb)

    def elem_str(self, a):
        return f"{a[0]}+{a[1]}w"


@dataclass(frozen=True)
class LaurentZ(Ring):
    has_action = True
    tag = "LZ"

    def __str__(self):
        return "LZ"

    def coerce(self, a):
        if isinstance(a, Laurent):
            return a
        if isinstance(a, int) and not isinstance(a, bool):
            return Laurent(a)
        raise TypeError(f"Laurent polynomial expected, got {a!r}")

    def from_int(self, n):
        return Laurent(n)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return not a

    def is_unit(self, a):
        return a.is_unit()

    @property
    def x(self):
        return Laurent.x()


def parse_ring_tag(tag):
    """Inverse of ``ring.tag``."""
    tag = tag.strip()
    if tag == "ZZ":
        return ZZ()
    if tag == "LZ":
        return LaurentZ()
    if tag.startswith("QO(") and tag.endswith(")"):
        return QuadOrder(int(tag[3:-1]))
    if tag.startswith("ZZ[1/") and tag.endswith("]"):
        body = tag[5:-1]
        return ZZLoc(tuple(int(s) for s in body.split(",") if s.strip()))
    raise ValueError(f"unknown ring tag {tag!r}")
