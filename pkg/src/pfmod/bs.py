"""The solvable Baumslag-Solitar groups BS(1, n) through their conjugacy module."""
from dataclasses import dataclass
from math import gcd

from .arith import modinv, mult_order, primes_upto, radical
from .finite import FiniteModule, zero_finite
from .intmat import smith_normal_form
from .modules import cyclic_module
from .rings import Laurent, LaurentZ


@dataclass(frozen=True)
class BsGroup:
    """BS(1, n) = <a, t | t^-1 a t = a^n>."""
    n: int

    def __post_init__(self):
        if abs(self.n) < 2:
            raise ValueError(f"BS(1,{self.n}) is abelian or degenerate; use |n| >= 2")


def conjugacy_module(g):
    """The module Z[1/n] as a quotient of Z[x, x^-1], with x acting as multiplication by n."""
    return cyclic_module(LaurentZ(), [Laurent.x() - g.n], label=f"Omega/(x-({g.n}))")


def abelianization(n):
    """SNF of the abelianized relation (rows: generators a, t)."""
    return smith_normal_form([[n - 1], [0]], nrows=2, transforms=False)


# ----- standard metacyclic quotients ------------------------------------------

@dataclass(frozen=True)
class StandardQuotient:
    """Z/m x| Z/k with t^-1 a t = a^n; elements are pairs (x, i) meaning a^x t^i."""
    n: int
    m: int
    k: int

    @property
    def order(self):
        return self.m * self.k

    def _ninv_pow(self, i):
        if self.m == 1:
            return 0
        return pow(modinv(self.n % self.m, self.m), i % self.k, self.m)

    def mul(self, u, v):
        (x, i), (y, j) = u, v
        return ((x + self._ninv_pow(i) * y) % self.m, (i + j) % self.k)

    def inv(self, u):
        x, i = u
        return ((-pow(self.n, i, self.m) * x) % self.m if self.m > 1 else 0, (-i) % self.k)

    @property
    def a(self):
        return (1 % self.m, 0)

    @property
    def t(self):
        return (0, 1 % self.k)

    def power(self, u, e):
        out = (0, 0)
        for _ in range(e):
            out = self.mul(out, u)
        return out

    def check_relation(self):
        """t^-1 a t == a^n computed inside the group, plus a^m = t^k = 1."""
        lhs = self.mul(self.mul(self.inv(self.t), self.a), self.t)
        rhs = self.power(self.a, self.n % self.m if self.m > 1 else 0)
        ident = (0, 0)
        return lhs == rhs and self.power(self.a, self.m) == ident and self.power(self.t, self.k) == ident

    def check_group(self):
        """Associativity and inverses, exhaustively."""
        elems = [(x, i) for x in range(self.m) for i in range(self.k)]
        for u in elems:
            if self.mul(u, self.inv(u)) != (0, 0):
                return False
            for v in elems:
                uv = self.mul(u, v)
                for w in elems:
                    if self.mul(uv, w) != self.mul(u, self.mul(v, w)):
                        return False
        return True


def is_standard_pair(n, m, k):
    return m >= 1 and k >= 1 and gcd(m, n) == 1 and (pow(n, k, m) if m > 1 else 0) == 1 % m


def standard_quotients(g, order_bound):
    """Pairs (m, k, verified) with gcd(m, n) = 1, n^k = 1 mod m and m*k <= order_bound."""
    if order_bound < 1:
        raise ValueError("order_bound must be positive")
    out = []
    for m in range(1, order_bound + 1):
        for k in range(1, order_bound // m + 1):
            if is_standard_pair(g.n, m, k):
                out.append((m, k, StandardQuotient(g.n, m, k).check_relation()))
    return out


def restrict_quotient_to_module(g, m, k):
    """The image of the normal closure of a in Z/m x| Z/k, with t acting by conjugation."""
    if not is_standard_pair(g.n, m, k):
        raise ValueError(f"({m}, {k}) is not a standard quotient of BS(1,{g.n})")
    if m == 1:
        return zero_finite(LaurentZ())
    return FiniteModule(LaurentZ(), (m,), [[g.n % m]])


# ----- order profiles ---------------------------------------------------------

@dataclass(frozen=True)
class OrderRow:
    p: int
    ord_n: int
    ord_ratio: int
    subgroup_equal: bool


@dataclass(frozen=True)
class OrderProfile:
    n: int
    a: int
    b: int
    prime_bound: int
    rows: tuple

    @property
    def all_equal(self):
        return all(r.subgroup_equal for r in self.rows)

    def first_failure(self):
        return next((r for r in self.rows if not r.subgroup_equal), None)


def _check_pair(a, b):
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    if gcd(a, b) != 1:
        raise ValueError(f"a={a} and b={b} are not coprime")


def in_cyclic_subgroup(x, y, p, ord_y=None):
    """Whether x lies in <y> inside the cyclic group F_p^*."""
    oy = ord_y if ord_y is not None else mult_order(y, p)
    return pow(x, oy, p) == 1


def order_row(n, a, b, p):
    ratio = b * modinv(a % p, p) % p
    on, orat = mult_order(n % p, p), mult_order(ratio, p)
    equal = in_cyclic_subgroup(n % p, ratio, p, orat) and in_cyclic_subgroup(ratio, n % p, p, on)
    return OrderRow(p, on, orat, equal)


def order_profile(n, a, b, prime_bound, stop_at_failure=False):
    _check_pair(a, b)
    rows = []
    for p in primes_upto(prime_bound):
        if (n * a * b) % p == 0:
            continue
        row = order_row(n, a, b, p)
        rows.append(row)
        if stop_at_failure and not row.subgroup_equal:
            break
    return OrderProfile(n, a, b, prime_bound, tuple(rows))


def prime_support_check(n, a, b):
    _check_pair(a, b)
    return radical(abs(n)) == radical(abs(a * b))


# ----- survivor scan ----------------------------------------------------------

def normalize_pair(a, b):
    """The representative of b/a with a positive denominator."""
    if a < 0:
        a, b = -a, -b
    g = gcd(a, b)
    return a // g, b // g


def predicted_survivors(n):
    """The pairs for b/a = n and b/a = 1/n."""
    return sorted({normalize_pair(1, n), normalize_pair(n, 1)})


@dataclass(frozen=True)
class ScanResult:
    n: int
    height: int
    prime_bound: int
    survivors: tuple
    predicted: tuple

    @property
    def matches_prediction(self):
        return self.survivors == self.predicted

    @property
    def extras(self):
        return tuple(s for s in self.survivors if s not in self.predicted)


def rigidity_scan(n, height, prime_bound):
    """Coprime (a, b) with matching prime support and equal subgroups at all primes <= prime_bound."""
    BsGroup(n)
    if height < 1 or prime_bound < 2:
        raise ValueError("height must be positive and prime_bound at least 2")
    survivors = set()
    for a in range(1, height + 1):
        for b in range(-height, height + 1):
            if b == 0 or gcd(a, b) != 1:
                continue
            if not prime_support_check(n, a, b):
                continue
            if order_profile(n, a, b, prime_bound, stop_at_failure=True).all_equal:
                survivors.add(normalize_pair(a, b))
    return ScanResult(n, height, prime_bound, tuple(sorted(survivors)), tuple(predicted_survivors(n)))


def verify_survivor(n, a, b, prime_bound):
    """Re-check a survivor with naive order computations."""
    from .arith import mult_order_naive
    for p in primes_upto(prime_bound):
        if (n * a * b) % p == 0:
            continue
        ratio = b * modinv(a % p, p) % p
        if mult_order_naive(n % p, p) != mult_order_naive(ratio, p):
            return False
    return prime_support_check(n, a, b)
