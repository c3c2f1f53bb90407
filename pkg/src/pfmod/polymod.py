"""Polynomials over F_p and explicit finite fields F_p[x]/(f).

Polynomials are tuples of coefficients, lowest degree first, without
trailing zeros; the zero polynomial is ``()``.
"""
from functools import lru_cache
from itertools import product


def ptrim(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(a, b, p):
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def psub(a, b, p):
    return padd(a, tuple(-c for c in b), p)


def pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out, p)


def pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(ptrim(a, p))
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % p
        while a and a[-1] == 0:
            a.pop()
    return ptrim(q, p), tuple(a)


def pmod(a, b, p):
    return pdivmod(a, b, p)[1]


def pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return ptrim([c * inv for c in a], p)


def pgcd(a, b, p):
    a, b = ptrim(a, p), ptrim(b, p)
    while b:
        a, b = b, pmod(a, b, p)
    return pmonic(a, p)


def peval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def monic_polys(p, deg):
    for low in product(range(p), repeat=deg):
        yield tuple(low) + (1,)


def is_irreducible(f, p):
    """Brute force: no monic factor of degree 1..deg/2."""
    f = ptrim(f, p)
    n = len(f) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in monic_polys(p, d):
            if not pmod(f, g, p):
                return False
    return True


@lru_cache(maxsize=256)
def irreducible_monics(p, deg):
    return tuple(f for f in monic_polys(p, deg) if is_irreducible(f, p))


def factor_poly(f, p):
    """Factor a nonzero polynomial over F_p into (monic irreducible, multiplicity) pairs."""
    f = pmonic(ptrim(f, p), p)
    out = []
    d = 1
    while len(f) - 1 >= 2 * d:
        for g in irreducible_monics(p, d):
            e = 0
            while True:
                q, r = pdivmod(f, g, p)
                if r:
                    break
                f, e = q, e + 1
            if e:
                out.append((g, e))
        d += 1
    if len(f) > 1:
        out.append((f, 1))
    return sorted(out)


def poly_str(f, var="x"):
    """Human readable form, highest degree first, e.g. 'x^2+x+1'."""
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms)


class GF:
    """The field F_p[x]/(modulus) with elements as coefficient tuples of fixed length."""

    def __init__(self, p, modulus=(0, 1)):
        self.p = p
        self.modulus = ptrim(modulus, p)
        self.degree = len(self.modulus) - 1
        self.order = p ** self.degree
        if self.degree < 1 or self.modulus[-1] != 1:
            raise ValueError("modulus must be monic of positive degree")

    def __repr__(self):
        return f"GF({self.p}, {poly_str(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def _pad(self, a):
        a = tuple(a)
        return a + (0,) * (self.degree - len(a))

    def elem(self, poly):
        return self._pad(pmod(ptrim(poly, self.p), self.modulus, self.p))

    def from_int(self, n):
        return self._pad((n % self.p,))

    @property
    def zero(self):
        return (0,) * self.degree

    @property
    def one(self):
        return self.from_int(1)

    @property
    def gen(self):
        """Class of the variable."""
        return self.elem((0, 1))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        return self.elem(pmul(ptrim(a, self.p), ptrim(b, self.p), self.p))

    def scale(self, c, a):
        return tuple(c * x % self.p for x in a)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.order - 2)

    def is_zero(self, a):
        return not any(a)

    def elements(self):
        for t in product(range(self.p), repeat=self.degree):
            yield tuple(t)

    def to_int(self, a):
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def eval_poly(self, coeffs, x):
        """Evaluate an integer-coefficient polynomial (lowest first) at field element x."""
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc


def rank_over(field, rows):
    """Rank of a matrix (list of rows of field elements) over ``field``."""
    return len(row_reduce(field, rows)[0])


def row_reduce(field, rows):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    A = [list(r) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if not field.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, x) for x in A[r]]
        for i in range(len(A)):
            if i != r and not field.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def nullspace_mod_p(rows, ncols, p):
    """Basis of {x in F_p^ncols : rows . x = 0}, integer entries in [0, p)."""
    A = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol] % p
        basis.append(v)
    return basis


def rank_mod_p(rows, p):
    A = [[x % p for x in r] for r in rows]
    if not A:
        return 0
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(r + 1, len(A)):
            if A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r
