"""Small integer number theory helpers."""
from functools import lru_cache, reduce
from math import gcd


def lcm(*args):
    return reduce(lambda a, b: a * b // gcd(a, b) if a and b else 0, args, 1)


@lru_cache(maxsize=64)
def primes_upto(n):
    """Sieve of Eratosthenes; primes <= n as a tuple."""
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return tuple(i for i in range(n + 1) if sieve[i])


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def factorize(n):
    """Trial division. Returns {prime: exponent} for |n| >= 1."""
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def radical(n):
    r = 1
    for p in factorize(n):
        r *= p
    return r


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorize(n).values())


def valuation(n, p):
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_power(n):
    """Return (p, e) if n = p^e with e >= 1, else None."""
    f = factorize(n)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


def int_log(n, base):
    """Largest e with base**e <= n (n >= 1)."""
    e, acc = 0, base
    while acc <= n:
        e += 1
        acc *= base
    return e


def modinv(a, m):
    return pow(a, -1, m)


def mult_order(a, p):
    """Order of a in (Z/p)^x for prime p via factoring p - 1 and repeated squaring."""
    a %= p
    if a == 0:
        raise ValueError(f"{a} is not a unit mod {p}")
    order = p - 1
    for q, _ in factorize(p - 1).items():
        while order % q == 0 and pow(a, order // q, p) == 1:
            order //= q
    return order


def mult_order_naive(a, p):
    """Order by repeated multiplication; an independent check for mult_order."""
    a %= p
    if a == 0:
        raise ValueError(f"{a} is not a unit mod {p}")
    x, k = a, 1
    while x != 1:
        x = x * a % p
        k += 1
    return k


def crt_pair(r1, m1, r2, m2):
    g = gcd(m1, m2)
    if (r2 - r1) % g:
        raise ValueError("incompatible congruences")
    l = m1 // g * m2
    t = (r2 - r1) // g * modinv(m1 // g, m2 // g) % (m2 // g) if m2 // g > 1 else 0
    return (r1 + m1 * t) % l, l
