"""Integer helpers: primes, factorizations, square classes of rationals."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from sympy import factorint, isprime


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def prime_factors(n: int) -> list[int]:
    n = abs(int(n))
    return sorted(int(p) for p in factorint(n)) if n > 1 else []


def primes_up_to(bound: int) -> list[int]:
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, f in enumerate(sieve) if f]


def squarefree_part(x) -> int:
    """The squarefree integer in the square class of the nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= int(p)
    return sign * out


def valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_root(x, k: int) -> Fraction | None:
    """The positive rational ``k``-th root of ``x > 0`` if it exists."""
    x = Fraction(x)
    if x <= 0:
        return None

    def iroot(m: int) -> int | None:
        r = round(m ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** k == m:
                return cand
        # fall back to bisection for large values
        lo, hi = 0, 1 << (m.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** k < m:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** k == m else None

    a, b = iroot(x.numerator), iroot(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
