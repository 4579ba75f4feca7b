"""Prime-splitting censuses of number fields given by defining polynomials.

At a prime ``p`` not dividing ``disc(f)`` the degrees of the irreducible
factors of ``f mod p`` are the residue degrees of the primes above ``p``.
Two fields with equal splitting types at all such primes have equal Euler
factors there, so comparing censuses up to a bound is finite evidence of
equal Dedekind zeta functions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .arith import is_prime, primes_up_to
from .errors import InsufficientCensus, NotPrime, RamifiedPrime, ZeroDiscriminant
from .polynomials import IntPolynomial

FINITE_BOUND_CAVEAT = "finite census bound: equal splitting up to B is evidence of equal zeta functions, not proof"


# -- integer polynomials -----------------------------------------------------------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _derivative(c: Sequence[int]) -> list[int]:
    return _trim([k * c[k] for k in range(1, len(c))])


def _content(c: Sequence[int]) -> int:
    g = 0
    for x in c:
        g = gcd(g, x)
    return g


def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """``lc(b)^(deg a - deg b + 1) * a mod b`` over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for k in range(len(b)):
            r[k + shift] -= lr * b[k]
        _trim(r)
        e -= 1
    return [x * lb ** e for x in r]


def resultant(a: Sequence[int], b: Sequence[int]) -> int:
    """Resultant of two integer polynomials by the subresultant PRS."""
    A, B = _trim(list(a)), _trim(list(b))
    if not A or not B:
        return 0
    ca, cb = _content(A), _content(B)
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    dA, dB = len(A) - 1, len(B) - 1
    t = ca ** dB * cb ** dA
    s = 1
    if dA < dB:
        A, B = B, A
        dA, dB = dB, dA
        if dA % 2 and dB % 2:
            s = -1
    g = h = 1
    while True:
        if dB == 0:
            break
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _pseudo_remainder(A, B)
        if not R:
            return 0
        A = B
        div = g * h ** delta
        B = [x // div for x in R]
        g = A[-1]
        h = g ** delta // h ** (delta - 1) if delta else h
        dA, dB = len(A) - 1, len(B) - 1
    # deg B == 0
    h = B[-1] ** dA // h ** (dA - 1) if dA else 1
    return s * t * h


def poly_discriminant(f: IntPolynomial) -> int:
    """``(-1)^(n(n-1)/2) Res(f, f') / lc(f)``."""
    c = list(f.coefficients)
    n = len(c) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    res = resultant(c, _derivative(c))
    disc = (-1) ** (n * (n - 1) // 2) * res
    if disc % c[-1]:
        raise AssertionError("resultant not divisible by the leading coefficient")
    disc //= c[-1]
    if disc == 0:
        raise ZeroDiscriminant(f"{f} has a repeated factor")
    return disc


# -- polynomials over GF(p), lists of residues, constant first ------------------------

def _mod(c: Sequence[int], p: int) -> list[int]:
    return _trim([x % p for x in c])


def _sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0)) % p for k in range(n)])


def _mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([v % p for v in out])


def _divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        coef = r[-1] * inv % p
        shift = len(r) - 1 - db
        q[shift] = coef
        for k in range(len(b)):
            r[k + shift] = (r[k + shift] - coef * b[k]) % p
        _trim(r)
    return _trim(q), r


def _monic(a: list[int], p: int) -> list[int]:
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p) if a else a


def _powmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _divmod(base, m, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), m, p)[1]
        base = _divmod(_mul(base, base, p), m, p)[1]
        e >>= 1
    return result


@dataclass(frozen=True)
class SplittingType:
    partition: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(sorted(self.partition, reverse=True)))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.partition)) + "]"


def distinct_degree_factorization(f: Sequence[int], p: int) -> list[tuple[list[int], int]]:
    """``[(g_d, d)]`` with ``g_d`` the product of the degree-``d`` factors of a
    squarefree monic ``f`` over ``GF(p)``."""
    g = _mod(f, p)
    out = []
    h = [0, 1]
    x = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, g, p)
        u = _gcd(g, _sub(h, x, p), p)
        if len(u) > 1:
            out.append((u, d))
            g = _divmod(g, u, p)[0]
            h = _divmod(h, g, p)[1]
    if len(g) > 1:
        out.append((_monic(g, p), len(g) - 1))
    return out


def factor_degrees_mod_p(f: IntPolynomial, p: int, disc: int | None = None) -> SplittingType:
    """Degrees of the irreducible factors of ``f`` modulo an unramified prime."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if disc is None:
        disc = poly_discriminant(f)
    if disc % p == 0 or f.coefficients[-1] % p == 0:
        raise RamifiedPrime(f"{p} divides the discriminant or leading coefficient of {f}")
    c = _monic(_mod(f.coefficients, p), p)
    if len(_gcd(c, _mod(_derivative(c), p), p)) > 1:
        raise AssertionError(f"{f} is not squarefree mod {p} although p does not divide disc")
    degrees = []
    for u, d in distinct_degree_factorization(c, p):
        degrees += [d] * ((len(u) - 1) // d)
    if sum(degrees) != f.degree:
        raise AssertionError("factor degrees do not sum to the polynomial degree")
    return SplittingType(tuple(degrees))


@dataclass(frozen=True)
class SplittingCensus:
    bound: int
    entries: dict[int, SplittingType]
    skipped: tuple[int, ...]
    degree: int

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "degree": self.degree,
            "entries": {str(p): list(t.partition) for p, t in self.entries.items()},
            "skipped": list(self.skipped),
        }

    def to_csv(self) -> str:
        return "prime,partition\n" + "".join(
            f"{p},\"{t}\"\n" for p, t in self.entries.items())

    def frequencies(self) -> dict[tuple[int, ...], float]:
        counts = Counter(t.partition for t in self.entries.values())
        total = sum(counts.values())
        return {k: v / total for k, v in sorted(counts.items())}


def splitting_census(f: IntPolynomial, B: int) -> SplittingCensus:
    if B < 2:
        raise ValueError("census bound must be >= 2")
    disc = poly_discriminant(f)
    entries = {}
    skipped = []
    for p in primes_up_to(B):
        if disc % p == 0 or f.coefficients[-1] % p == 0:
            skipped.append(p)
        else:
            entries[p] = factor_degrees_mod_p(f, p, disc)
    return SplittingCensus(B, entries, tuple(skipped), f.degree)


@dataclass(frozen=True)
class CensusComparison:
    equal: bool
    first_disagreement: int | None
    compared_count: int
    bound: int
    caveat: str = FINITE_BOUND_CAVEAT

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "first_disagreement": self.first_disagreement,
            "compared_count": self.compared_count,
            "bound": self.bound,
            "caveat": self.caveat,
        }


def compare_censuses(c1: SplittingCensus, c2: SplittingCensus) -> CensusComparison:
    bound = min(c1.bound, c2.bound)
    if c1.degree != c2.degree:
        return CensusComparison(False, None, 0, bound)
    count = 0
    for p in primes_up_to(bound):
        if p in c1.entries and p in c2.entries:
            count += 1
            if c1.entries[p] != c2.entries[p]:
                return CensusComparison(False, p, count, bound)
    return CensusComparison(True, None, count, bound)


def census_equal(f1: IntPolynomial, f2: IntPolynomial, B: int) -> CensusComparison:
    if f1.degree != f2.degree:
        return CensusComparison(False, None, 0, B)
    return compare_censuses(splitting_census(f1, B), splitting_census(f2, B))


def _local_coefficient(partition: Sequence[int], k: int) -> int:
    """Number of ``(e_i) >= 0`` with ``sum f_i e_i = k``."""
    ways = [1] + [0] * k
    for f in partition:
        for s in range(f, k + 1):
            ways[s] += ways[s - f]
    return ways[k]


def dirichlet_coefficients(census: SplittingCensus, N: int) -> list[int]:
    """``[a_1, ..., a_N]`` of the partial Euler product over unramified primes.

    Ramified (skipped) primes contribute the factor 1, so ``a_n = 0`` for every
    ``n`` they divide.
    """
    if N < 1:
        return []
    if N > census.bound:
        raise InsufficientCensus(f"census bound {census.bound} does not cover primes up to {N}")
    skipped = set(census.skipped)
    spf = list(range(N + 1))
    for p in primes_up_to(int(N ** 0.5) + 1):
        for m in range(p * p, N + 1, p):
            if spf[m] == m:
                spf[m] = p
    a = [0] * (N + 1)
    a[1] = 1
    for n in range(2, N + 1):
        p = spf[n]
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if p in skipped:
            local = 0
        else:
            local = _local_coefficient(census.entries[p].partition, k)
        a[n] = a[m] * local
    return a[1:]
