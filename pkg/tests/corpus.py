"""Shared test corpus: groups, triples and independent brute-force oracles."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from isospec.groups import (
    Permutation,
    PermGroup,
    Subgroup,
    close_generators,
    enumerate_subgroups,
    gl32,
    parse_generators,
    symmetric_group,
)
from isospec.lattices import GramMatrix

DATA = Path(__file__).resolve().parent.parent / "data"


def load_group(name: str) -> PermGroup:
    _, gens = parse_generators((DATA / name).read_text())
    return close_generators(gens)


def load_subgroup(G: PermGroup, name: str) -> Subgroup:
    _, gens = parse_generators((DATA / name).read_text(), G.degree)
    return G.subgroup(gens)


@lru_cache(maxsize=None)
def affine8() -> tuple[PermGroup, Subgroup, Subgroup]:
    G = load_group("affine8.group")
    return G, load_subgroup(G, "affine8_h1.sub"), load_subgroup(G, "affine8_h2.sub")


@lru_cache(maxsize=None)
def gl32_cached():
    return gl32()


@lru_cache(maxsize=None)
def triple_corpus() -> list[tuple[str, PermGroup, Subgroup, Subgroup]]:
    """Gassmann and non-Gassmann triples.

    For each group: every pair of same-order conjugacy-class representatives,
    every representative against a nontrivial conjugate of itself, and the
    shipped fixture pairs.
    """
    groups = [
        ("S3", symmetric_group(3)),
        ("S4", symmetric_group(4)),
        ("GL(3,2)", gl32_cached()[0]),
        ("Aff(Z/8)", affine8()[0]),
    ]
    out = []
    for name, G in groups:
        reps = enumerate_subgroups(G)
        for a, b in itertools.combinations(reps, 2):
            if a.order == b.order:
                out.append((f"{name}: orders {a.order}/{b.order}", G, a, b))
        for a in reps:
            conj = next((a.conjugate_by(g) for g in range(G.order) if a.conjugate_by(g) != a), None)
            if conj is not None:
                out.append((f"{name}: order {a.order} vs a conjugate", G, a, conj))
    G, p, q = gl32_cached()
    out.append(("GL(3,2): point vs plane", G, p, q))
    G, h1, h2 = affine8()
    out.append(("Aff(Z/8): multiplicative vs twisted", G, h1, h2))
    S3 = symmetric_group(3)
    out.append(("S3: transposition vs rotation", S3,
                S3.subgroup([Permutation.from_cycles([[0, 1]], 3)]),
                S3.subgroup([Permutation.from_cycles([[0, 1, 2]], 3)])))
    return out


# -- oracles -------------------------------------------------------------------------


def cofactor_charpoly(a: list[list[int]]) -> list[int]:
    """``det(xI - A)`` by Laplace expansion on polynomial entries (constant first)."""

    def padd(p, q):
        n = max(len(p), len(q))
        return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]

    def pmul(p, q):
        out = [0] * (len(p) + len(q) - 1)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                out[i + j] += x * y
        return out

    def det(m):
        if len(m) == 1:
            return m[0][0]
        total = [0]
        for j in range(len(m)):
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            term = pmul(m[0][j], det(minor))
            if j % 2:
                term = [-t for t in term]
            total = padd(total, term)
        return total

    n = len(a)
    m = [[[-a[i][j], 1] if i == j else [-a[i][j]] for j in range(n)] for i in range(n)]
    out = det(m)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _squarefree_int(num: int, den: int) -> int:
    n = num * den
    sign = -1 if n < 0 else 1
    n = abs(n)
    out, d = 1, 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
        if n % d == 0:
            out *= d
            n //= d
        d += 1
    return sign * out * n


@lru_cache(maxsize=None)
def _solvable_mod(a: int, b: int, p: int, k: int) -> bool:
    m = p ** k
    squares = {z * z % m for z in range(m)}
    unit_squares = {z * z % m for z in range(m) if z % p}
    for x in range(m):
        for y in range(m):
            c = (a * x * x + b * y * y) % m
            if x % p or y % p:
                if c in squares:
                    return True
            elif c in unit_squares:
                return True
    return False


def padic_hilbert(a, b, p: int) -> int:
    """``(a, b)_p`` from primitive solutions of ``a x^2 + b y^2 = z^2`` mod ``p^k``.

    Arguments are first replaced by squarefree integers in the same square
    class.  ``k = 2`` for odd ``p`` and ``k = 6`` for ``p = 2`` suffice for such
    arguments.
    """
    a, b = Fraction(a), Fraction(b)
    sa = _squarefree_int(a.numerator, a.denominator)
    sb = _squarefree_int(b.numerator, b.denominator)
    k = 6 if p == 2 else 2
    return 1 if _solvable_mod(sa % p ** k, sb % p ** k, p, k) else -1


def monic_polys(p: int, degree: int):
    for tail in itertools.product(range(p), repeat=degree):
        yield list(tail) + [1]


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    r = [x % p for x in a]
    inv = pow(b[-1], -1, p)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        shift = len(r) - len(b)
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        while r and r[-1] == 0:
            r.pop()
    return r


def _poly_div(a: list[int], b: list[int], p: int) -> list[int]:
    r = [x % p for x in a]
    q = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        shift = len(r) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        while r and r[-1] == 0:
            r.pop()
    return q


@lru_cache(maxsize=None)
def irreducibles(p: int, max_degree: int) -> tuple[tuple[int, ...], ...]:
    found: list[list[int]] = []
    for d in range(1, max_degree + 1):
        for f in monic_polys(p, d):
            if all(_poly_mod(f, g, p) for g in found if 2 * (len(g) - 1) <= d):
                found.append(f)
    return tuple(tuple(f) for f in found)


def exhaustive_factor_degrees(coeffs: list[int], p: int) -> list[int]:
    """Factor degrees of a polynomial mod ``p`` by trial division by every
    monic irreducible of degree at most ``deg f / 2``; what is left after
    that has no proper divisor and is irreducible."""
    f = [c % p for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    degrees = []
    for g in irreducibles(p, (len(f) - 1) // 2):
        g = list(g)
        while len(f) >= len(g) and not _poly_mod(f, g, p):
            f = _poly_div(f, g, p)
            degrees.append(len(g) - 1)
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return sorted(degrees, reverse=True)


def box_scan(g: GramMatrix, bound: Fraction) -> list[tuple[tuple[int, ...], Fraction]]:
    """Every vector of norm ``<= bound`` in the box ``|x_i| <= sqrt(bound * (g^-1)_ii) + 1``."""
    inv = np.linalg.inv(np.array(g.entries, dtype=float))
    radius = [int(math.sqrt(float(bound) * inv[i][i])) + 1 for i in range(g.dimension)]
    out = []
    for v in itertools.product(*(range(-r, r + 1) for r in radius)):
        q = g.norm(v)
        if q <= bound:
            out.append((tuple(v), q))
    return sorted(out, key=lambda t: (t[1], t[0]))
