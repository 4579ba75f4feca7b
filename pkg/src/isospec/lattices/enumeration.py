"""Short-vector enumeration, theta series and flat-torus spectra.

Two enumerators share one decomposition.  ``short_vectors`` is a plain
Fincke-Pohst search in exact rational arithmetic and returns the vectors.
``norm_counts`` only counts them: it runs in compiled code on the
integer-scaled Gram matrix, uses a slightly widened floating-point interval
per coordinate to walk the tree, and accepts a vector only after its norm has
been recomputed exactly in integers.  The widening can only add candidates,
never drop one, so the counts are exact.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numba
import numpy as np

from ..errors import BudgetExceeded
from .gram import GramMatrix, dual_gram

DEFAULT_BUDGET = 10**7


def ldl(g: GramMatrix) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact ``q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2``."""
    n = g.dimension
    a = g.entries
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i] - sum((d[k] * mu[k][i] ** 2 for k in range(i)), Fraction(0))
        for j in range(i + 1, n):
            mu[i][j] = (a[i][j] - sum((d[k] * mu[k][i] * mu[k][j] for k in range(i)), Fraction(0))) / d[i]
    return d, mu


def _integer_range(center: Fraction, radius_sq: Fraction) -> tuple[int, int]:
    """Integers ``x`` with ``(x + center)^2 <= radius_sq``, as an inclusive range."""
    r = math.sqrt(radius_sq) if radius_sq > 0 else 0.0
    lo = math.floor(-center - r) - 1
    hi = math.ceil(-center + r) + 1
    while lo <= hi and (lo + center) ** 2 > radius_sq:
        lo += 1
    while hi >= lo and (hi + center) ** 2 > radius_sq:
        hi -= 1
    return lo, hi


def short_vectors(g: GramMatrix, bound, budget: int = DEFAULT_BUDGET) -> list[tuple[tuple[int, ...], Fraction]]:
    """All ``v`` in ``Z^n`` with ``v^T g v <= bound``, sorted by (norm, coordinates)."""
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    n = g.dimension
    d, mu = ldl(g)
    out: list[tuple[tuple[int, ...], Fraction]] = []
    x = [0] * n

    def search(i: int, remaining: Fraction) -> None:
        center = sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        lo, hi = _integer_range(center, remaining / d[i])
        for xi in range(lo, hi + 1):
            x[i] = xi
            rest = remaining - d[i] * (xi + center) ** 2
            if i == 0:
                out.append((tuple(x), bound - rest))
                if len(out) > budget:
                    raise BudgetExceeded(f"more than {budget} vectors of norm <= {bound}")
            else:
                search(i - 1, rest)
        x[i] = 0

    search(n - 1, bound)
    out.sort(key=lambda t: (t[1], t[0]))
    return out


@numba.njit(cache=True)
def _count_kernel(gram, diag, mu, bound, budget, slack):  # pragma: no cover - compiled
    n = gram.shape[0]
    counts = np.zeros(bound + 1, dtype=np.int64)
    x = np.zeros(n, dtype=np.int64)
    upper = np.zeros(n, dtype=np.int64)
    center = np.zeros(n, dtype=np.float64)
    remaining = np.zeros(n, dtype=np.float64)
    cross = np.zeros(n, dtype=np.int64)      # sum_{j>i} gram[i, j] x_j
    partial = np.zeros(n + 1, dtype=np.int64)  # exact norm of coordinates > i
    total = 0

    i = n - 1
    remaining[i] = bound
    r = math.sqrt(max(remaining[i], 0.0) / diag[i]) + slack
    x[i] = math.ceil(-r)
    upper[i] = math.floor(r)
    while True:
        if x[i] > upper[i]:
            i += 1
            if i == n:
                break
            x[i] += 1
            continue
        xi = x[i]
        exact = partial[i + 1] + xi * (gram[i, i] * xi + 2 * cross[i])
        if i == 0:
            if exact <= bound:
                counts[exact] += 1
                total += 1
                if total > budget:
                    return counts, total, True
            x[0] += 1
            continue
        t = xi + center[i]
        rest = remaining[i] - diag[i] * t * t
        if rest < -slack * (1.0 + bound):
            x[i] += 1
            continue
        partial[i] = exact
        i -= 1
        remaining[i] = rest
        c = 0.0
        s = 0
        for j in range(i + 1, n):
            c += mu[i, j] * x[j]
            s += gram[i, j] * x[j]
        center[i] = c
        cross[i] = s
        r = math.sqrt(max(rest, 0.0) / diag[i]) + slack
        x[i] = math.ceil(-c - r)
        upper[i] = math.floor(-c + r)
    return counts, total, False


def norm_counts(g: GramMatrix, bound, budget: int = DEFAULT_BUDGET) -> dict[Fraction, int]:
    """``{q: #{v : v^T g v = q}}`` over represented ``q <= bound``."""
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    scale = g.denominator()
    gram_int = np.array([[int(x * scale) for x in r] for r in g.entries], dtype=np.int64)
    scaled = GramMatrix(tuple(tuple(Fraction(int(v)) for v in r) for r in gram_int))
    d, mu = ldl(scaled)
    bound_int = math.floor(bound * scale)
    if max(abs(int(v)) for v in gram_int.flat) * (bound_int + 1) > 2**40:
        raise BudgetExceeded("integer norms would overflow the counting kernel")
    counts, total, exceeded = _count_kernel(
        gram_int,
        np.array([float(v) for v in d]),
        np.array([[float(v) for v in r] for r in mu]),
        np.int64(bound_int),
        np.int64(budget),
        1e-7,
    )
    if exceeded:
        raise BudgetExceeded(f"more than {budget} vectors of norm <= {bound}")
    nz = np.flatnonzero(counts)
    return {Fraction(int(k), scale): int(counts[k]) for k in nz}


@dataclass(frozen=True)
class ThetaSeries:
    """Vector counts by norm up to ``cutoff``; absent norms count zero."""

    cutoff: Fraction
    counts: dict[Fraction, int]

    def __getitem__(self, q) -> int:
        return self.counts.get(Fraction(q), 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict[str, int]:
        return {str(q): c for q, c in sorted(self.counts.items())}

    def to_csv(self) -> str:
        return "norm,count\n" + "".join(f"{q},{c}\n" for q, c in sorted(self.counts.items()))


def theta_coefficients(g: GramMatrix, N, budget: int = DEFAULT_BUDGET) -> ThetaSeries:
    N = Fraction(N)
    return ThetaSeries(N, norm_counts(g, N, budget))


@dataclass(frozen=True)
class SpectrumMultiset:
    """Flat-torus spectrum up to ``cutoff``.

    Each entry is a dual-lattice norm ``q``; the Laplace eigenvalue is
    ``4 pi^2 q``.  Stored as sorted ``(value, multiplicity)`` pairs because the
    expanded multiset can have millions of entries.
    """

    cutoff: Fraction
    multiplicities: tuple[tuple[Fraction, int], ...]

    def eigenvalues(self) -> Iterator[Fraction]:
        for q, m in self.multiplicities:
            for _ in range(m):
                yield q

    def values(self) -> list[Fraction]:
        return [q for q, _ in self.multiplicities]

    def as_counter(self) -> Counter:
        return Counter(dict(self.multiplicities))

    def __len__(self) -> int:
        return sum(m for _, m in self.multiplicities)

    def to_json(self) -> dict[str, int]:
        return {str(q): m for q, m in self.multiplicities}

    def to_csv(self) -> str:
        return "eigenvalue_over_4pi2,multiplicity\n" + "".join(f"{q},{m}\n" for q, m in self.multiplicities)


def torus_spectrum(g: GramMatrix, cutoff, budget: int = DEFAULT_BUDGET) -> SpectrumMultiset:
    cutoff = Fraction(cutoff)
    counts = norm_counts(dual_gram(g), cutoff, budget)
    return SpectrumMultiset(cutoff, tuple(sorted(counts.items())))
