"""Rational quadratic forms: diagonalization, Hilbert symbols, similarity.

Two nondegenerate rational forms of the same dimension are congruent over
the rationals iff they have the same signature, the same discriminant up to
squares, and the same Hasse invariant at every prime.  ``rationally_similar``
applies that test to ``f1`` and ``c * f2`` for a finite list of candidate
scalings ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..arith import is_prime, prime_factors, rational_root, squarefree_part, valuation
from ..errors import BudgetExceeded, Degenerate, NotPrime
from .enumeration import norm_counts
from .gram import GramMatrix

INFINITY = math.inf


def diagonalize(rows: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Symmetric Gaussian elimination.

    Returns ``(d, P)`` with ``P A P^T = diag(d)``; the rows of ``P`` are the
    new basis vectors.  A zero pivot is replaced by a later nonzero diagonal
    entry if there is one, otherwise by ``e_k + e_j / (2 a_kj)``, which has
    norm 1.
    """
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    if any(len(r) != n for r in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix must be square and symmetric")
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_multiple(k: int, j: int, t: Fraction) -> None:
        # basis change b_k <- b_k + t b_j, applied to rows and columns
        for m in range(n):
            a[k][m] += t * a[j][m]
        for m in range(n):
            a[m][k] += t * a[m][j]
        P[k] = [x + t * y for x, y in zip(P[k], P[j])]

    d = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for r in a:
                    r[k], r[j] = r[j], r[k]
                P[k], P[j] = P[j], P[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise Degenerate("form is degenerate")
                add_multiple(k, j, 1 / (2 * a[k][j]))
        p = a[k][k]
        d.append(p)
        for j in range(k + 1, n):
            if a[k][j]:
                add_multiple(j, k, -a[k][j] / p)
    return d, P


def diagonalize_form(g: GramMatrix | Sequence[Sequence]) -> list[Fraction]:
    rows = g.entries if isinstance(g, GramMatrix) else g
    return diagonalize(rows)[0]


def _check_place(p) -> None:
    if p == INFINITY:
        return
    if not isinstance(p, int) or not is_prime(p):
        raise NotPrime(f"{p!r} is neither a prime nor infinity")


def hilbert_symbol(a, b, p) -> int:
    """``(a, b)_p`` for nonzero rationals; ``p`` a prime or ``INFINITY``."""
    _check_place(p)
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if p == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    # same square classes, integral representatives
    x = a.numerator * a.denominator
    y = b.numerator * b.denominator
    alpha, beta = valuation(x, p), valuation(y, p)
    u, v = x // p ** alpha, y // p ** beta
    if p == 2:
        def eps(t: int) -> int:
            return ((t - 1) // 2) % 2

        def omega(t: int) -> int:
            return ((t * t - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1

    def legendre(t: int) -> int:
        return 1 if pow(t % p, (p - 1) // 2, p) == 1 else -1

    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u)
    if alpha % 2:
        sign *= legendre(v)
    return sign


def hasse_invariant(diag: Sequence, p) -> int:
    """``prod_{i<j} (d_i, d_j)_p``."""
    out = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            out *= hilbert_symbol(diag[i], diag[j], p)
    return out


def relevant_primes(*values) -> list[int]:
    """2 and every prime dividing a numerator or denominator of ``values``."""
    ps = {2}
    for x in values:
        x = Fraction(x)
        ps.update(prime_factors(x.numerator))
        ps.update(prime_factors(x.denominator))
    return sorted(ps)


def signature(diag: Sequence[Fraction]) -> tuple[int, int]:
    return sum(1 for x in diag if x > 0), sum(1 for x in diag if x < 0)


@dataclass(frozen=True)
class FormInvariants:
    dimension: int
    signature: tuple[int, int]
    discriminant_class: int
    hasse: dict  # place -> +-1

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "signature": list(self.signature),
            "discriminant_squarefree": self.discriminant_class,
            "hasse": {("inf" if p == INFINITY else str(p)): s for p, s in self.hasse.items()},
        }


def form_invariants(diag: Sequence[Fraction], places: Sequence) -> FormInvariants:
    disc = math.prod(diag, start=Fraction(1))
    return FormInvariants(len(diag), signature(diag), squarefree_part(disc),
                          {p: hasse_invariant(diag, p) for p in places})


def rationally_congruent(d1: Sequence[Fraction], d2: Sequence[Fraction]) -> tuple[bool, FormInvariants, FormInvariants]:
    """Complete congruence test for two diagonal rational forms."""
    places = [*relevant_primes(*d1, *d2), INFINITY]
    i1, i2 = form_invariants(d1, places), form_invariants(d2, places)
    return i1 == i2, i1, i2


@dataclass(frozen=True)
class SimilarityVerdict:
    similar: bool
    scaling: Fraction | None
    local_data: dict = field(default_factory=dict)
    candidates: tuple[Fraction, ...] = ()

    def to_json(self) -> dict:
        return {
            "similar": self.similar,
            "scaling": None if self.scaling is None else str(self.scaling),
            "candidates": [str(c) for c in self.candidates],
            "local_data": self.local_data,
        }


def smallest_norms(g: GramMatrix, k: int, budget: int = 10**6) -> list[Fraction]:
    """Up to ``k`` smallest distinct nonzero norms, widening the search bound."""
    bound = max(g.entries[i][i] for i in range(g.dimension))
    found: list[Fraction] = []
    for _ in range(4):
        try:
            found = sorted(q for q in norm_counts(g, bound, budget) if q)
        except BudgetExceeded:
            break
        if len(found) >= k:
            break
        bound *= 2
    return found[:k]


def scaling_candidates(g1: GramMatrix, g2: GramMatrix, k: int = 3) -> list[Fraction]:
    """Ratios of small represented norms and rational roots of ``det1/det2``."""
    n1, n2 = smallest_norms(g1, k), smallest_norms(g2, k)
    cands = {a / b for a in n1 for b in n2}
    root = rational_root(g1.determinant() / g2.determinant(), g1.dimension)
    if root is not None:
        cands.add(root)
    return sorted(cands, key=lambda c: (c.numerator * c.denominator, c))


def rationally_similar(g1: GramMatrix, g2: GramMatrix, k: int = 3) -> SimilarityVerdict:
    """Search ``c`` with ``f1`` congruent to ``c * f2`` over the rationals."""
    if g1.dimension != g2.dimension:
        return SimilarityVerdict(False, None, {"reason": "dimensions differ"})
    d1 = diagonalize_form(g1)
    d2 = diagonalize_form(g2)
    cands = scaling_candidates(g1, g2, k)
    last = {}
    for c in cands:
        ok, i1, i2 = rationally_congruent(d1, [c * x for x in d2])
        last = {"scaling": str(c), "form1": i1.to_json(), "form2_scaled": i2.to_json()}
        if ok:
            return SimilarityVerdict(True, c, last, tuple(cands))
    return SimilarityVerdict(False, None, last, tuple(cands))
