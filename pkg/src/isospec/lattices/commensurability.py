"""Spectral commensurability of flat tori and the commensurability scan.

Spectra are compared on a finite window, so a positive answer here is
evidence, never proof; every result carries a ``caveat`` string saying so.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import BudgetExceeded, NotPositiveDefinite
from .enumeration import DEFAULT_BUDGET, torus_spectrum
from .forms import rationally_similar
from .gram import GramMatrix

FINITE_CUTOFF_CAVEAT = "finite cutoff: agreement below the cutoff is evidence, not proof"


@dataclass(frozen=True)
class CommensurabilityResult:
    verdict: bool
    scaling: Fraction | None
    caveat: str
    multiplicity_respecting: bool
    candidates: tuple[Fraction, ...] = ()

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "scaling": None if self.scaling is None else str(self.scaling),
            "multiplicity_respecting": self.multiplicity_respecting,
            "candidates": [str(c) for c in self.candidates],
            "caveat": self.caveat,
        }


def _window(counts: Counter, scale: Fraction, limit: Fraction) -> Counter:
    return Counter({scale * q: m for q, m in counts.items() if scale * q <= limit})


def spectrally_commensurable(g1: GramMatrix, g2: GramMatrix, cutoff, max_scalings: int = 16,
                             multiplicities: bool = False,
                             budget: int = DEFAULT_BUDGET) -> CommensurabilityResult:
    """Look for ``c`` with ``spec(T1) = c * spec(T2)`` below the cutoff.

    Both spectra are computed up to ``cutoff``; for a candidate ``c`` they are
    compared on ``[0, min(cutoff, c * cutoff)]``, the largest window on which
    both are known.  Values are compared as sets (each present with positive
    multiplicity); with ``multiplicities=True`` the verdict also requires equal
    multiplicities.  The ``multiplicity_respecting`` flag is reported either
    way for the returned scaling.
    """
    cutoff = Fraction(cutoff)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    s1 = torus_spectrum(g1, cutoff, budget).as_counter()
    s2 = torus_spectrum(g2, cutoff, budget).as_counter()
    v1 = sorted(q for q in s1 if q)
    v2 = sorted(q for q in s2 if q)
    cands: list[Fraction] = []
    for a in v1[:max_scalings]:
        for b in v2[:max_scalings]:
            c = a / b
            if c not in cands:
                cands.append(c)
    cands = sorted(cands, key=lambda c: (c.numerator * c.denominator, c))[:max_scalings]
    if Fraction(1) not in cands:
        cands.append(Fraction(1))
    for c in cands:
        limit = min(cutoff, c * cutoff)
        w1 = _window(s1, Fraction(1), limit)
        w2 = _window(s2, c, limit)
        same_values = set(w1) == set(w2)
        same_mult = w1 == w2
        if same_mult or (same_values and not multiplicities):
            return CommensurabilityResult(True, c, FINITE_CUTOFF_CAVEAT, same_mult, tuple(cands))
    return CommensurabilityResult(False, None, FINITE_CUTOFF_CAVEAT, False, tuple(cands))


def random_integral_form(rng: random.Random, dimension: int, entry_bound: int) -> GramMatrix:
    """Seeded random integral positive-definite Gram matrix."""
    while True:
        rows = [[0] * dimension for _ in range(dimension)]
        for i in range(dimension):
            rows[i][i] = rng.randint(1, entry_bound)
            for j in range(i):
                rows[i][j] = rows[j][i] = rng.randint(-entry_bound, entry_bound)
        try:
            return GramMatrix(tuple(tuple(r) for r in rows))
        except NotPositiveDefinite:
            continue


def random_unimodular(rng: random.Random, dimension: int, steps: int = 6) -> list[list[int]]:
    U = [[int(i == j) for j in range(dimension)] for i in range(dimension)]
    for _ in range(steps):
        i, j = rng.sample(range(dimension), 2) if dimension > 1 else (0, 0)
        if i == j:
            break
        t = rng.choice((-1, 1))
        for row in U:
            row[j] += t * row[i]
    return U


@dataclass
class ScanResult:
    trials: int
    table: dict[str, int] = field(default_factory=lambda: {
        "commensurable_similar": 0,
        "commensurable_not_similar": 0,
        "not_commensurable_similar": 0,
        "not_commensurable_not_similar": 0,
    })
    counterexamples: list[dict] = field(default_factory=list)
    budget_failures: list[dict] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return bool(self.counterexamples)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "contingency": dict(self.table),
            "counterexamples": self.counterexamples,
            "budget_failures": self.budget_failures,
            "caveat": FINITE_CUTOFF_CAVEAT,
        }


def classify_pair(result: ScanResult, g1: GramMatrix, g2: GramMatrix, cutoff: Fraction,
                  budget: int, label: str) -> None:
    try:
        comm = spectrally_commensurable(g1, g2, cutoff, budget=budget)
    except BudgetExceeded as exc:
        result.budget_failures.append({"pair": label, "error": str(exc)})
        return
    sim = rationally_similar(g1, g2)
    key = ("commensurable" if comm.verdict else "not_commensurable") + \
          ("_similar" if sim.similar else "_not_similar")
    result.table[key] += 1
    if comm.verdict and not sim.similar:
        result.counterexamples.append({
            "pair": label,
            "gram1": g1.to_json(),
            "gram2": g2.to_json(),
            "spectral_scaling": str(comm.scaling),
            "similarity_candidates": [str(c) for c in sim.candidates],
        })


def kitaoka_scan(dimension: int, entry_bound: int, trials: int, cutoff, seed: int = 0,
                 related_fraction: float = 0.25, extra_pairs=(),
                 budget: int = DEFAULT_BUDGET) -> ScanResult:
    """Random pairs of small integral forms: does commensurability imply similarity?

    A ``related_fraction`` of the pairs is built as ``(g, k * U^T g U)`` so the
    commensurable row of the table is populated; the rest are independent
    draws.  ``extra_pairs`` are appended after the random trials.
    """
    cutoff = Fraction(cutoff)
    rng = random.Random(seed)
    result = ScanResult(trials + len(extra_pairs))
    for t in range(trials):
        g1 = random_integral_form(rng, dimension, entry_bound)
        if rng.random() < related_fraction:
            g2 = g1.transformed(random_unimodular(rng, dimension)).scaled(rng.randint(1, 3))
        else:
            g2 = random_integral_form(rng, dimension, entry_bound)
        classify_pair(result, g1, g2, cutoff, budget, f"trial {t}")
    for k, (g1, g2) in enumerate(extra_pairs):
        classify_pair(result, g1, g2, cutoff, budget, f"extra {k}")
    return result
