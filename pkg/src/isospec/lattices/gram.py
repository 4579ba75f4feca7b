"""Gram matrices of lattices, their duals, and the built-in examples."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import NotPositiveDefinite, ParseError, UnknownName
from ..linalg import determinant, inverse, leading_minors


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric positive-definite rational matrix ``(b_i . b_j)``."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be a nonempty square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        if any(m <= 0 for m in leading_minors(rows)):
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        object.__setattr__(self, "entries", rows)

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def determinant(self) -> Fraction:
        return determinant(self.entries)

    def denominator(self) -> int:
        return lcm(*(x.denominator for r in self.entries for x in r))

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def is_even(self) -> bool:
        return self.is_integral() and all(self.entries[i][i] % 2 == 0 for i in range(self.dimension))

    def scaled(self, c) -> GramMatrix:
        c = Fraction(c)
        return GramMatrix(tuple(tuple(c * x for x in r) for r in self.entries))

    def transformed(self, U: Sequence[Sequence[int]]) -> GramMatrix:
        """Gram matrix of the basis ``U^T b``: returns ``U^T g U``."""
        n = self.dimension
        g = self.entries
        gu = [[sum(g[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return GramMatrix(tuple(tuple(sum(U[k][i] * gu[k][j] for k in range(n)) for j in range(n))
                                for i in range(n)))

    def norm(self, v: Sequence[int]) -> Fraction:
        g = self.entries
        return sum((g[i][j] * v[i] * v[j] for i in range(len(v)) for j in range(len(v))), Fraction(0))

    def to_text(self) -> str:
        lines = [str(self.dimension)]
        lines += [" ".join(str(x) for x in r) for r in self.entries]
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]


def dual_gram(g: GramMatrix) -> GramMatrix:
    """Gram matrix of the dual basis, i.e. ``g^-1``."""
    return GramMatrix(tuple(tuple(r) for r in inverse(g.entries)))


def block_diagonal(*blocks: GramMatrix) -> GramMatrix:
    n = sum(b.dimension for b in blocks)
    rows = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, r in enumerate(b.entries):
            rows[off + i][off:off + b.dimension] = r
        off += b.dimension
    return GramMatrix(tuple(tuple(r) for r in rows))


def parse_gram(text: str) -> GramMatrix:
    """``n`` on the first line, then ``n`` rows of rationals (``p/q`` or integers)."""
    lines = [(k, raw.split("#", 1)[0].strip()) for k, raw in enumerate(text.splitlines(), start=1)]
    lines = [(k, line) for k, line in lines if line]
    if not lines:
        raise ParseError("empty Gram file")
    k0, head = lines[0]
    if not head.isdigit():
        raise ParseError(f"expected the dimension, got {head!r}", k0, head)
    n = int(head)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for k, line in lines[1:]:
        toks = line.replace(",", " ").split()
        if len(toks) != n:
            raise ParseError(f"row has {len(toks)} entries, expected {n}", k, line)
        row = []
        for tok in toks:
            if not re.fullmatch(r"[+-]?\d+(/0*[1-9]\d*)?", tok):
                raise ParseError(f"bad rational {tok!r}", k, tok)
            row.append(Fraction(tok))
        rows.append(tuple(row))
    try:
        return GramMatrix(tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _dn_plus(n: int) -> GramMatrix:
    """``D_n^+`` for ``n`` divisible by 8 (even unimodular).

    Basis, in doubled coordinates: the glue vector ``(1/2)(1, ..., 1)``, the
    roots ``e_i - e_{i+1}`` for ``i = 2 .. n-1`` and ``e_{n-1} + e_n``.  The
    glue vector replaces ``e_1 - e_2``, whose coefficient in ``2 * glue`` is 1,
    so these vectors generate the whole lattice.
    """
    vecs = [[1] * n]
    for i in range(1, n - 1):
        v = [0] * n
        v[i], v[i + 1] = 2, -2
        vecs.append(v)
    v = [0] * n
    v[n - 2] = v[n - 1] = 2
    vecs.append(v)
    return GramMatrix(tuple(tuple(Fraction(sum(a * b for a, b in zip(x, y)), 4) for y in vecs) for x in vecs))


def root_lattice_a2() -> GramMatrix:
    return GramMatrix(((2, 1), (1, 2)))


def integer_lattice(n: int) -> GramMatrix:
    return GramMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def builtin_lattice(name: str) -> GramMatrix:
    """``Zn:<n>`` (also ``Zn(<n>)``, ``Z<n>``), ``A2``, ``E8``, ``E8E8``, ``D16plus``."""
    key = name.strip()
    m = re.fullmatch(r"Z(?:n)?[:(]?(\d+)\)?", key)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownName(f"bad dimension in {name!r}")
        return integer_lattice(n)
    if key == "A2":
        return root_lattice_a2()
    if key == "E8":
        g = _dn_plus(8)
    elif key == "E8E8":
        e8 = _dn_plus(8)
        g = block_diagonal(e8, e8)
    elif key in ("D16plus", "D16+", "E16"):
        g = _dn_plus(16)
    else:
        raise UnknownName(f"unknown lattice {name!r}")
    if g.determinant() != 1 or not g.is_even():
        raise AssertionError(f"{key} is not even unimodular")
    return g


BUILTIN_NAMES = ("Zn:<n>", "A2", "E8", "E8E8", "D16plus")
