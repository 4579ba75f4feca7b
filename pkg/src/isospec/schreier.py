"""Schreier coset graphs, exact characteristic polynomials, transplantation.

A Gassmann triple ``(G, H1, H2)`` together with an inverse-closed multiset
``S`` of elements of ``G`` gives two coset graphs ``H1\\G`` and ``H2\\G``.
Their adjacency operators are ``sum(rho_i(s) for s in S)`` where ``rho_i`` is
the coset permutation representation, so any matrix intertwining ``rho_1``
and ``rho_2`` also intertwines the adjacency operators.  This is the finite
version of the Sunada argument and is checked here in exact arithmetic.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NoIntertwiner, NotASubgroup, NotSymmetric, ShapeMismatch
from .groups import CosetAction, Permutation, PermGroup, Subgroup, coset_action, permutation_character
from .linalg import determinant, integer_determinant
from .polynomials import IntPolynomial

RANDOM_RETRIES = 32
COEFF_RANGE = 1000
EXHAUSTIVE_LIMIT = 20_000


@dataclass(frozen=True)
class CosetGraph:
    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    generator_labels: tuple[str, ...]

    @property
    def degree(self) -> int:
        return len(self.generator_labels)

    def to_json(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "generators": list(self.generator_labels),
            "adjacency": [list(r) for r in self.adjacency],
        }

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.adjacency) + "\n"


class RationalMatrix:
    """Dense matrix of ``Fraction`` entries."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        self.shape = (len(self.rows), len(self.rows[0]) if self.rows else 0)
        if any(len(r) != self.shape[1] for r in self.rows):
            raise ShapeMismatch("ragged rows")

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows])

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    __hash__ = None

    def __repr__(self) -> str:
        return f"RationalMatrix({[[str(x) for x in r] for r in self.rows]})"

    def determinant(self) -> Fraction:
        if self.shape[0] != self.shape[1]:
            raise ShapeMismatch("determinant of a non-square matrix")
        return determinant(self.rows)

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


def _check_inverse_closed(G: PermGroup, S: Sequence[Permutation]) -> list[int]:
    idx = []
    for s in S:
        if s not in G:
            raise NotASubgroup(f"generator {s} is not in the group")
        idx.append(G.index(s))
    counts = Counter(idx)
    for i, k in counts.items():
        if counts.get(G.inv(i), 0) != k:
            raise NotSymmetric(f"multiset not inverse-closed at {G.elements[i]}")
    return idx


def schreier_graph(G: PermGroup, H: Subgroup, S: Sequence[Permutation]) -> CosetGraph:
    """Coset graph on ``H\\G``: one edge ``c -> c*s`` per ``s`` in ``S``.

    A loop (``c*s == c``) adds 1 to the diagonal per occurrence of ``s``.
    Other conventions (e.g. halving loops from involutions) only rescale the
    diagonal.
    """
    idx = _check_inverse_closed(G, S)
    n, action = coset_action(G, H)
    adj = [[0] * n for _ in range(n)]
    for s in idx:
        img = action.image(s).images
        for c in range(n):
            adj[c][img[c]] += 1
    return CosetGraph(n, tuple(tuple(r) for r in adj), tuple(str(s) for s in S))


def symmetrize(G: PermGroup, elements: Sequence[Permutation]) -> list[Permutation]:
    """``elements`` followed by their inverses."""
    return list(elements) + [s.inverse() for s in elements]


def random_symmetric_multiset(G: PermGroup, size: int, seed: int) -> list[Permutation]:
    """``size`` seeded random elements of ``G`` plus their inverses."""
    rng = random.Random(seed)
    picks = [G.elements[rng.randrange(G.order)] for _ in range(size)]
    return symmetrize(G, picks)


def char_poly(adjacency: Sequence[Sequence[int]]) -> IntPolynomial:
    """``det(x I - A)`` by Berkowitz's division-free algorithm."""
    a = [[int(x) for x in r] for r in adjacency]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ShapeMismatch("adjacency must be square")
    if n == 0:
        return IntPolynomial((1,))
    # coefficient vectors highest degree first
    vect = [1, -a[0][0]]
    for r in range(1, n):
        R = a[r][:r]                       # row r, columns < r
        C = [a[i][r] for i in range(r)]    # column r, rows < r
        A = [row[:r] for row in a[:r]]
        col = [1, -a[r][r]]
        # Toeplitz column entries: -R A^k C for k = 0 .. r-1
        v = C
        for _ in range(r):
            col.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(A[i][j] * v[j] for j in range(r)) for i in range(r)]
        # multiply the lower-triangular Toeplitz matrix (r+2) x (r+1) by vect
        new = []
        for i in range(r + 2):
            new.append(sum(col[i - j] * vect[j] for j in range(min(i, r) + 1)))
        vect = new
    return IntPolynomial(tuple(reversed(vect)))


def isospectral_graphs(g1: CosetGraph, g2: CosetGraph) -> bool:
    return g1.vertex_count == g2.vertex_count and char_poly(g1.adjacency) == char_poly(g2.adjacency)


def commutant_basis(G: PermGroup, a1: CosetAction, a2: CosetAction) -> list[list[list[int]]]:
    """Basis of ``{Q : Q rho_1(g) = rho_2(g) Q for all g}``.

    The defining equations, one per generator and entry, read
    ``Q[i*g, j*g] = Q[i, j]``.  Each equates two unknowns, so the solution
    space is spanned by indicator matrices of the classes of the equivalence
    relation they generate, found here with a union-find pass.
    """
    n2, n1 = a2.coset_count, a1.coset_count
    parent = list(range(n2 * n1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.generators:
        gi = G.index(g)
        p1, p2 = a1.image(gi).images, a2.image(gi).images
        for i in range(n2):
            for j in range(n1):
                x, y = find(i * n1 + j), find(p2[i] * n1 + p1[j])
                if x != y:
                    parent[max(x, y)] = min(x, y)
    blocks: dict[int, list[int]] = {}
    for cell in range(n2 * n1):
        blocks.setdefault(find(cell), []).append(cell)
    basis = []
    for cells in blocks.values():
        m = [[0] * n1 for _ in range(n2)]
        for cell in cells:
            m[cell // n1][cell % n1] = 1
        basis.append(m)
    return basis


def _combine(basis: Sequence[Sequence[Sequence[int]]], coeffs: Sequence[int]) -> list[list[int]]:
    n2, n1 = len(basis[0]), len(basis[0][0])
    out = [[0] * n1 for _ in range(n2)]
    for c, m in zip(coeffs, basis):
        if c:
            for i in range(n2):
                row, mrow = out[i], m[i]
                for j in range(n1):
                    if mrow[j]:
                        row[j] += c
    return out


def equivariant_intertwiner(G: PermGroup, H1: Subgroup, H2: Subgroup, seed: int = 0) -> RationalMatrix:
    """An invertible ``Q`` with ``Q rho_1(g) = rho_2(g) Q`` for all ``g``.

    Random integer combinations of a commutant basis are tried first (a
    generic combination is invertible whenever any element is); after
    ``RANDOM_RETRIES`` failures small coefficient vectors are searched
    exhaustively, up to ``EXHAUSTIVE_LIMIT`` candidates.  Unequal permutation
    characters rule out an invertible intertwiner outright.
    """
    n1, a1 = coset_action(G, H1)
    n2, a2 = coset_action(G, H2)
    if n1 != n2:
        raise NoIntertwiner(f"indices differ ({n1} vs {n2})")
    if permutation_character(G, H1) != permutation_character(G, H2):
        raise NoIntertwiner("permutation characters differ, so the coset representations are not isomorphic")
    basis = commutant_basis(G, a1, a2)
    rng = random.Random(seed)
    for _ in range(RANDOM_RETRIES):
        coeffs = [rng.randint(-COEFF_RANGE, COEFF_RANGE) for _ in basis]
        q = _combine(basis, coeffs)
        if integer_determinant(q) != 0:
            return RationalMatrix(q)
    for count, coeffs in enumerate(itertools.product(range(-2, 3), repeat=len(basis))):
        if count >= EXHAUSTIVE_LIMIT:
            break
        q = _combine(basis, coeffs)
        if integer_determinant(q) != 0:
            return RationalMatrix(q)
    raise NoIntertwiner("commutant of the two coset representations has no invertible element")


def transplant_check(Q: RationalMatrix, g1: CosetGraph, g2: CosetGraph) -> bool:
    """Whether ``Q A1 == A2 Q`` exactly."""
    if Q.shape != (g2.vertex_count, g1.vertex_count):
        raise ShapeMismatch(f"Q has shape {Q.shape}, graphs have {g1.vertex_count} and {g2.vertex_count} vertices")
    return Q @ RationalMatrix(g1.adjacency) == RationalMatrix(g2.adjacency) @ Q

