"""Finite permutation groups and Gassmann-Sunada triples.

Permutations act on the right: ``(g * h)`` applies ``g`` first, then ``h``,
so a point ``i`` goes to ``h.images[g.images[i]]``.  Cosets are right
cosets ``Hx`` and ``G`` acts on them by right multiplication.

Everything is enumerated explicitly.  Element lists are ordered breadth-first
from the identity with the generator order fixed, so indices are stable
across runs and every output built from them is reproducible.
"""

from __future__ import annotations

import itertools
import random
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, InternalConsistencyError, NotASubgroup, OrderMismatch, ParseError

DEFAULT_ELEMENT_CAP = 200_000
SUBGROUP_SEARCH_CAP = 2000


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([b[i] for i in a])


def _invert(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> Permutation:
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for pt in cyc:
                if not 0 <= pt < degree:
                    raise ValueError(f"point {pt} outside 0..{degree - 1}")
                if pt in seen:
                    raise ValueError(f"point {pt} repeated in cycle notation")
                seen.add(pt)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls._trusted(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation._trusted(_compose(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation._trusted(_invert(self.images))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths as a nonincreasing partition of the degree."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def order(self) -> int:
        return lcm(*self.cycle_type()) if self.degree else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self})"


_CYCLE_TOKEN = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int, line: int | None = None) -> Permutation:
    """Parse cycle notation such as ``(0 1)(2 3 4)``; ``()`` is the identity."""
    stripped = text.strip()
    pos = 0
    cycles = []
    for m in _CYCLE_TOKEN.finditer(stripped):
        gap = stripped[pos:m.start()].strip()
        if gap:
            raise ParseError(f"unexpected token {gap!r} in cycle notation", line, gap)
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        pts = []
        for tok in body:
            if not re.fullmatch(r"\d+", tok):
                raise ParseError(f"bad point {tok!r} in cycle {m.group(0)!r}", line, tok)
            pts.append(int(tok))
        cycles.append(pts)
    tail = stripped[pos:].strip()
    if tail:
        raise ParseError(f"unexpected token {tail!r} in cycle notation", line, tail)
    if not stripped:
        raise ParseError("empty generator line", line, "")
    try:
        return Permutation.from_cycles(cycles, degree)
    except ValueError as exc:
        raise ParseError(str(exc), line, stripped) from None


def parse_generators(text: str, degree: int | None = None) -> tuple[int, list[Permutation]]:
    """Parse a group file: ``degree n`` then one generator per line.

    When ``degree`` is given (a subgroup file belonging to a known group) the
    header line is optional.  Blank lines and ``#`` comments are ignored.
    """
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("degree"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"malformed header {line!r}", lineno, line)
            n = int(parts[1])
            if degree is not None and n != degree:
                raise ParseError(f"degree {n} does not match group degree {degree}", lineno, parts[1])
            degree = n
            continue
        if degree is None:
            raise ParseError("missing 'degree n' header", lineno, line)
        gens.append(parse_cycles(line, degree, lineno))
    if degree is None:
        raise ParseError("missing 'degree n' header", None, "")
    return degree, gens


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


class PermGroup:
    """A finite permutation group with every element listed.

    Build one with :func:`close_generators`; the constructor trusts its
    arguments.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: Sequence[tuple[int, ...]]):
        self.degree = degree
        self.generators = tuple(generators)
        self._tuples = list(elements)
        self._index = {t: i for i, t in enumerate(self._tuples)}
        self.elements = tuple(Permutation._trusted(t) for t in self._tuples)
        self._inverse = [self._index[_invert(t)] for t in self._tuples]
        self.classes, self.class_of = self._conjugacy_classes()
        self._table: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._tuples)

    @property
    def order(self) -> int:
        return len(self._tuples)

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} order={self.order} classes={len(self.classes)}>"

    def index(self, perm: Permutation | tuple[int, ...]) -> int:
        key = perm.images if isinstance(perm, Permutation) else tuple(perm)
        try:
            return self._index[key]
        except KeyError:
            raise NotASubgroup(f"{perm} is not an element of the group") from None

    def __contains__(self, perm: Permutation) -> bool:
        return perm.images in self._index

    def mul(self, i: int, j: int) -> int:
        return self._index[_compose(self._tuples[i], self._tuples[j])]

    def inv(self, i: int) -> int:
        return self._inverse[i]

    def conjugate(self, i: int, g: int) -> int:
        """Index of ``g^-1 * x_i * g``."""
        return self.mul(self.mul(self._inverse[g], i), g)

    def element_order(self, i: int) -> int:
        return self.elements[i].order()

    def _conjugacy_classes(self) -> tuple[tuple[ConjugacyClass, ...], tuple[int, ...]]:
        gens = [g.images for g in self.generators]
        gen_invs = [_invert(g) for g in gens]
        class_of = [-1] * len(self._tuples)
        classes = []
        for start in range(len(self._tuples)):
            if class_of[start] >= 0:
                continue
            cid = len(classes)
            class_of[start] = cid
            members = [start]
            queue = deque([start])
            while queue:
                x = self._tuples[queue.popleft()]
                for s, s_inv in zip(gens, gen_invs):
                    y = self._index[_compose(_compose(s_inv, x), s)]
                    if class_of[y] < 0:
                        class_of[y] = cid
                        members.append(y)
                        queue.append(y)
            classes.append(ConjugacyClass(self.elements[start], tuple(sorted(members))))
        return tuple(classes), tuple(class_of)

    def multiplication_table(self) -> np.ndarray:
        """Dense ``table[i, j] = index(x_i * x_j)``; only for small groups."""
        if self._table is None:
            if self.order > SUBGROUP_SEARCH_CAP:
                raise CapExceeded(f"multiplication table for order {self.order} > {SUBGROUP_SEARCH_CAP}")
            self._table = _multiplication_table(self._tuples, self.degree)
        return self._table

    # -- subgroup constructors -------------------------------------------------

    def subgroup(self, generators: Iterable[Permutation]) -> Subgroup:
        """The subgroup generated by ``generators`` (which must lie in the group)."""
        idx = [self.index(g) for g in generators]
        return Subgroup(self, tuple(self._close_indices(idx)))

    def subgroup_where(self, predicate: Callable[[Permutation], bool]) -> Subgroup:
        return Subgroup.from_indices(self, [i for i, g in enumerate(self.elements) if predicate(g)])

    def stabilizer(self, point: int) -> Subgroup:
        return self.subgroup_where(lambda g: g.images[point] == point)

    def set_stabilizer(self, points: Iterable[int]) -> Subgroup:
        pts = frozenset(points)
        return self.subgroup_where(lambda g: frozenset(g.images[p] for p in pts) == pts)

    def _close_indices(self, gen_idx: Sequence[int]) -> list[int]:
        found = {0}
        order = [0]
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for s in gen_idx:
                y = self.mul(x, s)
                if y not in found:
                    found.add(y)
                    order.append(y)
                    queue.append(y)
        return sorted(order)


def _multiplication_table(tuples: Sequence[tuple[int, ...]], degree: int) -> np.ndarray:
    m = len(tuples)
    elems = np.array(tuples, dtype=np.int64).reshape(m, degree)
    # pick base points until the images of the base separate all elements
    base: list[int] = []
    for pt in range(degree):
        base.append(pt)
        if len({tuple(r) for r in elems[:, base].tolist()}) == m:
            break
    weights = np.array([degree ** k for k in range(len(base))], dtype=np.int64)
    keys = elems[:, base] @ weights
    order = np.argsort(keys)
    sorted_keys = keys[order]
    table = np.empty((m, m), dtype=np.int32)
    for i in range(m):
        # row j of elems[:, elems[i]] is x_i * x_j
        prods = elems[:, elems[i, base]] @ weights
        table[i] = order[np.searchsorted(sorted_keys, prods)]
    return table


def close_generators(gens: Sequence[Permutation], cap: int = DEFAULT_ELEMENT_CAP,
                     degree: int | None = None) -> PermGroup:
    """Enumerate the group generated by ``gens`` breadth-first from the identity."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not gens and degree is None:
        raise ValueError("need a generator or an explicit degree")
    n = gens[0].degree if gens else degree
    if any(g.degree != n for g in gens):
        raise ValueError("generators have different degrees")
    ident = tuple(range(n))
    gen_tuples = [g.images for g in gens]
    elements = [ident]
    seen = {ident}
    head = 0
    while head < len(elements):
        x = elements[head]
        head += 1
        for s in gen_tuples:
            y = _compose(x, s)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > cap:
                    raise CapExceeded(f"group closure exceeded {cap} elements")
    return PermGroup(n, gens, elements)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: PermGroup
    element_indices: tuple[int, ...]

    @classmethod
    def from_indices(cls, parent: PermGroup, indices: Iterable[int]) -> Subgroup:
        """Validate closure of an explicit index set and wrap it."""
        idx = tuple(sorted(set(indices)))
        s = set(idx)
        if not idx or any(not 0 <= i < parent.order for i in idx):
            raise NotASubgroup("index set empty or out of range")
        if 0 not in s:
            raise NotASubgroup("subset does not contain the identity")
        for i in idx:
            if parent.inv(i) not in s:
                raise NotASubgroup("subset not closed under inverses")
            for j in idx:
                if parent.mul(i, j) not in s:
                    raise NotASubgroup("subset not closed under composition")
        if parent.order % len(idx):
            raise NotASubgroup("subset order does not divide the group order")
        return cls(parent, idx)

    @property
    def order(self) -> int:
        return len(self.element_indices)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def elements(self) -> list[Permutation]:
        return [self.parent.elements[i] for i in self.element_indices]

    def __contains__(self, item: int | Permutation) -> bool:
        if isinstance(item, Permutation):
            item = self.parent._index.get(item.images, -1)
        return item in self._members

    @property
    def _members(self) -> frozenset[int]:
        try:
            return self.__dict__["_members_cache"]
        except KeyError:
            members = frozenset(self.element_indices)
            object.__setattr__(self, "_members_cache", members)
            return members

    def conjugate_by(self, g: int) -> Subgroup:
        return Subgroup(self.parent, tuple(sorted(self.parent.conjugate(h, g) for h in self.element_indices)))

    def generators(self) -> list[Permutation]:
        """A small generating set, chosen greedily in element order."""
        gens: list[int] = []
        span = {0}
        for i in self.element_indices:
            if i not in span:
                gens.append(i)
                span = set(self.parent._close_indices(gens))
        return [self.parent.elements[i] for i in gens]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.element_indices == self.element_indices)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.element_indices))

    def __repr__(self) -> str:
        return f"<Subgroup order={self.order} index={self.index}>"


def _check_subgroup(G: PermGroup, H: Subgroup) -> None:
    if H.parent is not G:
        raise NotASubgroup("subgroup belongs to a different group object")


@dataclass(frozen=True)
class ClassFunction:
    """Rational values indexed by the conjugacy classes of ``group``."""

    group: PermGroup = field(repr=False, compare=False)
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.group.classes):
            raise ValueError("one value per conjugacy class required")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def trivial(cls, G: PermGroup) -> ClassFunction:
        return cls(G, (1,) * len(G.classes))

    @classmethod
    def regular(cls, G: PermGroup) -> ClassFunction:
        return cls(G, tuple(G.order if c.representative.is_identity() else 0 for c in G.classes))

    def at(self, element_index: int) -> Fraction:
        return self.values[self.group.class_of[element_index]]

    def inner_product(self, other: ClassFunction) -> Fraction:
        """``<self, other>`` for real-valued class functions."""
        total = sum((c.size * a * b for c, a, b in zip(self.group.classes, self.values, other.values)),
                    Fraction(0))
        return total / self.group.order

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassFunction) and self.group is other.group and self.values == other.values

    __hash__ = None


class CosetAction:
    """The right action of ``G`` on the right cosets ``H\\G``.

    Cosets are numbered in order of their smallest element index, which is
    also the chosen representative.
    """

    def __init__(self, G: PermGroup, H: Subgroup):
        self.group = G
        self.subgroup = H
        coset_of = [-1] * G.order
        reps = []
        for x in range(G.order):
            if coset_of[x] >= 0:
                continue
            c = len(reps)
            reps.append(x)
            for h in H.element_indices:
                coset_of[G.mul(h, x)] = c
        self.coset_of = tuple(coset_of)
        self.representatives = tuple(reps)
        self._cache: dict[int, Permutation] = {}

    @property
    def coset_count(self) -> int:
        return len(self.representatives)

    def image(self, g: int | Permutation) -> Permutation:
        """Permutation of cosets induced by the element ``g``."""
        gi = self.group.index(g) if isinstance(g, Permutation) else g
        perm = self._cache.get(gi)
        if perm is None:
            G = self.group
            perm = Permutation._trusted(tuple(self.coset_of[G.mul(r, gi)] for r in self.representatives))
            self._cache[gi] = perm
        return perm

    __getitem__ = image

    def fixed_cosets(self, g: int) -> int:
        G = self.group
        return sum(1 for c, r in enumerate(self.representatives) if self.coset_of[G.mul(r, g)] == c)


def coset_action(G: PermGroup, H: Subgroup) -> tuple[int, CosetAction]:
    _check_subgroup(G, H)
    action = CosetAction(G, H)
    if action.coset_count * H.order != G.order:
        raise InternalConsistencyError("coset count times subgroup order differs from group order")
    return action.coset_count, action


def permutation_character(G: PermGroup, H: Subgroup) -> ClassFunction:
    """Number of cosets of ``H`` fixed by each conjugacy class."""
    _, action = coset_action(G, H)
    return ClassFunction(G, tuple(action.fixed_cosets(G.index(c.representative)) for c in G.classes))


def invariant_dimension(chi: ClassFunction, H: Subgroup, *, character: bool = False) -> Fraction:
    """Average of ``chi`` over ``H``.

    For a character this is the dimension of the ``H``-fixed subspace; pass
    ``character=True`` to have integrality asserted.
    """
    if chi.group is not H.parent:
        raise NotASubgroup("class function and subgroup live on different groups")
    total = sum((chi.at(h) for h in H.element_indices), Fraction(0))
    dim = total / H.order
    if character and (dim.denominator != 1 or dim < 0):
        raise InternalConsistencyError(f"invariant dimension {dim} of a character is not a natural number")
    return dim


@dataclass(frozen=True)
class GassmannVerdict:
    condition2_holds: bool
    intersection_table: tuple[tuple[int, int], ...]
    characters_equal: bool
    subgroups_conjugate: bool
    is_gassmann_system: bool

    def to_json(self, G: PermGroup | None = None) -> dict:
        rows = []
        for k, (a, b) in enumerate(self.intersection_table):
            row = {"class": k, "H1": a, "H2": b}
            if G is not None:
                cls = G.classes[k]
                row.update(representative=str(cls.representative), size=cls.size,
                           cycle_type=list(cls.representative.cycle_type()))
            rows.append(row)
        return {
            "condition2_holds": self.condition2_holds,
            "characters_equal": self.characters_equal,
            "subgroups_conjugate": self.subgroups_conjugate,
            "is_gassmann_system": self.is_gassmann_system,
            "intersection_table": rows,
        }


def intersection_table(G: PermGroup, H: Subgroup) -> tuple[int, ...]:
    counts = Counter(G.class_of[h] for h in H.element_indices)
    return tuple(counts.get(k, 0) for k in range(len(G.classes)))


def subgroups_conjugate(G: PermGroup, H1: Subgroup, H2: Subgroup) -> bool:
    """Exhaustive search for ``g`` with ``g^-1 H1 g = H2``."""
    if H1.order != H2.order:
        return False
    target = H2._members
    gens = [h for h in H1.element_indices if h != 0]
    for g in range(G.order):
        if all(G.conjugate(h, g) in target for h in gens):
            return True
    return False


def is_gassmann(G: PermGroup, H1: Subgroup, H2: Subgroup) -> GassmannVerdict:
    _check_subgroup(G, H1)
    _check_subgroup(G, H2)
    t1 = intersection_table(G, H1)
    t2 = intersection_table(G, H2)
    cond2 = H1.order == H2.order and t1 == t2
    chars_equal = permutation_character(G, H1) == permutation_character(G, H2)
    if cond2 != chars_equal:
        raise InternalConsistencyError(
            f"class-intersection test ({cond2}) disagrees with permutation characters ({chars_equal})")
    conj = subgroups_conjugate(G, H1, H2)
    if conj and not cond2:
        raise InternalConsistencyError("conjugate subgroups failed the class-intersection test")
    return GassmannVerdict(
        condition2_holds=cond2,
        intersection_table=tuple(zip(t1, t2)),
        characters_equal=chars_equal,
        subgroups_conjugate=conj,
        is_gassmann_system=cond2 and not conj,
    )


# -- abstract groups given by multiplication tables ------------------------------


@dataclass(frozen=True)
class FiniteGroupTable:
    """A finite group given by its full multiplication table."""

    order: int
    multiplication: tuple[tuple[int, ...], ...]
    element_orders: tuple[int, ...]
    identity: int = 0

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[int]], seed: int = 0) -> FiniteGroupTable:
        d = len(rows)
        table = tuple(tuple(int(x) for x in r) for r in rows)
        if d == 0 or any(len(r) != d for r in table):
            raise ValueError("multiplication table must be a nonempty square")
        full = set(range(d))
        for r in table:
            if set(r) != full:
                raise ValueError("each row must be a permutation of 0..d-1")
        for j in range(d):
            if {table[i][j] for i in range(d)} != full:
                raise ValueError("each column must be a permutation of 0..d-1")
        ident = [e for e in range(d) if table[e] == tuple(range(d))]
        if len(ident) != 1 or any(table[i][ident[0]] != i for i in range(d)):
            raise ValueError("no two-sided identity")
        e = ident[0]
        if d <= 64:
            triples: Iterable = itertools.product(range(d), repeat=3)
        else:
            rng = random.Random(seed)
            triples = [(rng.randrange(d), rng.randrange(d), rng.randrange(d)) for _ in range(20_000)]
        for a, b, c in triples:
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise ValueError(f"not associative at ({a}, {b}, {c})")
        orders = []
        for a in range(d):
            k, x = 1, a
            while x != e:
                x = table[x][a]
                k += 1
            orders.append(k)
        return cls(d, table, tuple(orders), e)

    def order_statistics(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_orders).items()))

    def regular_permutations(self) -> list[Permutation]:
        """Right-regular embedding into ``S_d``: ``x -> x * g``."""
        t = self.multiplication
        return [Permutation._trusted(tuple(t[x][g] for x in range(self.order))) for g in range(self.order)]

    def generating_set(self) -> list[int]:
        gens: list[int] = []
        span = {self.identity}
        for g in sorted(range(self.order), key=lambda a: (-self.element_orders[a], a)):
            if g not in span:
                gens.append(g)
                span = self._closure(gens)
            if len(span) == self.order:
                break
        return gens

    def _closure(self, gens: Sequence[int]) -> set[int]:
        t = self.multiplication
        span = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = t[x][s]
                if y not in span:
                    span.add(y)
                    queue.append(y)
        return span


def is_isomorphic(T1: FiniteGroupTable, T2: FiniteGroupTable) -> bool:
    """Brute-force isomorphism test by extending generator images."""
    if T1.order != T2.order or T1.order_statistics() != T2.order_statistics():
        return False
    gens = T1.generating_set()
    m1, m2 = T1.multiplication, T2.multiplication
    candidates = [[y for y in range(T2.order) if T2.element_orders[y] == T1.element_orders[g]] for g in gens]
    for images in itertools.product(*candidates):
        phi = {T1.identity: T2.identity}
        queue = deque([T1.identity])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for g, gy in zip(gens, images):
                xg, yg = m1[x][g], m2[phi[x]][gy]
                known = phi.get(xg)
                if known is None:
                    phi[xg] = yg
                    queue.append(xg)
                elif known != yg:
                    ok = False
                    break
        if not ok or len(set(phi.values())) != T1.order:
            continue
        if all(phi[m1[a][b]] == m2[phi[a]][phi[b]] for a in range(T1.order) for b in range(T1.order)):
            return True
    return False


@dataclass(frozen=True)
class OrderStatisticsResult:
    same_statistics: bool
    statistics: tuple[dict[int, int], dict[int, int]]
    isomorphic: bool | None


def gassmann_via_order_statistics(H1: FiniteGroupTable, H2: FiniteGroupTable) -> OrderStatisticsResult:
    """Compare element-order counts of two groups of the same order ``d``.

    Under the regular embedding into ``S_d`` an element of order ``k`` has
    cycle type ``k^(d/k)``, so equal order statistics is exactly the
    class-intersection condition in ``S_d``.  Isomorphism is decided by brute
    force for ``d <= 16`` and left as ``None`` beyond that.
    """
    if H1.order != H2.order:
        raise OrderMismatch(f"orders {H1.order} and {H2.order} differ")
    s1, s2 = H1.order_statistics(), H2.order_statistics()
    iso = is_isomorphic(H1, H2) if H1.order <= 16 else None
    return OrderStatisticsResult(s1 == s2, (s1, s2), iso)


def regular_embedding(T: FiniteGroupTable, Sd: PermGroup) -> Subgroup:
    """The right-regular image of ``T`` as a subgroup of an enumerated ``S_d``."""
    return Subgroup.from_indices(Sd, [Sd.index(p) for p in T.regular_permutations()])


def parse_table(text: str) -> FiniteGroupTable:
    """Parse ``order d`` followed by ``d`` rows of ``d`` indices."""
    rows: list[list[int]] = []
    d = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if d is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "order" or not parts[1].isdigit():
                raise ParseError(f"expected 'order d', got {line!r}", lineno, line)
            d = int(parts[1])
            continue
        row = []
        for tok in line.split():
            if not tok.isdigit():
                raise ParseError(f"bad table entry {tok!r}", lineno, tok)
            row.append(int(tok))
        if len(row) != d:
            raise ParseError(f"row has {len(row)} entries, expected {d}", lineno, line)
        rows.append(row)
    if d is None or len(rows) != d:
        raise ParseError(f"expected {d} table rows, found {len(rows)}")
    try:
        return FiniteGroupTable.from_table(rows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_table(T: FiniteGroupTable) -> str:
    lines = [f"order {T.order}"]
    lines += [" ".join(map(str, r)) for r in T.multiplication]
    return "\n".join(lines) + "\n"


# -- subgroup enumeration ---------------------------------------------------------


def enumerate_subgroups(G: PermGroup, max_index: int | None = None,
                        max_subgroups: int = 200_000) -> list[Subgroup]:
    """One subgroup per conjugacy class, by cyclic extension.

    Every subgroup is reached through a chain of subgroups each generated by
    its predecessor and one more element.  The representative of a class is
    its lexicographically smallest sorted index tuple; classes are ordered by
    (order, that tuple).
    """
    if G.order > SUBGROUP_SEARCH_CAP:
        raise CapExceeded(f"subgroup search limited to groups of order <= {SUBGROUP_SEARCH_CAP}")
    table = G.multiplication_table()
    m = G.order
    inverse = np.array([G.inv(i) for i in range(m)])

    def close(members: np.ndarray, gens: list[int]) -> np.ndarray:
        mask = np.zeros(m, dtype=bool)
        mask[members] = True
        frontier = members
        g = np.array(gens, dtype=np.int64)
        while frontier.size:
            prods = np.unique(table[np.ix_(frontier, g)])
            new = prods[~mask[prods]]
            mask[new] = True
            frontier = new
        return np.flatnonzero(mask)

    cyclic: dict[tuple[int, ...], int] = {}
    for x in range(m):
        key = tuple(close(np.array([0]), [x]).tolist())
        cyclic.setdefault(key, x)
    cyclic_gens = list(cyclic.values())

    found: dict[tuple[int, ...], list[int]] = {(0,): []}
    layer = [(0,)]
    while layer:
        nxt = []
        for key in layer:
            members = np.array(key)
            member_set = set(key)
            gens = found[key]
            for x in cyclic_gens:
                if x in member_set:
                    continue
                k = tuple(close(members, gens + [x]).tolist())
                if k not in found:
                    found[k] = gens + [x]
                    nxt.append(k)
                    if len(found) > max_subgroups:
                        raise CapExceeded(f"more than {max_subgroups} subgroups")
        layer = nxt

    group_gens = [G.index(g) for g in G.generators]
    assigned: set[tuple[int, ...]] = set()
    reps = []
    for key in sorted(found, key=lambda k: (len(k), k)):
        if key in assigned:
            continue
        orbit = {key}
        queue = deque([key])
        while queue:
            k = np.array(queue.popleft())
            for s in group_gens:
                conj = tuple(sorted(table[table[inverse[s], k], s].tolist()))
                if conj not in orbit:
                    orbit.add(conj)
                    queue.append(conj)
        assigned |= orbit
        reps.append(min(orbit))
    out = [Subgroup(G, k) for k in reps]
    if max_index is not None:
        out = [H for H in out if H.index <= max_index]
    return sorted(out, key=lambda H: (H.order, H.element_indices))


def search_gassmann_triples(G: PermGroup, max_index: int | None = None) -> list[tuple[Subgroup, Subgroup, GassmannVerdict]]:
    """All Gassmann-Sunada pairs among conjugacy-class representatives."""
    subs = enumerate_subgroups(G, max_index)
    out = []
    for a, b in itertools.combinations(subs, 2):
        if a.order != b.order:
            continue
        if intersection_table(G, a) != intersection_table(G, b):
            continue
        verdict = is_gassmann(G, a, b)
        if verdict.is_gassmann_system:
            out.append((a, b, verdict))
    return out


# -- standard examples ------------------------------------------------------------


def symmetric_group(n: int, cap: int = DEFAULT_ELEMENT_CAP) -> PermGroup:
    if n <= 1:
        return close_generators([Permutation.identity(max(n, 1))], cap)
    gens = [Permutation.from_cycles([[0, 1]], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([list(range(n))], n))
    return close_generators(gens, cap)


def cyclic_group(n: int) -> PermGroup:
    return close_generators([Permutation.from_cycles([list(range(n))], n) if n > 1 else Permutation.identity(1)])


def _gf2_matrix_permutation(rows: Sequence[Sequence[int]]) -> Permutation:
    """Action of a 3x3 matrix over GF(2) on the 7 nonzero column vectors.

    Vector ``v`` (bits ``v = x0 + 2 x1 + 4 x2``) is the point ``v - 1``.
    """
    images = []
    for v in range(1, 8):
        x = [(v >> k) & 1 for k in range(3)]
        y = [sum(rows[i][j] * x[j] for j in range(3)) % 2 for i in range(3)]
        images.append(y[0] + 2 * y[1] + 4 * y[2] - 1)
    return Permutation(tuple(images))


GL32_GENERATORS = (
    # transvection e2 -> e2 + e1 (an involution)
    _gf2_matrix_permutation([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
    # companion matrix of x^3 + x + 1 (order 7)
    _gf2_matrix_permutation([[0, 0, 1], [1, 0, 1], [0, 1, 0]]),
)


def gl32() -> tuple[PermGroup, Subgroup, Subgroup]:
    """``GL(3,2)`` on the nonzero vectors of ``F_2^3``, with the stabilizers
    of the point ``e1`` and of the plane spanned by ``e1, e2``."""
    G = close_generators(list(GL32_GENERATORS))
    point = G.stabilizer(0)
    plane = G.set_stabilizer({0, 1, 2})
    return G, point, plane


def _table_from_rule(d: int, mul: Callable[[int, int], int]) -> FiniteGroupTable:
    return FiniteGroupTable.from_table([[mul(a, b) for b in range(d)] for a in range(d)])


def cyclic_table(n: int) -> FiniteGroupTable:
    return _table_from_rule(n, lambda a, b: (a + b) % n)


def direct_product_table(T1: FiniteGroupTable, T2: FiniteGroupTable) -> FiniteGroupTable:
    d2 = T2.order
    m1, m2 = T1.multiplication, T2.multiplication
    return _table_from_rule(T1.order * d2, lambda a, b: m1[a // d2][b // d2] * d2 + m2[a % d2][b % d2])


def semidirect_cyclic_table(n: int, m: int, r: int) -> FiniteGroupTable:
    """``C_n : C_m`` with ``b^-1 a b = a^r``; element ``a^i b^j`` is ``i + n j``."""
    if pow(r, m, n) != 1 % n:
        raise ValueError("r^m must be 1 mod n")

    def mul(x: int, y: int) -> int:
        i, j = x % n, x // n
        k, l = y % n, y // n
        # b^j a^k = a^(k s^j) b^j with s = r^-1 mod n
        s = pow(r, -1, n) if n > 1 else 0
        return (i + k * pow(s, j, n)) % n + n * ((j + l) % m)

    return _table_from_rule(n * m, mul)


def modular_group_16() -> FiniteGroupTable:
    """``M16 = <a, b | a^8 = b^2 = 1, b a b = a^5>``."""
    return semidirect_cyclic_table(8, 2, 5)


def quaternion_table() -> FiniteGroupTable:
    """``Q8``: elements ``a^i b^j`` with ``a^4 = 1, b^2 = a^2, b^-1 a b = a^-1``."""

    def mul(x: int, y: int) -> int:
        i, j = x % 4, x // 4
        k, l = y % 4, y // 4
        if j == 0:
            return (i + k) % 4 + 4 * l
        # a^i b a^k b^l = a^(i - k) b^(1 + l), and b^2 = a^2
        e = (i - k) % 4
        if l == 0:
            return e + 4
        return (e + 2) % 4

    return _table_from_rule(8, mul)


def relabel_table(T: FiniteGroupTable, perm: Sequence[int]) -> FiniteGroupTable:
    """Same group with element ``x`` renamed ``perm[x]``."""
    inv = _invert(tuple(perm))
    m = T.multiplication
    return _table_from_rule(T.order, lambda a, b: perm[m[inv[a]][inv[b]]])

