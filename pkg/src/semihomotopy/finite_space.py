"""Finite topological spaces with exact set-level operators.

Subsets are integer bitmasks over point indices (bit ``i`` is point ``i``).
Every family this module emits is a tuple of bitmasks sorted ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Sequence


class SpaceError(ValueError):
    """Raised for malformed spaces or out-of-range subsets."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    opens: tuple[int, ...]

    def __post_init__(self):
        points = tuple(str(p) for p in self.points)
        if not points:
            raise SpaceError("a space needs at least one point")
        if len(set(points)) != len(points):
            raise SpaceError(f"duplicate point names in {points}")
        full = (1 << len(points)) - 1
        opens = tuple(sorted(set(int(u) for u in self.opens)))
        for u in opens:
            if u < 0 or u > full:
                raise SpaceError(f"open set {u:#b} has indices outside the ground set")
        if 0 not in opens:
            raise SpaceError("the empty set must be open")
        if full not in opens:
            raise SpaceError("the whole space must be open")
        members = set(opens)
        for i, u in enumerate(opens):
            for v in opens[i + 1:]:
                if u | v not in members:
                    raise SpaceError(
                        f"opens not closed under union: {_fmt(points, u)} ∪ {_fmt(points, v)}"
                    )
                if u & v not in members:
                    raise SpaceError(
                        f"opens not closed under intersection: {_fmt(points, u)} ∩ {_fmt(points, v)}"
                    )
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "opens", opens)

    @classmethod
    def from_names(cls, points: Sequence[str], opens: Iterable[Iterable[str]]) -> "FiniteSpace":
        index = {p: i for i, p in enumerate(points)}
        masks = []
        for u in opens:
            m = 0
            for name in u:
                if name not in index:
                    raise SpaceError(f"unknown point {name!r} in open set")
                m |= 1 << index[name]
            masks.append(m)
        return cls(tuple(points), tuple(masks))

    @classmethod
    def discrete(cls, n: int, names: Optional[Sequence[str]] = None) -> "FiniteSpace":
        names = names or _default_names(n)
        return cls(tuple(names), tuple(range(1 << n)))

    @classmethod
    def indiscrete(cls, n: int, names: Optional[Sequence[str]] = None) -> "FiniteSpace":
        names = names or _default_names(n)
        return cls(tuple(names), (0, (1 << n) - 1))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, name: str) -> int:
        try:
            return self.points.index(name)
        except ValueError:
            raise SpaceError(f"unknown point {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def fmt(self, mask: int) -> str:
        return _fmt(self.points, mask)

    def check(self, mask: int) -> int:
        if mask < 0 or mask > self.full:
            raise SpaceError(f"subset {mask:#b} has indices outside a {self.n}-point space")
        return mask

    @cached_property
    def closed_sets(self) -> tuple[int, ...]:
        return tuple(sorted(self.full & ~u for u in self.opens))

    @cached_property
    def open_set(self) -> frozenset:
        return frozenset(self.opens)

    def is_open(self, mask: int) -> bool:
        return self.check(mask) in self.open_set

    def is_closed(self, mask: int) -> bool:
        return (self.full & ~self.check(mask)) in self.open_set

    def closure(self, mask: int) -> int:
        self.check(mask)
        out = self.full
        for k in self.closed_sets:
            if mask & ~k == 0:
                out &= k
        return out

    def interior(self, mask: int) -> int:
        self.check(mask)
        out = 0
        for u in self.opens:
            if u & ~mask == 0:
                out |= u
        return out

    def is_semi_open(self, mask: int) -> tuple[bool, Optional[int]]:
        """Decide semi-openness; the witness is an open U with U ⊆ A ⊆ cl(U)."""
        u = self.interior(mask)
        if mask & ~self.closure(u) == 0:
            return True, u
        return False, None

    def is_semi_closed(self, mask: int) -> tuple[bool, Optional[int]]:
        """Decide semi-closedness; the witness is a closed K with int(K) ⊆ C ⊆ K."""
        k = self.closure(mask)
        if self.interior(k) & ~mask == 0:
            return True, k
        return False, None

    @cached_property
    def semi_open_family(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.full + 1) if self.is_semi_open(a)[0])

    @cached_property
    def semi_closed_family(self) -> tuple[int, ...]:
        return tuple(c for c in range(self.full + 1) if self.is_semi_closed(c)[0])

    @cached_property
    def semi_open_set(self) -> frozenset:
        return frozenset(self.semi_open_family)

    @cached_property
    def semi_closed_set(self) -> frozenset:
        return frozenset(self.semi_closed_family)

    def semi_interior(self, mask: int) -> int:
        self.check(mask)
        out = 0
        for a in self.semi_open_family:
            if a & ~mask == 0:
                out |= a
        return out

    def semi_closure(self, mask: int) -> int:
        self.check(mask)
        out = self.full
        for c in self.semi_closed_family:
            if mask & ~c == 0:
                out &= c
        return out

    def semi_open_core(self, point: int) -> int:
        """Intersection of all semi-open sets containing ``point``."""
        if not 0 <= point < self.n:
            raise SpaceError(f"point index {point} out of range")
        out = self.full
        for a in self.semi_open_family:
            if a >> point & 1:
                out &= a
        return out

    def to_json(self) -> dict:
        return {"points": list(self.points), "opens": [self.names(u) for u in self.opens]}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSpace":
        try:
            return cls.from_names(data["points"], data["opens"])
        except (KeyError, TypeError) as exc:
            raise SpaceError(f"space JSON needs 'points' and 'opens': {exc}") from None


def _default_names(n: int) -> tuple[str, ...]:
    return tuple("abcdefghijklmnopqrstuvwxyz"[i] for i in range(n))


def _fmt(points: Sequence[str], mask: int) -> str:
    return "{" + ",".join(points[i] for i in bits(mask)) + "}"


def semi_open_family(space: FiniteSpace) -> tuple[int, ...]:
    return space.semi_open_family


def semi_closed_family(space: FiniteSpace) -> tuple[int, ...]:
    return space.semi_closed_family


def semi_open_by_witness_search(space: FiniteSpace, mask: int) -> Optional[int]:
    """Literal search for an open U with U ⊆ A ⊆ cl(U); None if there is none."""
    for u in space.opens:
        if u & ~mask == 0 and mask & ~space.closure(u) == 0:
            return u
    return None


def semi_closed_by_witness_search(space: FiniteSpace, mask: int) -> Optional[int]:
    for k in space.closed_sets:
        if mask & ~k == 0 and space.interior(k) & ~mask == 0:
            return k
    return None


@lru_cache(maxsize=None)
def _preorder_topologies(n: int) -> tuple[tuple[int, ...], ...]:
    # A finite topology is determined by the minimal open neighbourhood of
    # each point; those must satisfy j ∈ U_i ⇒ U_j ⊆ U_i.
    rows: list[int] = [0] * n
    found: list[tuple[int, ...]] = []

    def choices(k: int) -> Iterator[int]:
        others = [i for i in range(n) if i != k]
        for sub in range(1 << (n - 1)):
            m = 1 << k
            for j, i in enumerate(others):
                if sub >> j & 1:
                    m |= 1 << i
            yield m

    def consistent(k: int) -> bool:
        uk = rows[k]
        for j in range(k):
            uj = rows[j]
            if uj >> k & 1 and uk & ~uj:
                return False
            if uk >> j & 1 and uj & ~uk:
                return False
        return True

    def rec(k: int) -> None:
        if k == n:
            opens = {0}
            for r in rows:
                opens |= {s | r for s in opens}
            found.append(tuple(sorted(opens)))
            return
        for m in choices(k):
            rows[k] = m
            if consistent(k):
                rec(k + 1)

    rec(0)
    found.sort()
    return tuple(found)


def enumerate_topologies(n: int, names: Optional[Sequence[str]] = None) -> Iterator[FiniteSpace]:
    """Every topology on an ``n``-point set exactly once, in canonical order."""
    if not 1 <= n <= 5:
        raise SpaceError(f"enumerate_topologies supports 1 <= n <= 5, got {n}")
    names = tuple(names) if names else _default_names(n)
    for opens in _preorder_topologies(n):
        yield FiniteSpace(names, opens)


@lru_cache(maxsize=None)
def all_spaces(max_points: int) -> tuple[FiniteSpace, ...]:
    """Spaces with 1..max_points points, ordered by size then open family."""
    out: list[FiniteSpace] = []
    for n in range(1, max_points + 1):
        out.extend(enumerate_topologies(n))
    return tuple(out)


# Named fixtures used throughout the tests and the CLI.
E1 = FiniteSpace.from_names("abcd", [[], ["a"], ["a", "b"], ["a", "b", "c", "d"]])
SIERPINSKI = FiniteSpace.from_names("ab", [[], ["a"], ["a", "b"]])
