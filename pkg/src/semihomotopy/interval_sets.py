"""Exact point-set algebra on the unit interval.

A :class:`RatSet` is a finite union of rational intervals inside ``[0, 1]``.
The ambient space is the subspace ``[0, 1]`` of the reals, so sets such as
``[0, 1/2)`` are open.  All arithmetic uses :class:`fractions.Fraction`.

Internally every operation works on the *cell decomposition* induced by a
sorted breakpoint list ``0 = p0 < p1 < ... < pm = 1``: the point cells
``{pk}`` and the open gap cells ``(pk, pk+1)``.  Any RatSet is a union of
cells, so membership of one sample per cell determines it exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

RatLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


class IntervalError(ValueError):
    pass


def rat(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise IntervalError(f"not a rational number: {x!r}") from exc


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if type(lo) is not Fraction or type(hi) is not Fraction:
            lo, hi = rat(lo), rat(hi)
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)
        # integer arithmetic throughout: Fraction comparisons dominate the kernel's profile
        ln, ld, hn, hd = lo.numerator, lo.denominator, hi.numerator, hi.denominator
        if not (ln >= 0 and hn <= hd and ln * hd <= hn * ld):
            raise IntervalError(f"interval endpoints must satisfy 0 <= lo <= hi <= 1: {lo}, {hi}")
        if ln == hn and ld == hd and not (self.lo_closed and self.hi_closed):
            raise IntervalError(f"empty interval at {lo}")
        key = (ln, ld, hn, hd, self.lo_closed, self.hi_closed)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not Interval:
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    @classmethod
    def point(cls, x: RatLike) -> "Interval":
        return cls(rat(x), rat(x), True, True)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def map_affine(self, scale: Fraction, shift: Fraction) -> "Interval":
        """Image under ``t -> scale*t + shift`` (``scale`` nonzero)."""
        a, b = scale * self.lo + shift, scale * self.hi + shift
        if scale > 0:
            return Interval(a, b, self.lo_closed, self.hi_closed)
        return Interval(b, a, self.hi_closed, self.lo_closed)

    def __str__(self) -> str:
        if self.degenerate:
            return "{" + _fmt_rat(self.lo) + "}"
        return (
            ("[" if self.lo_closed else "(")
            + _fmt_rat(self.lo)
            + ","
            + _fmt_rat(self.hi)
            + ("]" if self.hi_closed else ")")
        )


def _fmt_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _cells_to_components(points: Sequence[Fraction], point_in: Sequence[bool], gap_in: Sequence[bool]):
    # cells in order: point0, gap0, point1, gap1, ..., point_m
    comps: list[Interval] = []
    start = None  # (value, closed)
    m = len(points) - 1
    for k in range(m + 1):
        p = points[k]
        if point_in[k]:
            if start is None:
                start = (p, True)
        else:
            if start is not None:
                comps.append(Interval(start[0], p, start[1], False))
                start = None
        if k == m:
            if start is not None:
                comps.append(Interval(start[0], p, start[1], True))
            break
        if gap_in[k]:
            if start is None:
                start = (p, False)
        else:
            if start is not None:
                # run ended on the point cell p itself
                comps.append(Interval(start[0], p, start[1], True))
                start = None
    return tuple(comps)


class RatSet:
    """Canonical finite union of intervals in ``[0, 1]``.

    Two RatSets are equal iff they denote the same set.
    """

    __slots__ = ("components", "_hash")

    def __init__(self, intervals: Iterable[Interval] = ()):
        intervals = tuple(intervals)
        if all(isinstance(i, Interval) for i in intervals) and _is_canonical(intervals):
            self.components = intervals
        else:
            pts = _breakpoints(intervals)
            self.components = _from_membership(pts, lambda x: any(x in i for i in intervals)).components
        self._hash = hash(self.components)

    @classmethod
    def _raw(cls, comps: tuple[Interval, ...]) -> "RatSet":
        obj = cls.__new__(cls)
        obj.components = comps
        obj._hash = hash(comps)
        return obj

    @classmethod
    def empty(cls) -> "RatSet":
        return cls._raw(())

    @classmethod
    def unit(cls) -> "RatSet":
        return cls._raw((Interval(ZERO, ONE),))

    @classmethod
    def interval(cls, lo: RatLike, hi: RatLike, lo_closed=True, hi_closed=True) -> "RatSet":
        return cls((Interval(rat(lo), rat(hi), lo_closed, hi_closed),))

    def __eq__(self, other) -> bool:
        return isinstance(other, RatSet) and self.components == other.components

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.components)

    def __contains__(self, x: RatLike) -> bool:
        x = rat(x)
        return any(x in c for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __str__(self) -> str:
        if not self.components:
            return "∅"
        return " u ".join(str(c) for c in self.components)

    def __repr__(self) -> str:
        return f"RatSet({str(self)!r})"

    def endpoints(self) -> tuple[Fraction, ...]:
        return _breakpoints(self.components)

    def __or__(self, other: "RatSet") -> "RatSet":
        return union(self, other)

    def __and__(self, other: "RatSet") -> "RatSet":
        return intersect(self, other)

    def __le__(self, other: "RatSet") -> bool:
        return subset(self, other)


def _is_canonical(comps: tuple[Interval, ...]) -> bool:
    for a, b in zip(comps, comps[1:]):
        if a.hi > b.lo:
            return False
        if a.hi == b.lo and (a.hi_closed or b.lo_closed):
            return False
    return True


def _breakpoints(comps: Iterable[Interval]) -> tuple[Fraction, ...]:
    pts = {ZERO, ONE}
    for c in comps:
        pts.add(c.lo)
        pts.add(c.hi)
    return tuple(sorted(pts))


def _from_membership(points: Sequence[Fraction], member: Callable[[Fraction], bool]) -> RatSet:
    point_in = [member(p) for p in points]
    gap_in = [member((a + b) / 2) for a, b in zip(points, points[1:])]
    return RatSet._raw(_cells_to_components(points, point_in, gap_in))


def _cells(*sets: RatSet) -> tuple[Fraction, ...]:
    pts = {ZERO, ONE}
    for s in sets:
        for c in s.components:
            pts.add(c.lo)
            pts.add(c.hi)
    return tuple(sorted(pts))


def union(a: RatSet, b: RatSet) -> RatSet:
    return _from_membership(_cells(a, b), lambda x: x in a or x in b)


def intersect(a: RatSet, b: RatSet) -> RatSet:
    return _from_membership(_cells(a, b), lambda x: x in a and x in b)


def complement(a: RatSet) -> RatSet:
    return _from_membership(_cells(a), lambda x: x not in a)


def difference(a: RatSet, b: RatSet) -> RatSet:
    return _from_membership(_cells(a, b), lambda x: x in a and x not in b)


def subset(a: RatSet, b: RatSet) -> bool:
    return not difference(a, b)


def union_all(sets: Iterable[RatSet]) -> RatSet:
    sets = list(sets)
    if not sets:
        return RatSet.empty()
    return _from_membership(_cells(*sets), lambda x: any(x in s for s in sets))


@lru_cache(maxsize=65536)
def interior(a: RatSet) -> RatSet:
    pts = _cells(a)
    m = len(pts) - 1
    gap_in = [((p + q) / 2) in a for p, q in zip(pts, pts[1:])]
    point_in = []
    for k, p in enumerate(pts):
        ok = p in a
        if ok and k > 0:
            ok = gap_in[k - 1]
        if ok and k < m:
            ok = gap_in[k]
        point_in.append(ok)
    return RatSet._raw(_cells_to_components(pts, point_in, gap_in))


@lru_cache(maxsize=65536)
def topo_closure(a: RatSet) -> RatSet:
    pts = _cells(a)
    m = len(pts) - 1
    gap_in = [((p + q) / 2) in a for p, q in zip(pts, pts[1:])]
    point_in = []
    for k, p in enumerate(pts):
        ok = p in a or (k > 0 and gap_in[k - 1]) or (k < m and gap_in[k])
        point_in.append(ok)
    return RatSet._raw(_cells_to_components(pts, point_in, gap_in))


def is_open(a: RatSet) -> bool:
    return interior(a) == a


def is_closed(a: RatSet) -> bool:
    return topo_closure(a) == a


@lru_cache(maxsize=65536)
def is_semi_open(a: RatSet) -> bool:
    return subset(a, topo_closure(interior(a)))


@lru_cache(maxsize=65536)
def is_semi_closed(a: RatSet) -> bool:
    return subset(interior(topo_closure(a)), a)


_TOKEN = re.compile(r"\s*([\[\(])\s*([^,\s]+)\s*,\s*([^\]\)\s]+)\s*([\]\)])\s*$")
_POINT = re.compile(r"\s*\{\s*([^}\s]+)\s*\}\s*$")


def parse_interval(text: str) -> Interval:
    m = _TOKEN.match(text)
    if m:
        return Interval(rat(m.group(2)), rat(m.group(3)), m.group(1) == "[", m.group(4) == "]")
    m = _POINT.match(text)
    if m:
        return Interval.point(m.group(1))
    raise IntervalError(f"cannot parse interval {text!r}")


def parse_ratset(text: str) -> RatSet:
    """Parse notation like ``"[0,1/2) u {3/4} u (3/4,1]"``; ``∅``/``empty`` is the empty set."""
    text = text.strip()
    if text in ("", "∅", "empty", "{}"):
        return RatSet.empty()
    parts = re.split(r"(?<=[\]\)}])\s*[uU∪]\s*(?=[\[\({])", text)
    return RatSet(parse_interval(p) for p in parts)


def S(text: str) -> RatSet:
    return parse_ratset(text)
