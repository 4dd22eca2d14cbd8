"""Step paths I → X into finite spaces and piecewise-linear reparameterizations."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .finite_space import FiniteSpace, SpaceError
from .interval_sets import (
    ONE,
    ZERO,
    Interval,
    IntervalError,
    RatSet,
    is_open,
    is_semi_open,
    parse_interval,
    rat,
    union_all,
)

HALF = Fraction(1, 2)


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class StepPath:
    """A piecewise-constant map from [0, 1] into a finite space.

    ``pieces`` is a tuple of ``(Interval, point index)`` whose intervals
    partition [0, 1] from left to right.  Adjacent pieces with equal values
    are merged on construction, so equality of StepPaths is equality of
    functions.
    """

    space: FiniteSpace
    pieces: tuple[tuple[Interval, int], ...]

    def __post_init__(self):
        pieces = tuple((iv, int(v)) for iv, v in self.pieces)
        if not pieces:
            raise PathError("a step path needs at least one piece")
        for iv, v in pieces:
            if not 0 <= v < self.space.n:
                raise PathError(f"value index {v} outside the space")
        first, last = pieces[0][0], pieces[-1][0]
        if first._key[0] != 0 or not first.lo_closed:
            raise PathError(f"pieces must start with a closed endpoint at 0, got {first}")
        if last._key[2] != last._key[3] or not last.hi_closed:
            raise PathError(f"pieces must end with a closed endpoint at 1, got {last}")
        for (a, _), (b, _) in zip(pieces, pieces[1:]):
            if a._key[2:4] != b._key[0:2] or a.hi_closed == b.lo_closed:
                raise PathError(f"pieces {a} and {b} do not meet exactly once")
        merged: list[tuple[Interval, int]] = []
        for iv, v in pieces:
            if merged and merged[-1][1] == v:
                prev = merged[-1][0]
                merged[-1] = (Interval(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed), v)
            else:
                merged.append((iv, v))
        object.__setattr__(self, "pieces", tuple(merged))
        object.__setattr__(self, "_hash", hash((self.space, self.pieces)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not StepPath:
            return NotImplemented
        return self._hash == other._hash and self.pieces == other.pieces and self.space == other.space

    @classmethod
    def parse(cls, space: FiniteSpace, pieces: Iterable[tuple[str, str]]) -> "StepPath":
        """Build from ``(interval text, point name)`` pairs."""
        try:
            return cls(space, tuple((parse_interval(i), space.index(v)) for i, v in pieces))
        except (IntervalError, SpaceError) as exc:
            raise PathError(str(exc)) from None

    @classmethod
    def constant(cls, space: FiniteSpace, value: int) -> "StepPath":
        return cls(space, ((Interval(ZERO, ONE), value),))

    def __call__(self, t) -> int:
        t = rat(t)
        for iv, v in self.pieces:
            if t in iv:
                return v
        raise PathError(f"parameter {t} outside [0, 1]")

    @property
    def start(self) -> int:
        return self.pieces[0][1]

    @property
    def end(self) -> int:
        return self.pieces[-1][1]

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    def breakpoints(self) -> tuple[Fraction, ...]:
        pts = {ZERO, ONE}
        for iv, _ in self.pieces:
            pts.add(iv.lo)
            pts.add(iv.hi)
        return tuple(sorted(pts))

    def preimage(self, mask: int) -> RatSet:
        return RatSet(iv for iv, v in self.pieces if mask >> v & 1)

    def map_values(self, images: Sequence[int], codomain: FiniteSpace) -> "StepPath":
        return StepPath(codomain, tuple((iv, images[v]) for iv, v in self.pieces))

    def __str__(self) -> str:
        return ", ".join(f"{iv}↦{self.space.points[v]}" for iv, v in self.pieces)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "pieces": [{"interval": str(iv), "value": self.space.points[v]} for iv, v in self.pieces],
        }


# ---------------------------------------------------------------------------
# so-i continuity of step paths


@dataclass(frozen=True)
class PathVerdict:
    holds: bool
    test_set: Optional[int] = None
    preimage: Optional[RatSet] = None

    def __iter__(self):
        yield self.holds
        yield (self.test_set, self.preimage) if not self.holds else None


@lru_cache(maxsize=65536)
def is_so_i_path(path: StepPath, i: int) -> PathVerdict:
    """Decide so-i continuity of a step path through preimages of test sets.

    i=1 tests preimages of open sets for semi-openness, i=2 preimages of
    semi-open sets for semi-openness, i=3 preimages of semi-open sets for
    openness.  Unpacks as ``(holds, witness)``.
    """
    space = path.space
    if i == 1:
        tests, ok = space.opens, is_semi_open
    elif i == 2:
        tests, ok = space.semi_open_family, is_semi_open
    elif i == 3:
        tests, ok = space.semi_open_family, is_open
    else:
        raise PathError(f"mode must be 1, 2 or 3, got {i}")
    used = 0
    for _, v in path.pieces:
        used |= 1 << v
    test = _open_pieces if i == 3 else _semi_open_pieces
    seen: set[int] = set()
    for b in tests:
        key = b & used
        if key in seen:
            continue
        seen.add(key)
        if not test(path.pieces, b):
            pre = path.preimage(b)
            assert not ok(pre)
            return PathVerdict(False, b, pre)
    return PathVerdict(True)


# Preimages of step paths are unions of pieces, so openness and
# semi-openness reduce to conditions on neighbouring pieces.


def _semi_open_pieces(pieces, b: int) -> bool:
    # only a degenerate piece can miss cl(int); it needs a neighbour inside
    for k, (iv, v) in enumerate(pieces):
        if iv.degenerate and b >> v & 1:
            left = k > 0 and b >> pieces[k - 1][1] & 1
            right = k + 1 < len(pieces) and b >> pieces[k + 1][1] & 1
            if not (left or right):
                return False
    return True


def _open_pieces(pieces, b: int) -> bool:
    # a closed inner end of a member piece needs the piece across it inside
    last = len(pieces) - 1
    for k, (iv, v) in enumerate(pieces):
        if not b >> v & 1:
            continue
        if iv.lo_closed and k > 0 and not b >> pieces[k - 1][1] & 1:
            return False
        if iv.hi_closed and k < last and not b >> pieces[k + 1][1] & 1:
            return False
    return True


# ---------------------------------------------------------------------------
# composition, inversion


@lru_cache(maxsize=65536)
def compose_paths(alpha: StepPath, beta: StepPath) -> StepPath:
    """α∗β: α on [0, 1/2] at double speed, then β on [1/2, 1]; 1/2 ↦ α(1)."""
    if alpha.space != beta.space:
        raise PathError("paths live in different spaces")
    if alpha.end != beta.start:
        raise PathError(
            f"cannot compose: alpha(1) = {alpha.space.points[alpha.end]} "
            f"but beta(0) = {beta.space.points[beta.start]}"
        )
    pieces = [(iv.map_affine(HALF, ZERO), v) for iv, v in alpha.pieces]
    for k, (iv, v) in enumerate(beta.pieces):
        iv2 = iv.map_affine(HALF, HALF)
        if k == 0:
            if iv2.degenerate:
                continue
            iv2 = Interval(iv2.lo, iv2.hi, False, iv2.hi_closed)
        pieces.append((iv2, v))
    return StepPath(alpha.space, tuple(pieces))


@lru_cache(maxsize=65536)
def inverse_path(alpha: StepPath) -> StepPath:
    return StepPath(
        alpha.space,
        tuple((iv.map_affine(-ONE, ONE), v) for iv, v in reversed(alpha.pieces)),
    )


def two_piece_path(space: FiniteSpace, x: int, y: int) -> StepPath:
    if x == y:
        return StepPath.constant(space, x)
    return StepPath(space, ((Interval(ZERO, HALF, True, False), x), (Interval(HALF, ONE), y)))


# ---------------------------------------------------------------------------
# piecewise-linear self-maps of [0, 1]


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear map on [0, 1] given by its nodes ``(t, value)``."""

    nodes: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        nodes = tuple((rat(t), rat(v)) for t, v in self.nodes)
        if len(nodes) < 2:
            raise PathError("a PL map needs at least two nodes")
        if nodes[0][0] != ZERO or nodes[-1][0] != ONE:
            raise PathError("PL map nodes must run from t=0 to t=1")
        for (t0, _), (t1, _) in zip(nodes, nodes[1:]):
            if t1 <= t0:
                raise PathError("PL map nodes must be strictly increasing in t")
        for _, v in nodes:
            if not ZERO <= v <= ONE:
                raise PathError(f"PL map value {v} outside [0, 1]")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def of(cls, *nodes) -> "PLMap":
        return cls(tuple(nodes))

    @classmethod
    def identity(cls) -> "PLMap":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    @classmethod
    def constant(cls, v) -> "PLMap":
        return cls(((ZERO, rat(v)), (ONE, rat(v))))

    def __call__(self, t) -> Fraction:
        if type(t) is not Fraction:
            t = rat(t)
        if not ZERO <= t <= ONE:
            raise PathError(f"parameter {t} outside [0, 1]")
        for (t0, v0), (t1, v1) in zip(self.nodes, self.nodes[1:]):
            if t <= t1:
                if v0 == v1:
                    return v0
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        raise AssertionError("unreachable")

    def segments(self):
        return zip(self.nodes, self.nodes[1:])

    @property
    def is_nondecreasing(self) -> bool:
        return all(v1 >= v0 for (_, v0), (_, v1) in self.segments())

    @property
    def fixes_endpoints(self) -> bool:
        return self.nodes[0][1] == ZERO and self.nodes[-1][1] == ONE

    @property
    def is_constant(self) -> bool:
        return len({v for _, v in self.nodes}) == 1

    def preimage(self, s: RatSet) -> RatSet:
        parts: list[RatSet] = []
        for (t0, v0), (t1, v1) in self.segments():
            if v0 == v1:
                if v0 in s:
                    parts.append(RatSet((Interval(t0, t1),)))
                continue
            lo, hi = min(v0, v1), max(v0, v1)
            window = s & RatSet((Interval(lo, hi),))
            scale = (t1 - t0) / (v1 - v0)
            shift = t0 - v0 * scale
            parts.append(RatSet(c.map_affine(scale, shift) for c in window))
        return union_all(parts)

    @lru_cache(maxsize=65536)
    def fiber(self, c: Fraction) -> tuple[Fraction, Fraction]:
        """Least and greatest t with ρ(t) = c, for nondecreasing ρ covering c."""
        lo = hi = None
        for (t0, v0), (t1, v1) in self.segments():
            if lo is None and v1 >= c:
                lo = t0 if v0 >= c else t0 + (c - v0) * (t1 - t0) / (v1 - v0)
            if v0 <= c:
                hi = t1 if v1 <= c else t0 + (c - v0) * (t1 - t0) / (v1 - v0)
        if lo is None or hi is None:
            raise PathError(f"{c} is not a value of {self}")
        return lo, hi

    def reflect(self) -> "PLMap":
        """t ↦ 1 − ρ(1 − t)."""
        return PLMap(tuple((ONE - t, ONE - v) for t, v in reversed(self.nodes)))

    def __str__(self) -> str:
        return "PL[" + ", ".join(f"({t},{v})" for t, v in self.nodes) + "]"

    def to_json(self) -> list:
        return [[str(t), str(v)] for t, v in self.nodes]


# The reparameterizations behind associativity and the unit laws.
RHO_ASSOC = PLMap.of((0, 0), (Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 2), Fraction(3, 4)), (1, 1))
RHO_UNIT_LEFT = PLMap.of((0, 0), (Fraction(1, 2), 0), (1, 1))
RHO_UNIT_RIGHT = PLMap.of((0, 0), (Fraction(1, 2), 1), (1, 1))


@lru_cache(maxsize=65536)
def reparameterize(alpha: StepPath, rho: PLMap) -> StepPath:
    """The exact pullback α∘ρ for a nondecreasing ρ with ρ(0)=0, ρ(1)=1."""
    if not rho.fixes_endpoints:
        raise PathError("reparameterization must satisfy rho(0) = 0 and rho(1) = 1")
    if not rho.is_nondecreasing:
        raise PathError("reparameterization must be nondecreasing")
    # A nondecreasing surjection pulls each piece back to one interval whose
    # ends are read off the fibers over the piece's ends.
    pieces = []
    for iv, v in alpha.pieces:
        l_lo, r_lo = rho.fiber(iv.lo)
        l_hi, r_hi = rho.fiber(iv.hi)
        lo = l_lo if iv.lo_closed else r_lo
        hi = r_hi if iv.hi_closed else l_hi
        pieces.append((Interval(lo, hi, iv.lo_closed, iv.hi_closed), v))
    return StepPath(alpha.space, tuple(pieces))


@dataclass(frozen=True)
class PLVerdict:
    status: str  # "holds" | "refuted" | "sufficient-condition-unmet"
    witness: Optional[RatSet] = None
    preimage: Optional[RatSet] = None
    exact: bool = True
    reason: str = ""


def pl_continuity_class(rho: PLMap, i: int) -> PLVerdict:
    """so-i continuity of a PL self-map of [0, 1].

    i=1 always holds: ρ is continuous, so preimages of open sets are open.

    i=2 is certified by the criterion "nondecreasing with ρ(0)=0, ρ(1)=1".
    Sketch: let B be semi-open and ρ(t) ∈ B.  If ρ is constant on a
    nondegenerate [p, q] ∋ t, then (p, q) ⊆ int ρ⁻¹(B) and t lies in its
    closure.  Otherwise ρ⁻¹(ρ(t)) = {t} and ρ maps every neighbourhood of t
    onto a relative neighbourhood of ρ(t); that neighbourhood meets int B
    in a nonempty open set whose preimage is open, nonempty, inside ρ⁻¹(B)
    and arbitrarily close to t.  Hence ρ⁻¹(B) ⊆ cl int ρ⁻¹(B).

    i=3 is only refuted: half-open test intervals with endpoints on the
    quarter grid merged with ρ's node values are tried in order, and the
    first one whose preimage is not open is returned.
    """
    if i == 1:
        return PLVerdict("holds", reason="continuous maps are so-1")
    if i == 2:
        if rho.is_nondecreasing and rho.fixes_endpoints:
            return PLVerdict("holds", reason="nondecreasing surjection of [0,1]")
        return PLVerdict("sufficient-condition-unmet", exact=False,
                         reason="not a nondecreasing surjection; so-2 undecided")
    if i != 3:
        raise PathError(f"mode must be 1, 2 or 3, got {i}")
    if rho.is_constant:
        return PLVerdict("holds", reason="constant map")
    grid = sorted({Fraction(k, 4) for k in range(5)} | {v for _, v in rho.nodes})
    for closed_left in (True, False):
        for ai, a in enumerate(grid):
            for b in grid[ai + 1:]:
                ts = RatSet((Interval(a, b, closed_left, not closed_left),))
                pre = rho.preimage(ts)
                if not is_open(pre):
                    return PLVerdict("refuted", ts, pre, reason="semi-open interval with non-open preimage")
    return PLVerdict("holds", exact=False, reason="no refutation among generated test intervals")


def canonical_signature(alpha: StepPath) -> tuple[tuple[int, bool], ...]:
    """Value sequence with degenerate-piece flags; invariant under monotone PL reparameterization."""
    return tuple((v, iv.degenerate) for iv, v in alpha.pieces)


def _shape(alpha: StepPath):
    return tuple((v, iv.degenerate, iv.lo_closed, iv.hi_closed) for iv, v in alpha.pieces)


def find_reparameterization(alpha: StepPath, beta: StepPath) -> Optional[PLMap]:
    """A strictly increasing PL ρ with β∘ρ = α, if the piece structures agree."""
    if alpha.space != beta.space or _shape(alpha) != _shape(beta):
        return None
    a_pts, b_pts = alpha.breakpoints(), beta.breakpoints()
    if len(a_pts) != len(b_pts):
        return None
    rho = PLMap(tuple(zip(a_pts, b_pts)))
    return rho if reparameterize(beta, rho) == alpha else None


# ---------------------------------------------------------------------------
# connectivity


def so3_graph(space: FiniteSpace) -> dict[tuple[int, int], int]:
    """Edges {u, v} (u < v) joined through some w with u, v ∈ N(w); value is the least such w."""
    edges: dict[tuple[int, int], int] = {}
    for w in range(space.n):
        core = [u for u in range(space.n) if space.semi_open_core(w) >> u & 1]
        for ai, u in enumerate(core):
            for v in core[ai + 1:]:
                edges.setdefault((u, v), w)
    return edges


def _walk_path(space: FiniteSpace, walk: list[int], via: list[int]) -> StepPath:
    k = len(walk) - 1
    if k == 0:
        return StepPath.constant(space, walk[0])
    cuts = [Fraction(j, k + 1) for j in range(1, k + 1)]
    pieces = [(Interval(ZERO, cuts[0], True, False), walk[0])]
    for j in range(k):
        pieces.append((Interval.point(cuts[j]), via[j]))
        hi = cuts[j + 1] if j + 1 < k else ONE
        pieces.append((Interval(cuts[j], hi, False, j + 1 == k), walk[j + 1]))
    return StepPath(space, tuple(pieces))


def path_connectivity(space: FiniteSpace, x: int, y: int, i: int) -> tuple[bool, Optional[StepPath]]:
    """Decide whether an so-i step path joins x to y; return a witness path.

    For i ∈ {1, 2} the half-open two-piece path always works.  For i = 3 a
    step path is so-3 iff at each breakpoint with value w both neighbouring
    values lie in the semi-open core N(w), so reachability in
    :func:`so3_graph` decides the question.
    """
    for p in (x, y):
        if not 0 <= p < space.n:
            raise PathError(f"point index {p} out of range")
    if i in (1, 2):
        return True, two_piece_path(space, x, y)
    if i != 3:
        raise PathError(f"mode must be 1, 2 or 3, got {i}")
    edges = so3_graph(space)
    adj: dict[int, list[tuple[int, int]]] = {u: [] for u in range(space.n)}
    for (u, v), w in sorted(edges.items()):
        adj[u].append((v, w))
        adj[v].append((u, w))
    prev: dict[int, tuple[int, int]] = {}
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for v, w in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                prev[v] = (u, w)
                queue.append(v)
    if y not in seen:
        return False, None
    walk, via = [y], []
    while walk[-1] != x:
        u, w = prev[walk[-1]]
        walk.append(u)
        via.append(w)
    walk.reverse()
    via.reverse()
    return True, _walk_path(space, walk, via)
