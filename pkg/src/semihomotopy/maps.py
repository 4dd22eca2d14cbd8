"""Maps between finite spaces and the so-1/so-2/so-3/continuous hierarchy."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .finite_space import FiniteSpace, SpaceError, all_spaces

CLASSES = ("continuous", "so1", "so2", "so3")

# Claim labels embedded in reports, one per class.
CLAIMS = {
    "continuous": "preimage of every open set is open",
    "so1": "preimage of every open set is semi-open",
    "so2": "preimage of every semi-open set is semi-open",
    "so3": "preimage of every semi-open set is open",
}


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class SpaceMap:
    domain: FiniteSpace
    codomain: FiniteSpace
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if len(images) != self.domain.n:
            raise MapError(f"map needs {self.domain.n} images, got {len(images)}")
        for i in images:
            if not 0 <= i < self.codomain.n:
                raise MapError(f"image index {i} outside codomain of size {self.codomain.n}")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_names(cls, domain: FiniteSpace, codomain: FiniteSpace, images: dict) -> "SpaceMap":
        missing = set(domain.points) - set(images)
        if missing:
            raise MapError(f"map is not total; no image for {sorted(missing)}")
        try:
            return cls(domain, codomain, tuple(codomain.index(images[p]) for p in domain.points))
        except SpaceError as exc:
            raise MapError(str(exc)) from None

    @classmethod
    def identity(cls, space: FiniteSpace) -> "SpaceMap":
        return cls(space, space, tuple(range(space.n)))

    @classmethod
    def constant(cls, domain: FiniteSpace, codomain: FiniteSpace, value: int) -> "SpaceMap":
        return cls(domain, codomain, (value,) * domain.n)

    def __call__(self, p: int) -> int:
        return self.images[p]

    def preimage(self, mask: int) -> int:
        out = 0
        for x, y in enumerate(self.images):
            if mask >> y & 1:
                out |= 1 << x
        return out

    def image(self, mask: int) -> int:
        out = 0
        for x, y in enumerate(self.images):
            if mask >> x & 1:
                out |= 1 << y
        return out

    @property
    def is_constant(self) -> bool:
        return len(set(self.images)) <= 1

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "images": {p: self.codomain.points[y] for p, y in zip(self.domain.points, self.images)},
        }


@dataclass(frozen=True)
class Violation:
    test_set: int
    preimage: int


@dataclass
class ContinuityReport:
    continuous: bool
    so1: bool
    so2: bool
    so3: bool
    witnesses: dict = field(default_factory=dict)

    def flags(self) -> tuple[bool, bool, bool, bool]:
        return (self.continuous, self.so1, self.so2, self.so3)

    def to_json(self, f: SpaceMap) -> dict:
        out = {name: getattr(self, name) for name in CLASSES}
        out["claims"] = {name: CLAIMS[name] for name in CLASSES}
        out["witnesses"] = {
            name: {"set": f.codomain.names(v.test_set), "preimage": f.domain.names(v.preimage)}
            for name, v in sorted(self.witnesses.items())
        }
        return out


def _first_failure(f: SpaceMap, tests: Sequence[int], ok) -> Optional[Violation]:
    for b in tests:
        pre = f.preimage(b)
        if not ok(pre):
            return Violation(b, pre)
    return None


def classify(f: SpaceMap) -> ContinuityReport:
    """Decide all four classes through preimages of (semi-)open codomain sets.

    Each failing class carries the first violating codomain set in canonical
    order together with its preimage.
    """
    X, Y = f.domain, f.codomain
    checks = {
        "continuous": (Y.opens, X.open_set.__contains__),
        "so1": (Y.opens, X.semi_open_set.__contains__),
        "so2": (Y.semi_open_family, X.semi_open_set.__contains__),
        "so3": (Y.semi_open_family, X.open_set.__contains__),
    }
    witnesses = {}
    flags = {}
    for name, (tests, ok) in checks.items():
        v = _first_failure(f, tests, ok)
        flags[name] = v is None
        if v is not None:
            witnesses[name] = v
    return ContinuityReport(witnesses=witnesses, **flags)


def classify_via_closed(f: SpaceMap) -> ContinuityReport:
    """Same verdicts as :func:`classify`, computed from closed and semi-closed sets."""
    X, Y = f.domain, f.codomain
    checks = {
        "continuous": (Y.closed_sets, X.is_closed),
        "so1": (Y.closed_sets, X.semi_closed_set.__contains__),
        "so2": (Y.semi_closed_family, X.semi_closed_set.__contains__),
        "so3": (Y.semi_closed_family, X.is_closed),
    }
    witnesses = {}
    flags = {}
    for name, (tests, ok) in checks.items():
        v = _first_failure(f, tests, ok)
        flags[name] = v is None
        if v is not None:
            witnesses[name] = v
    return ContinuityReport(witnesses=witnesses, **flags)


@dataclass
class PointReport:
    point: int
    so1: bool
    so2: bool
    so3: bool
    witnesses: dict = field(default_factory=dict)


def classify_at(f: SpaceMap, p: int) -> PointReport:
    """Pointwise so-i continuity by direct neighbourhood search.

    For each (semi-)open codomain set containing f(p) look for a
    (semi-)open domain set containing p whose image lies inside it.  A
    failing property records the codomain set that has no such preimage
    neighbourhood.
    """
    X, Y = f.domain, f.codomain
    if not 0 <= p < X.n:
        raise MapError(f"point index {p} out of range")
    fp = f.images[p]

    def search(targets, neighbourhoods):
        for v in targets:
            if not v >> fp & 1:
                continue
            if not any(a >> p & 1 and f.image(a) & ~v == 0 for a in neighbourhoods):
                return v
        return None

    found = {
        "so1": search(Y.opens, X.semi_open_family),
        "so2": search(Y.semi_open_family, X.semi_open_family),
        "so3": search(Y.semi_open_family, X.opens),
    }
    return PointReport(
        point=p,
        witnesses={k: v for k, v in found.items() if v is not None},
        **{k: v is None for k, v in found.items()},
    )


def compose(f: SpaceMap, g: SpaceMap) -> SpaceMap:
    """The composite g∘f (apply f first)."""
    if f.codomain != g.domain:
        raise MapError("cannot compose: codomain of the first map is not the domain of the second")
    return SpaceMap(f.domain, g.codomain, tuple(g.images[y] for y in f.images))


# ---------------------------------------------------------------------------
# Exhaustive search


@lru_cache(maxsize=None)
def all_maps(nx: int, ny: int) -> np.ndarray:
    """All maps from an nx-set to an ny-set as rows, in lexicographic order."""
    if nx == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(ny), repeat=nx)), dtype=np.int64).reshape(-1, nx)


def _member_table(n: int, family) -> np.ndarray:
    t = np.zeros(1 << n, dtype=bool)
    t[list(family)] = True
    return t


@lru_cache(maxsize=None)
def _tables(space: FiniteSpace) -> dict:
    return {
        "open": _member_table(space.n, space.opens),
        "semi_open": _member_table(space.n, space.semi_open_family),
    }


@lru_cache(maxsize=4096)
def class_table(X: FiniteSpace, Y: FiniteSpace) -> dict:
    """Boolean class membership of every map X → Y, indexed like :func:`all_maps`."""
    M = all_maps(X.n, Y.n)
    weights = (1 << np.arange(X.n, dtype=np.int64))

    def preimages(b: int) -> np.ndarray:
        hit = (b >> M) & 1
        return hit @ weights

    tx = _tables(X)
    open_pre = [preimages(v) for v in Y.opens]
    semi_pre = [preimages(b) for b in Y.semi_open_family]
    count = M.shape[0]

    def all_in(pres, table):
        out = np.ones(count, dtype=bool)
        for p in pres:
            out &= table[p]
        return out

    const = np.all(M == M[:, :1], axis=1)
    return {
        "continuous": all_in(open_pre, tx["open"]),
        "so1": all_in(open_pre, tx["semi_open"]),
        "so2": all_in(semi_pre, tx["semi_open"]),
        "so3": all_in(semi_pre, tx["open"]),
        "constant": const,
    }


def map_index(images: Sequence[int], ny: int) -> int:
    idx = 0
    for y in images:
        idx = idx * ny + y
    return idx


QUERY_CLASSES = ("constant",) + CLASSES


def parse_query(query: str) -> tuple:
    q = query.strip().rstrip("?").lower()
    parts = q.split("-")
    if len(parts) == 3 and parts[1:] == ["compose", "closed"] and parts[0] in CLASSES:
        return ("compose", parts[0])
    if len(parts) == 3 and parts[1] == "implies" and parts[0] in QUERY_CLASSES and parts[2] in QUERY_CLASSES:
        return ("implies", parts[0], parts[2])
    if len(parts) == 2 and parts[0] == "identity" and parts[1] in CLASSES:
        return ("identity", parts[1])
    raise MapError(
        f"unsupported query {query!r}; use <class>-compose-closed, <class>-implies-<class> or identity-<class>"
    )


@dataclass
class SearchResult:
    query: str
    found: bool
    witness: Optional[dict]
    checked: int
    max_points: int

    def to_json(self) -> dict:
        return {
            "query": self.query,
            "found": self.found,
            "max_points": self.max_points,
            "checked": self.checked,
            "witness": self.witness,
        }


def _chunks(n: int, jobs: int) -> list[range]:
    jobs = max(1, min(jobs, n))
    step = -(-n // jobs)
    return [range(i, min(n, i + step)) for i in range(0, n, step)]


def _run(outer: int, worker, jobs: int):
    # Each worker returns the first hit within its slice of the outer index
    # (or None) plus a count; the least hit over slices is the global minimum.
    if jobs <= 1:
        results = [worker(range(outer))]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, _chunks(outer, jobs)))
    # Slices are ordered, so the first slice with a hit holds the global
    # minimum and every earlier slice ran to completion: the count up to it
    # does not depend on how the range was split.
    checked = 0
    for hit, count in results:
        checked += count
        if hit is not None:
            return hit, checked
    return None, checked


def search_counterexample(query: str, max_points: int = 3, jobs: int = 1) -> SearchResult:
    """Exhaustive search for the canonically first counterexample to ``query``.

    Spaces are taken in the order of :func:`all_spaces` and maps in
    lexicographic image order, so the reported witness does not depend on
    ``jobs``.
    """
    if not 1 <= max_points <= 4:
        raise MapError("max_points must be between 1 and 4")
    kind = parse_query(query)
    spaces = all_spaces(max_points)
    n = len(spaces)

    if kind[0] == "identity":
        cls = kind[1]

        def worker(rng):
            for i in rng:
                X = spaces[i]
                idx = map_index(range(X.n), X.n)
                if not class_table(X, X)[cls][idx]:
                    return ((i,), {"map": SpaceMap.identity(X).to_json()}), i - rng.start + 1
            return None, len(rng)

    elif kind[0] == "implies":
        a, b = kind[1], kind[2]

        def worker(rng):
            checked = 0
            for i in rng:
                for j in range(n):
                    X, Y = spaces[i], spaces[j]
                    t = class_table(X, Y)
                    bad = t[a] & ~t[b]
                    checked += bad.size
                    if bad.any():
                        k = int(np.argmax(bad))
                        f = SpaceMap(X, Y, tuple(all_maps(X.n, Y.n)[k]))
                        return ((i, j, k), {"map": f.to_json()}), checked
            return None, checked

    else:
        cls = kind[1]

        def worker(rng):
            checked = 0
            for i in rng:
                X = spaces[i]
                for j in range(n):
                    Y = spaces[j]
                    F = all_maps(X.n, Y.n)[class_table(X, Y)[cls]]
                    if not len(F):
                        continue
                    for k in range(n):
                        Z = spaces[k]
                        G = all_maps(Y.n, Z.n)[class_table(Y, Z)[cls]]
                        if not len(G):
                            continue
                        comp = G[:, F]  # (|G|, |F|, nX)
                        w = Z.n ** np.arange(X.n - 1, -1, -1, dtype=np.int64)
                        ok = class_table(X, Z)[cls][comp @ w]  # (|G|, |F|)
                        checked += ok.size
                        bad = ~ok.T  # rows f, columns g: lexicographic in (f, g)
                        if bad.any():
                            fi, gi = np.unravel_index(int(np.argmax(bad)), bad.shape)
                            f = SpaceMap(X, Y, tuple(F[fi]))
                            g = SpaceMap(Y, Z, tuple(G[gi]))
                            return ((i, j, k, tuple(F[fi]), tuple(G[gi])), {
                                "f": f.to_json(),
                                "g": g.to_json(),
                                "composite": compose(f, g).to_json(),
                            }), checked
            return None, checked

    hit, checked = _run(n, worker, jobs)
    return SearchResult(query, hit is not None, hit[1] if hit else None, checked, max_points)
