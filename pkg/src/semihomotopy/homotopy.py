"""Certificates for so-i homotopy of step paths, and slice-wise homotopy checks.

A certificate is a tree of rule applications.  Checking it recomputes the
judgment ``lhs ≃_i rhs`` bottom-up and discharges every decidable side
condition of each rule; the existence of the connecting homotopy itself is
taken from the rule.  Failures raise :class:`CertificateError`, which names
the node, the rule and the violated hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Union

from .finite_space import FiniteSpace
from .interval_sets import ONE, ZERO, Interval
from .maps import MapError, SpaceMap, classify, compose
from .paths import (
    RHO_ASSOC,
    RHO_UNIT_LEFT,
    RHO_UNIT_RIGHT,
    PathError,
    PLMap,
    StepPath,
    compose_paths,
    inverse_path,
    is_so_i_path,
    pl_continuity_class,
    reparameterize,
)

# Hypotheses a rule can fail on; CertificateError.hypothesis is one of the keys.
HYPOTHESES = {
    "so-i-path": "every path involved is so-i-continuous",
    "same-space": "all paths live in one space",
    "composable": "alpha(1) = beta(0) for each composed pair",
    "rel-endpoints": "lhs and rhs share both endpoints",
    "trans-middle": "transitivity middle mismatch: first.rhs = second.lhs",
    "paste-endpoints": "alpha(1) = alpha'(1) = beta(0) = beta'(0)",
    "rho-endpoints": "rho(0) = 0 and rho(1) = 1",
    "rho-monotone": "rho is nondecreasing",
    "rho-so-i": "the reparameterization rho is so-i-continuous",
    "reparam-identity": "the reparameterized path equals the stated composite",
    "cancel-slices": "every slice of the cancellation homotopy is so-i-continuous",
    "mode": "mode is 1, 2 or 3",
}


class CertificateError(ValueError):
    def __init__(self, node: str, rule: str, hypothesis: str, detail: str = ""):
        self.node = node
        self.rule = rule
        self.hypothesis = hypothesis
        self.detail = detail
        msg = f"{node} [{rule}] violates '{HYPOTHESES[hypothesis]}'"
        super().__init__(msg + (f": {detail}" if detail else ""))


# ---------------------------------------------------------------------------
# certificate trees


@dataclass(frozen=True)
class Refl:
    path: StepPath


@dataclass(frozen=True)
class Sym:
    child: "Node"


@dataclass(frozen=True)
class Trans:
    first: "Node"
    second: "Node"


@dataclass(frozen=True)
class Reparam:
    path: StepPath
    rho: PLMap


@dataclass(frozen=True)
class Paste:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class UnitLeft:
    path: StepPath


@dataclass(frozen=True)
class UnitRight:
    path: StepPath


@dataclass(frozen=True)
class Assoc:
    alpha: StepPath
    beta: StepPath
    gamma: StepPath


@dataclass(frozen=True)
class InvCancelLeft:
    path: StepPath


@dataclass(frozen=True)
class InvCancelRight:
    path: StepPath


Node = Union[Refl, Sym, Trans, Reparam, Paste, UnitLeft, UnitRight, Assoc, InvCancelLeft, InvCancelRight]

RULE_NAMES = {
    Refl: "reflexivity",
    Sym: "symmetry",
    Trans: "transitivity",
    Reparam: "reparameterization",
    Paste: "paste",
    UnitLeft: "left unit",
    UnitRight: "right unit",
    Assoc: "associativity",
    InvCancelLeft: "inverse cancellation (left)",
    InvCancelRight: "inverse cancellation (right)",
}


@dataclass(frozen=True)
class Certificate:
    root: Node
    mode: int = 1
    rel: bool = True


@dataclass(frozen=True)
class Judgment:
    lhs: StepPath
    rhs: StepPath
    mode: int
    rel: bool

    def flipped(self) -> "Judgment":
        return Judgment(self.rhs, self.lhs, self.mode, self.rel)


def trans_chain(nodes: list) -> Node:
    """Left-nested Trans over a nonempty list of nodes."""
    out = nodes[0]
    for n in nodes[1:]:
        out = Trans(out, n)
    return out


class _Checker:
    def __init__(self, mode: int, rel: bool):
        if mode not in (1, 2, 3):
            raise CertificateError("root", "certificate", "mode", f"got {mode}")
        self.mode = mode
        self.rel = rel
        self.paths: list[StepPath] = []

    def require_path(self, where: str, rule: str, path: StepPath):
        self.paths.append(path)
        verdict = is_so_i_path(path, self.mode)
        if not verdict.holds:
            raise CertificateError(
                where, rule, "so-i-path",
                f"path {path} fails so-{self.mode}: preimage of {path.space.fmt(verdict.test_set)} "
                f"is {verdict.preimage}",
            )

    def require_composable(self, where: str, rule: str, a: StepPath, b: StepPath):
        if a.space != b.space:
            raise CertificateError(where, rule, "same-space")
        if a.end != b.start:
            raise CertificateError(
                where, rule, "composable",
                f"{a.space.points[a.end]} != {b.space.points[b.start]}",
            )

    def require_rho(self, where: str, rule: str, rho: PLMap):
        if not rho.fixes_endpoints:
            raise CertificateError(where, rule, "rho-endpoints", f"rho = {rho}")
        if not rho.is_nondecreasing:
            raise CertificateError(where, rule, "rho-monotone", f"rho = {rho}")
        verdict = pl_continuity_class(rho, self.mode)
        if verdict.status != "holds":
            detail = f"rho = {rho}: {verdict.status}"
            if verdict.witness is not None:
                detail += f"; {verdict.witness} is semi-open but its preimage {verdict.preimage} is not open"
            raise CertificateError(where, rule, "rho-so-i", detail)

    def check_reparam_obligation(self, where: str, rule: str, path: StepPath, rho: PLMap, expected: StepPath):
        self.require_rho(where, rule, rho)
        self.require_path(where, rule, path)
        got = reparameterize(path, rho)
        self.require_path(where, rule, got)
        if got != expected:
            raise CertificateError(where, rule, "reparam-identity", f"{got} != {expected}")

    def judge(self, where: str, rule: str, lhs: StepPath, rhs: StepPath) -> Judgment:
        if lhs.space != rhs.space:
            raise CertificateError(where, rule, "same-space")
        self.require_path(where, rule, lhs)
        self.require_path(where, rule, rhs)
        if self.rel and (lhs.start != rhs.start or lhs.end != rhs.end):
            raise CertificateError(where, rule, "rel-endpoints", f"{lhs} vs {rhs}")
        return Judgment(lhs, rhs, self.mode, self.rel)

    def check(self, node: Node, where: str) -> Judgment:
        rule = RULE_NAMES.get(type(node))
        if rule is None:
            raise TypeError(f"not a certificate node: {node!r}")
        if isinstance(node, Refl):
            return self.judge(where, rule, node.path, node.path)
        if isinstance(node, Sym):
            j = self.check(node.child, where + ".sym")
            return j.flipped()
        if isinstance(node, Trans):
            a = self.check(node.first, where + ".trans[0]")
            b = self.check(node.second, where + ".trans[1]")
            if a.rhs != b.lhs:
                raise CertificateError(where, rule, "trans-middle", f"{a.rhs} vs {b.lhs}")
            return self.judge(where, rule, a.lhs, b.rhs)
        if isinstance(node, Reparam):
            if not node.rho.fixes_endpoints:
                raise CertificateError(where, rule, "rho-endpoints", f"rho = {node.rho}")
            if not node.rho.is_nondecreasing:
                raise CertificateError(where, rule, "rho-monotone", f"rho = {node.rho}")
            moved = reparameterize(node.path, node.rho)
            self.check_reparam_obligation(where, rule, node.path, node.rho, moved)
            return self.judge(where, rule, moved, node.path)
        if isinstance(node, Paste):
            f = self.check(node.left, where + ".paste[0]")
            g = self.check(node.right, where + ".paste[1]")
            ends = {f.lhs.end, f.rhs.end, g.lhs.start, g.rhs.start}
            if f.lhs.space != g.lhs.space or len(ends) != 1:
                raise CertificateError(where, rule, "paste-endpoints",
                                       f"left ends at {f.lhs.end}/{f.rhs.end}, right starts at "
                                       f"{g.lhs.start}/{g.rhs.start}")
            return self.judge(where, rule, compose_paths(f.lhs, g.lhs), compose_paths(f.rhs, g.rhs))
        if isinstance(node, UnitLeft):
            a = node.path
            unit = StepPath.constant(a.space, a.start)
            lhs = compose_paths(unit, a)
            self.check_reparam_obligation(where, rule, a, RHO_UNIT_LEFT, lhs)
            return self.judge(where, rule, lhs, a)
        if isinstance(node, UnitRight):
            a = node.path
            unit = StepPath.constant(a.space, a.end)
            rhs = compose_paths(a, unit)
            self.check_reparam_obligation(where, rule, a, RHO_UNIT_RIGHT, rhs)
            return self.judge(where, rule, a, rhs)
        if isinstance(node, Assoc):
            a, b, c = node.alpha, node.beta, node.gamma
            self.require_composable(where, rule, a, b)
            self.require_composable(where, rule, b, c)
            self.require_rho(where, rule, RHO_ASSOC)
            for p in (a, b, c):
                self.require_path(where, rule, p)
            lhs = compose_paths(a, compose_paths(b, c))
            rhs = compose_paths(compose_paths(a, b), c)
            self.check_reparam_obligation(where, rule, lhs, RHO_ASSOC, rhs)
            return self.judge(where, rule, lhs, rhs)
        if isinstance(node, (InvCancelLeft, InvCancelRight)):
            a = node.path if isinstance(node, InvCancelLeft) else inverse_path(node.path)
            self.require_path(where, rule, a)
            self.require_path(where, rule, inverse_path(a))
            report = _cancel_report(a, self.mode)
            if not report.ok:
                t, b, pre = report.failures[0]
                raise CertificateError(where, rule, "cancel-slices",
                                       f"slice at t={t}: preimage of {a.space.fmt(b)} is {pre}")
            loop = compose_paths(a, inverse_path(a))
            unit = StepPath.constant(a.space, a.start)
            assert report.h0 == unit and report.h1 == loop
            return self.judge(where, rule, loop, unit)
        raise AssertionError(rule)


@lru_cache(maxsize=4096)
def _cancel_report(alpha: StepPath, mode: int) -> "SliceReport":
    return verify_slices(inverse_cancel_family(alpha), mode)


def check_certificate(cert: Certificate) -> Judgment:
    return _Checker(cert.mode, cert.rel).check(cert.root, "root")


def constituent_paths(cert: Certificate) -> list[StepPath]:
    """Every path whose so-i continuity the checker verified."""
    checker = _Checker(cert.mode, cert.rel)
    checker.check(cert.root, "root")
    return checker.paths


# ---------------------------------------------------------------------------
# slice families H_t


class SliceError(ValueError):
    pass


@dataclass(frozen=True)
class SlicePiece:
    value: int
    lo: PLMap
    hi: PLMap
    lo_closed: bool = True
    hi_closed: bool = False


@dataclass(frozen=True)
class Band:
    t: Interval
    pieces: tuple[SlicePiece, ...]


@dataclass(frozen=True)
class SliceFamily:
    """A map H: I×I → X given slice by slice.

    On each t-band the slice H_t is a step path whose breakpoints are PL
    functions of t and whose piece values are fixed.
    """

    space: FiniteSpace
    bands: tuple[Band, ...]

    def __post_init__(self):
        bands = tuple(self.bands)
        if not bands:
            raise SliceError("a slice family needs at least one band")
        if bands[0].t.lo != ZERO or not bands[0].t.lo_closed:
            raise SliceError("bands must start at t = 0 (closed)")
        if bands[-1].t.hi != ONE or not bands[-1].t.hi_closed:
            raise SliceError("bands must end at t = 1 (closed)")
        for a, b in zip(bands, bands[1:]):
            if a.t.hi != b.t.lo or a.t.hi_closed == b.t.lo_closed:
                raise SliceError(f"bands {a.t} and {b.t} do not partition [0,1]")
        for band in bands:
            _validate_band(band)
        object.__setattr__(self, "bands", bands)

    def band_at(self, t: Fraction) -> Band:
        for band in self.bands:
            if t in band.t:
                return band
        raise SliceError(f"t = {t} outside [0, 1]")

    def slice_at(self, t) -> StepPath:
        t = Fraction(t)
        band = self.band_at(t)
        pieces = []
        for p in band.pieces:
            lo, hi = p.lo(t), p.hi(t)
            if lo == hi and not (p.lo_closed and p.hi_closed):
                continue
            pieces.append((Interval(lo, hi, p.lo_closed, p.hi_closed), p.value))
        try:
            return StepPath(self.space, tuple(pieces))
        except PathError as exc:
            raise SliceError(f"slice at t = {t} is not a partition of [0,1]: {exc}") from None

    def __call__(self, s, t) -> int:
        return self.slice_at(t)(s)


def _band_nodes(band: Band) -> list[Fraction]:
    ts = {band.t.lo, band.t.hi}
    for p in band.pieces:
        for fn in (p.lo, p.hi):
            ts.update(t for t, _ in fn.nodes if band.t.lo <= t <= band.t.hi)
    return sorted(ts)


def _validate_band(band: Band) -> None:
    ps = band.pieces
    if not ps:
        raise SliceError(f"band {band.t} has no pieces")
    if not ps[0].lo_closed or not ps[-1].hi_closed:
        raise SliceError(f"band {band.t}: slices must contain both s = 0 and s = 1")
    for a, b in zip(ps, ps[1:]):
        if a.hi_closed == b.lo_closed:
            raise SliceError(f"band {band.t}: adjacent pieces must share each breakpoint exactly once")
    for t in _band_nodes(band):
        if ps[0].lo(t) != ZERO or ps[-1].hi(t) != ONE:
            raise SliceError(f"band {band.t}: slice at t={t} does not span [0,1]")
        for p in ps:
            if p.hi(t) < p.lo(t):
                raise SliceError(f"band {band.t}: breakpoint functions cross out of order at t={t}")
        for a, b in zip(ps, ps[1:]):
            if a.hi(t) != b.lo(t):
                raise SliceError(f"band {band.t}: adjacent breakpoints disagree at t={t}")


@dataclass
class SliceReport:
    ok: bool
    h0: StepPath
    h1: StepPath
    checked: list[Fraction] = field(default_factory=list)
    failures: list = field(default_factory=list)  # (t, test set, preimage)
    rel_endpoints: bool = True


def _sample_points(band: Band) -> Iterator[Fraction]:
    nodes = _band_nodes(band)
    for k, t in enumerate(nodes):
        if t in band.t:
            yield t
        if k + 1 < len(nodes):
            yield (t + nodes[k + 1]) / 2


def verify_slices(family: SliceFamily, i: int) -> SliceReport:
    """Check so-i continuity of every slice H_t exactly.

    Breakpoint functions are PL, so within a band the piece lengths can only
    reach zero at (or between) PL nodes; between consecutive nodes the slice
    keeps one canonical signature.  Checking each node and one midpoint per
    node gap therefore covers every slice.
    """
    report = SliceReport(True, family.slice_at(0), family.slice_at(1))
    ends = {(report.h0.start, report.h0.end)}
    for band in family.bands:
        for t in _sample_points(band):
            path = family.slice_at(t)
            report.checked.append(t)
            ends.add((path.start, path.end))
            verdict = is_so_i_path(path, i)
            if not verdict.holds:
                report.ok = False
                report.failures.append((t, verdict.test_set, verdict.preimage))
    report.rel_endpoints = len(ends) == 1
    return report


def _const(v) -> PLMap:
    return PLMap.constant(v)


def _static_band(t: Interval, pieces) -> Band:
    return Band(t, tuple(SlicePiece(v, _const(iv.lo), _const(iv.hi), iv.lo_closed, iv.hi_closed)
                         for iv, v in pieces))


def constant_family(alpha: StepPath) -> SliceFamily:
    """H(s, t) = α(s) for every t."""
    return SliceFamily(alpha.space, (_static_band(Interval(ZERO, ONE), alpha.pieces),))


def inverse_cancel_family(alpha: StepPath) -> SliceFamily:
    """Homotopy from the constant loop at α(0) to α∗ᾱ.

    H(s, t) = α(2s) on [0, t/2], α(t) on [t/2, 1 − t/2], α(2 − 2s) on
    [1 − t/2, 1].  For t in the k-th piece of α every breakpoint is fixed, so
    there is one band per piece of α.
    """
    bands = []
    pieces = alpha.pieces
    half = Fraction(1, 2)
    for k, (jk, vk) in enumerate(pieces):
        left = [(iv.map_affine(half, ZERO), v) for iv, v in pieces[:k]]
        mid_lo = jk.lo / 2
        mid = (Interval(mid_lo, ONE - mid_lo, jk.lo_closed, jk.lo_closed), vk)
        right = [(iv.map_affine(-half, ONE), v) for iv, v in reversed(pieces[:k])]
        bands.append(_static_band(jk, left + [mid] + right))
    return SliceFamily(alpha.space, tuple(bands))


def straight_family(alpha: StepPath, beta: StepPath) -> SliceFamily:
    """Slide α's breakpoints linearly onto β's (same value/shape sequence)."""
    if [(v, iv.lo_closed, iv.hi_closed) for iv, v in alpha.pieces] != \
            [(v, iv.lo_closed, iv.hi_closed) for iv, v in beta.pieces]:
        raise SliceError("straight_family needs paths with the same piece structure")
    pieces = tuple(
        SlicePiece(v, PLMap.of((0, a.lo), (1, b.lo)), PLMap.of((0, a.hi), (1, b.hi)), a.lo_closed, a.hi_closed)
        for (a, v), (b, _) in zip(alpha.pieces, beta.pieces)
    )
    return SliceFamily(alpha.space, (Band(Interval(ZERO, ONE), pieces),))


def _retime(fn: PLMap, scale: Fraction, shift: Fraction) -> PLMap:
    # fn evaluated at (t - shift)/scale, defined on [shift, shift+scale] and extended flat.
    nodes = [(scale * t + shift, v) for t, v in fn.nodes]
    if nodes[0][0] > ZERO:
        nodes.insert(0, (ZERO, nodes[0][1]))
    if nodes[-1][0] < ONE:
        nodes.append((ONE, nodes[-1][1]))
    return PLMap(tuple(nodes))


def _retime_band(band: Band, scale: Fraction, shift: Fraction) -> Band:
    return Band(
        band.t.map_affine(scale, shift),
        tuple(SlicePiece(p.value, _retime(p.lo, scale, shift), _retime(p.hi, scale, shift),
                         p.lo_closed, p.hi_closed) for p in band.pieces),
    )


def paste_families(first: SliceFamily, second: SliceFamily) -> SliceFamily:
    """F(x, 2t) on [0, 1/2] followed by G(x, 2t − 1) on (1/2, 1]."""
    if first.space != second.space:
        raise SliceError("families live in different spaces")
    if first.slice_at(1) != second.slice_at(0):
        raise SliceError("pasted families must agree: F_1 must equal G_0")
    half = Fraction(1, 2)
    bands = [_retime_band(b, half, ZERO) for b in first.bands]
    for k, b in enumerate(second.bands):
        nb = _retime_band(b, half, half)
        if k == 0:
            if nb.t.degenerate:
                continue
            nb = Band(Interval(nb.t.lo, nb.t.hi, False, nb.t.hi_closed), nb.pieces)
        bands.append(nb)
    return SliceFamily(first.space, tuple(bands))


def reverse_family(family: SliceFamily) -> SliceFamily:
    """G(x, t) = H(x, 1 − t)."""
    def flip(fn: PLMap) -> PLMap:
        return PLMap(tuple((ONE - t, v) for t, v in reversed(fn.nodes)))

    bands = tuple(
        Band(b.t.map_affine(-ONE, ONE),
             tuple(SlicePiece(p.value, flip(p.lo), flip(p.hi), p.lo_closed, p.hi_closed) for p in b.pieces))
        for b in reversed(family.bands)
    )
    return SliceFamily(family.space, bands)


@dataclass(frozen=True)
class JointViolation:
    test_set: int
    s: Fraction
    t: Fraction


def falsify_joint(family: SliceFamily, i: int, grid: int = 16) -> Optional[JointViolation]:
    """Sampled search for a failure of joint so-i continuity of H on I×I.

    Preimages of the codomain test sets are approximated on the lattice
    (j/grid, k/grid).  For i ∈ {1, 2} a lattice point of the preimage with no
    lattice-interior point within one step is reported; for i = 3 any
    non-interior lattice point is.  Finding nothing proves nothing.
    """
    if grid < 1:
        raise SliceError("grid must be positive")
    space = family.space
    tests = space.opens if i == 1 else space.semi_open_family
    steps = [Fraction(k, grid) for k in range(grid + 1)]
    values = []
    for t in steps:
        h = family.slice_at(t)
        values.append([h(s) for s in steps])
    rng = range(grid + 1)

    def neighbours(k, j):
        for dk in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if 0 <= k + dk <= grid and 0 <= j + dj <= grid:
                    yield k + dk, j + dj

    for b in tests:
        inside = [[bool(b >> values[k][j] & 1) for j in rng] for k in rng]
        interior = [[inside[k][j] and all(inside[kk][jj] for kk, jj in neighbours(k, j)) for j in rng]
                    for k in rng]
        for k in rng:
            for j in rng:
                if not inside[k][j]:
                    continue
                if i == 3:
                    bad = not interior[k][j]
                else:
                    bad = not any(interior[kk][jj] for kk, jj in neighbours(k, j))
                if bad:
                    return JointViolation(b, steps[j], steps[k])
    return None


# ---------------------------------------------------------------------------
# irresolute homotopy equivalence


class HomotopyError(ValueError):
    pass


def map_path(h: SpaceMap) -> StepPath:
    """Path-level realization of a self-map: point k of the domain owns [k/n, (k+1)/n)."""
    n = h.domain.n
    pieces = []
    for k, y in enumerate(h.images):
        last = k == n - 1
        pieces.append((Interval(Fraction(k, n), Fraction(k + 1, n), True, last), y))
    return StepPath(h.codomain, tuple(pieces))


def _matches(j: Judgment, a: StepPath, b: StepPath) -> bool:
    return (j.lhs, j.rhs) in ((a, b), (b, a))


def check_homotopy_equivalence(f: SpaceMap, g: SpaceMap, c1: Certificate, c2: Certificate) -> bool:
    """True iff c1 proves g∘f ≃₂ 1_X and c2 proves f∘g ≃₂ 1_Y at the path level."""
    if f.codomain != g.domain or g.codomain != f.domain:
        raise MapError("f: X → Y and g: Y → X required")
    for name, h in (("f", f), ("g", g)):
        if not classify(h).so2:
            raise HomotopyError(f"{name} is not irresolute (so-2)")
    for c in (c1, c2):
        if c.mode != 2:
            raise HomotopyError("homotopy equivalence certificates must be in mode 2")
    j1, j2 = check_certificate(c1), check_certificate(c2)
    gf, fg = compose(f, g), compose(g, f)
    return (_matches(j1, map_path(gf), map_path(SpaceMap.identity(f.domain)))
            and _matches(j2, map_path(fg), map_path(SpaceMap.identity(f.codomain))))
