"""Loop words over registered generators, with certificate-backed reduction.

Group elements are words in named so-i loops at a basepoint.  A word is
realized as the left-associated composite of its letters' paths, the empty
word as the constant loop.  Every equality this module reports between
realizations comes with a certificate that :func:`check_certificate`
accepts; nothing here claims to decide so-i homotopy of loops in general.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .finite_space import FiniteSpace
from .homotopy import (
    Assoc,
    Certificate,
    CertificateError,
    InvCancelLeft,
    Judgment,
    Node,
    Paste,
    Refl,
    Reparam,
    Sym,
    Trans,
    UnitLeft,
    UnitRight,
    check_certificate,
    trans_chain,
)
from .maps import SpaceMap, classify
from .paths import StepPath, compose_paths, find_reparameterization, inverse_path, is_so_i_path

Letter = tuple[str, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class GroupError(ValueError):
    pass


def parse_word(text: str) -> Word:
    """``"g h^-1 k"`` → ((g, 1), (h, -1), (k, 1)); ``""``, ``"1"`` and ``"ε"`` are empty."""
    text = text.strip()
    if text in ("", "1", "ε", "e"):
        return EMPTY
    out = []
    for tok in text.replace("*", " ").split():
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?1))?", tok)
        if not m:
            raise GroupError(f"cannot parse letter {tok!r}")
        out.append((m.group(1), int(m.group(2) or 1)))
    return tuple(out)


def format_word(w: Word) -> str:
    if not w:
        return "ε"
    return " ".join(name if sign == 1 else f"{name}^-1" for name, sign in w)


def invert(w: Word) -> Word:
    return tuple((name, -sign) for name, sign in reversed(w))


def free_reduce(w: Word) -> Word:
    out: list[Letter] = []
    for name, sign in w:
        if out and out[-1] == (name, -sign):
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


@dataclass(frozen=True)
class LoopTable:
    space: FiniteSpace
    basepoint: int
    mode: int = 2
    generators: tuple[tuple[str, StepPath], ...] = ()

    def __post_init__(self):
        if self.mode not in (1, 2, 3):
            raise GroupError(f"mode must be 1, 2 or 3, got {self.mode}")
        if not 0 <= self.basepoint < self.space.n:
            raise GroupError(f"basepoint index {self.basepoint} out of range")

    def path(self, name: str) -> StepPath:
        for n, p in self.generators:
            if n == name:
                return p
        raise GroupError(f"unknown generator {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.generators)

    @property
    def unit(self) -> StepPath:
        return StepPath.constant(self.space, self.basepoint)

    def check_word(self, w: Word) -> Word:
        for name, sign in w:
            self.path(name)
            if sign not in (1, -1):
                raise GroupError(f"letter exponent must be ±1, got {sign}")
        return w


def register_loop(table: LoopTable, name: str, alpha: StepPath) -> LoopTable:
    """Return a new table with ``alpha`` available under ``name``."""
    if not _NAME.match(name):
        raise GroupError(f"generator names must be identifiers, got {name!r}")
    if name in table.names:
        raise GroupError(f"generator {name!r} already registered")
    if alpha.space != table.space:
        raise GroupError("loop lives in a different space")
    if alpha.start != table.basepoint or alpha.end != table.basepoint:
        bp = table.space.points[table.basepoint]
        raise GroupError(
            f"{name} is not a loop at {bp}: runs from {table.space.points[alpha.start]} "
            f"to {table.space.points[alpha.end]}"
        )
    verdict = is_so_i_path(alpha, table.mode)
    if not verdict.holds:
        raise GroupError(
            f"{name} is not so-{table.mode}: preimage of {table.space.fmt(verdict.test_set)} "
            f"is {verdict.preimage}"
        )
    return replace(table, generators=table.generators + ((name, alpha),))


def letter_path(table: LoopTable, letter: Letter) -> StepPath:
    name, sign = letter
    p = table.path(name)
    return p if sign == 1 else inverse_path(p)


def realize(table: LoopTable, w: Word) -> StepPath:
    """Left-associated composite of the letters; ε gives the constant loop."""
    table.check_word(w)
    if not w:
        return table.unit
    out = letter_path(table, w[0])
    for letter in w[1:]:
        out = compose_paths(out, letter_path(table, letter))
    return out


# ---------------------------------------------------------------------------
# certificate builders


def _reassoc(table: LoopTable, w1: Word, w2: Word) -> Node:
    # R(w1) * R(w2) ≃ R(w1 w2), both words nonempty
    if len(w2) == 1:
        return Refl(realize(table, w1 + w2))
    v, last = w2[:-1], w2[-1]
    return Trans(
        Assoc(realize(table, w1), realize(table, v), letter_path(table, last)),
        Paste(_reassoc(table, w1, v), Refl(letter_path(table, last))),
    )


def _lift(table: LoopTable, prefix: Word, seg: Word, seg2: Word, local: Node, suffix: Word) -> Node:
    """Lift ``local`` (proving R(seg) ≃ R(seg2)) to R(prefix seg suffix) ≃ R(prefix seg2 suffix)."""
    assert seg
    if prefix:
        rp = realize(table, prefix)
        after = _reassoc(table, prefix, seg2) if seg2 else Sym(UnitRight(rp))
        cur: Node = trans_chain([
            Sym(_reassoc(table, prefix, seg)),
            Paste(Refl(rp), local),
            after,
        ])
    else:
        cur = local
    done = prefix + seg2
    for letter in suffix:
        lp = letter_path(table, letter)
        cur = Paste(cur, Refl(lp))
        if not done:
            cur = Trans(cur, UnitLeft(lp))
        done = done + (letter,)
    return cur


def _cancel_at(table: LoopTable, u: Word, k: int) -> Node:
    return _lift(table, u[:k], u[k:k + 2], EMPTY, InvCancelLeft(letter_path(table, u[k])), u[k + 2:])


def _first_cancel(u: Word) -> Optional[int]:
    for k in range(len(u) - 1):
        if u[k][0] == u[k + 1][0] and u[k][1] == -u[k + 1][1]:
            return k
    return None


@dataclass
class Product:
    word: Word
    certificate: Optional[Certificate]
    judgment: Optional[Judgment]
    warning: str = ""


def multiply(table: LoopTable, w1: Word, w2: Word) -> Product:
    """Reduced product of two words with a checked certificate.

    The certificate proves R(w1) ∗ R(w2) ≃_i R(reduced word).  In mode 3
    the reparameterization obligations of the unit and associativity rules
    can fail; the reduced word is then returned with a warning and no
    certificate.
    """
    table.check_word(w1)
    table.check_word(w2)
    nodes: list[Node] = []
    if not w1:
        nodes.append(UnitLeft(realize(table, w2)))
    elif not w2:
        nodes.append(Sym(UnitRight(realize(table, w1))))
    else:
        nodes.append(_reassoc(table, w1, w2))
    u = w1 + w2
    while (k := _first_cancel(u)) is not None:
        nodes.append(_cancel_at(table, u, k))
        u = u[:k] + u[k + 2:]
    cert = Certificate(trans_chain(nodes), table.mode, rel=True)
    try:
        judgment = check_certificate(cert)
    except CertificateError as exc:
        if table.mode == 3:
            return Product(u, None, None, warning=f"group law not certified in mode 3: {exc}")
        raise
    assert judgment.lhs == compose_paths(realize(table, w1), realize(table, w2))
    assert judgment.rhs == realize(table, u)
    return Product(u, cert, judgment)


# ---------------------------------------------------------------------------
# bounded equivalence search


@dataclass
class Equivalence:
    answer: str  # "yes" | "unknown"
    certificate: Optional[Certificate] = None
    steps: list = field(default_factory=list)


def _moves(table: LoopTable, u: Word, subs: dict, trivial: set):
    """Yield (description, next word, builder) for one rewrite of ``u``."""
    for k in range(len(u) - 1):
        if u[k][0] == u[k + 1][0] and u[k][1] == -u[k + 1][1]:
            yield ("cancel", k), u[:k] + u[k + 2:], (lambda k=k: _cancel_at(table, u, k))
    for k, letter in enumerate(u):
        if letter[0] in trivial:
            yield ("drop-trivial", k), u[:k] + u[k + 1:], (
                lambda k=k: _lift(table, u[:k], u[k:k + 1], EMPTY, Refl(table.unit), u[k + 1:]))
        for other, rho in subs.get(letter, ()):
            v = u[:k] + (other,) + u[k + 1:]
            yield ("substitute", k, other), v, (
                lambda k=k, other=other, rho=rho: _lift(
                    table, u[:k], u[k:k + 1], (other,), Reparam(letter_path(table, other), rho), u[k + 1:]))
    for k in range(len(u) + 1):
        for name in table.names:
            for sign in (1, -1):
                pair = ((name, sign), (name, -sign))
                v = u[:k] + pair + u[k:]
                yield ("insert", k, pair), v, (
                    lambda v=v, k=k: Sym(_cancel_at(table, v, k)))


def equivalent(table: LoopTable, w1: Word, w2: Word, depth: int = 3) -> Equivalence:
    """Search up to ``depth`` rewrites for a certificate of R(w1) ≃_i R(w2).

    Rewrites are free cancellation and insertion, dropping generators whose
    loop is constant, and substituting a generator by another one that is a
    monotone reparameterization of it.  Answers "yes" with the checked
    certificate, or "unknown"; never "no".
    """
    table.check_word(w1)
    table.check_word(w2)
    letters = [(n, s) for n in table.names for s in (1, -1)]
    subs: dict = {}
    for a in letters:
        for b in letters:
            if a != b:
                rho = find_reparameterization(letter_path(table, a), letter_path(table, b))
                if rho is not None:
                    subs.setdefault(a, []).append((b, rho))
    trivial = {n for n, p in table.generators if p == table.unit}

    parent: dict[Word, tuple] = {w1: None}
    frontier = deque([(w1, 0)])
    while frontier:
        u, d = frontier.popleft()
        if u == w2:
            break
        if d == depth:
            continue
        for desc, v, build in _moves(table, u, subs, trivial):
            if v not in parent:
                parent[v] = (u, desc, build)
                frontier.append((v, d + 1))
    if w2 not in parent:
        return Equivalence("unknown")
    chain: list[Node] = []
    steps = []
    v = w2
    while parent[v] is not None:
        u, desc, build = parent[v]
        chain.append(build())
        steps.append(desc)
        v = u
    chain.reverse()
    steps.reverse()
    root = trans_chain(chain) if chain else Refl(realize(table, w1))
    cert = Certificate(root, table.mode, rel=True)
    try:
        judgment = check_certificate(cert)
    except CertificateError:
        # mode 3: a rewrite route exists but one of its rules is not sound there
        return Equivalence("unknown", None, steps)
    assert judgment.lhs == realize(table, w1) and judgment.rhs == realize(table, w2)
    return Equivalence("yes", cert, steps)


def describe_step(step: tuple) -> str:
    kind, k = step[0], step[1]
    if kind == "substitute":
        return f"substitute {format_word((step[2],))} at {k}"
    if kind == "insert":
        return f"insert {format_word(step[2])} at {k}"
    return f"{kind} at {k}"


# ---------------------------------------------------------------------------
# basepoint change and induced homomorphisms


def basepoint_change(table: LoopTable, gamma: StepPath, w: Word = EMPTY) -> tuple[LoopTable, Word]:
    """Move generators along γ: each loop α becomes γ̄ ∗ α ∗ γ at γ(1).

    Words map letter by letter, so the returned word reuses the names of
    ``w`` over the returned table.
    """
    table.check_word(w)
    if gamma.space != table.space:
        raise GroupError("gamma lives in a different space")
    if gamma.start != table.basepoint:
        raise GroupError(
            f"gamma must start at the basepoint {table.space.points[table.basepoint]}, "
            f"starts at {table.space.points[gamma.start]}"
        )
    verdict = is_so_i_path(gamma, table.mode)
    if not verdict.holds:
        raise GroupError(f"gamma is not so-{table.mode}: preimage of "
                         f"{table.space.fmt(verdict.test_set)} is {verdict.preimage}")
    back = inverse_path(gamma)
    out = LoopTable(table.space, gamma.end, table.mode)
    for name, alpha in table.generators:
        out = register_loop(out, name, compose_paths(compose_paths(back, alpha), gamma))
    return out, w


@dataclass
class InducedHom:
    map: SpaceMap
    source: LoopTable
    target: LoopTable

    def __call__(self, w: Word) -> Word:
        return self.source.check_word(w)


def induced_hom(f: SpaceMap, table: LoopTable) -> InducedHom:
    """Push every generator α forward to f∘α; defined for irresolute f in mode 2."""
    if table.mode != 2:
        raise GroupError("induced homomorphisms are defined for mode-2 tables only")
    if f.domain != table.space:
        raise GroupError("map domain differs from the table's space")
    if not classify(f).so2:
        raise GroupError("map is not irresolute (so-2)")
    out = LoopTable(f.codomain, f.images[table.basepoint], 2)
    for name, alpha in table.generators:
        out = register_loop(out, name, alpha.map_values(f.images, f.codomain))
    return InducedHom(f, table, out)


def compose_homs(first: InducedHom, second: InducedHom) -> Callable[[Word], Word]:
    return lambda w: second(first(w))
