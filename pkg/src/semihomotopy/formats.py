"""JSON and text formats read by the CLI.

Every loader accepts either an inline JSON value or a string naming a JSON
file relative to the directory of the file that mentions it.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Union

from .finite_space import E1, SIERPINSKI, FiniteSpace, SpaceError
from .fundamental_group import GroupError, LoopTable, register_loop
from .homotopy import (
    Assoc,
    Band,
    Certificate,
    InvCancelLeft,
    InvCancelRight,
    Paste,
    Refl,
    Reparam,
    SliceError,
    SliceFamily,
    SlicePiece,
    Sym,
    Trans,
    UnitLeft,
    UnitRight,
)
from .interval_sets import IntervalError, parse_interval, rat
from .maps import MapError, SpaceMap
from .paths import (
    RHO_ASSOC,
    RHO_UNIT_LEFT,
    RHO_UNIT_RIGHT,
    PathError,
    PLMap,
    StepPath,
    compose_paths,
    inverse_path,
)


class FormatError(ValueError):
    """Malformed input; the message names the file and the position in it."""


BUILTIN_SPACES = {"E1": E1, "S2": SIERPINSKI}

Source = Union[str, Path, dict, list]


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


class Loader:
    """Resolves nested file references relative to ``base``."""

    def __init__(self, base: Union[str, Path] = ".", origin: str = "<inline>"):
        self.base = Path(base)
        self.origin = origin

    @classmethod
    def for_file(cls, path: Union[str, Path]) -> tuple["Loader", Any]:
        path = Path(path)
        return cls(path.parent, str(path)), read_json(path)

    def _resolve(self, value: Any, where: str) -> tuple["Loader", Any]:
        if isinstance(value, str):
            if value.startswith("builtin:"):
                return self, value
            target = self.base / value
            return Loader(target.parent, str(target)), read_json(target)
        return self, value

    def fail(self, where: str, msg: str):
        raise FormatError(f"{self.origin}: at {where}: {msg}")

    def space(self, value: Any, where: str = "space") -> FiniteSpace:
        loader, data = self._resolve(value, where)
        if isinstance(data, str):
            name = data[len("builtin:"):]
            if name not in BUILTIN_SPACES:
                loader.fail(where, f"unknown builtin space {name!r}")
            return BUILTIN_SPACES[name]
        if not isinstance(data, dict):
            loader.fail(where, "space must be an object with 'points' and 'opens'")
        try:
            return FiniteSpace.from_json(data)
        except SpaceError as exc:
            loader.fail(where, str(exc))

    def map(self, value: Any, where: str = "map") -> SpaceMap:
        loader, data = self._resolve(value, where)
        if not isinstance(data, dict) or "images" not in data:
            loader.fail(where, "map must be an object with 'domain', 'codomain' and 'images'")
        dom = loader.space(data.get("domain"), where + ".domain")
        cod = loader.space(data.get("codomain"), where + ".codomain")
        try:
            return SpaceMap.from_names(dom, cod, data["images"])
        except MapError as exc:
            loader.fail(where + ".images", str(exc))

    def pieces(self, space: FiniteSpace, pieces: Any, where: str) -> StepPath:
        if not isinstance(pieces, list):
            self.fail(where, "pieces must be a list")
        pairs = []
        for k, p in enumerate(pieces):
            if not isinstance(p, dict) or "interval" not in p or "value" not in p:
                self.fail(f"{where}[{k}]", "piece needs 'interval' and 'value'")
            pairs.append((p["interval"], p["value"]))
        try:
            return StepPath.parse(space, pairs)
        except PathError as exc:
            self.fail(where, str(exc))

    def path(self, value: Any, where: str = "path", space: FiniteSpace = None) -> StepPath:
        loader, data = self._resolve(value, where)
        if isinstance(data, list):
            if space is None:
                loader.fail(where, "a bare piece list needs an enclosing space")
            return loader.pieces(space, data, where)
        if not isinstance(data, dict) or "pieces" not in data:
            loader.fail(where, "path must be an object with 'space' and 'pieces'")
        sp = loader.space(data["space"], where + ".space") if "space" in data else space
        if sp is None:
            loader.fail(where, "path has no space")
        if space is not None and sp != space:
            loader.fail(where, "path lives in a different space than its bundle")
        return loader.pieces(sp, data["pieces"], where + ".pieces")

    def plmap(self, value: Any, where: str = "rho") -> PLMap:
        # a number or numeric string is a constant map, any other string a file
        if isinstance(value, (str, int)) and not isinstance(value, bool):
            try:
                c = rat(value)
            except (IntervalError, ValueError, ZeroDivisionError):
                c = None
            if c is not None:
                try:
                    return PLMap.constant(c)
                except PathError as exc:
                    self.fail(where, str(exc))
        loader, data = self._resolve(value, where)
        if isinstance(data, dict):
            data = data.get("nodes")
        if not isinstance(data, list):
            loader.fail(where, "PL map must be a list of [t, value] nodes")
        try:
            return PLMap(tuple((rat(t), rat(v)) for t, v in data))
        except (IntervalError, PathError, ValueError, TypeError) as exc:
            loader.fail(where, f"bad PL map: {exc}")

    def slices(self, value: Any, where: str = "family") -> SliceFamily:
        loader, data = self._resolve(value, where)
        if not isinstance(data, dict) or "bands" not in data:
            loader.fail(where, "slice family must be an object with 'space' and 'bands'")
        space = loader.space(data.get("space"), where + ".space")
        bands = []
        for k, b in enumerate(data["bands"]):
            bw = f"{where}.bands[{k}]"
            try:
                t = parse_interval(b["t"])
            except (KeyError, TypeError, IntervalError) as exc:
                loader.fail(bw + ".t", f"bad t-interval: {exc}")
            pieces = []
            for j, p in enumerate(b.get("pieces", [])):
                pw = f"{bw}.pieces[{j}]"
                try:
                    value = space.index(p["value"])
                except (KeyError, SpaceError) as exc:
                    loader.fail(pw + ".value", str(exc))
                pieces.append(SlicePiece(
                    value,
                    loader.plmap(p.get("lo"), pw + ".lo"),
                    loader.plmap(p.get("hi"), pw + ".hi"),
                    bool(p.get("lo_closed", True)),
                    bool(p.get("hi_closed", False)),
                ))
            bands.append(Band(t, tuple(pieces)))
        try:
            return SliceFamily(space, tuple(bands))
        except SliceError as exc:
            loader.fail(where, str(exc))

    def table(self, value: Any, where: str = "table") -> LoopTable:
        loader, data = self._resolve(value, where)
        if not isinstance(data, dict):
            loader.fail(where, "table bundle must be an object")
        space = loader.space(data.get("space"), where + ".space")
        try:
            bp = space.index(data.get("basepoint"))
        except SpaceError as exc:
            loader.fail(where + ".basepoint", str(exc))
        try:
            table = LoopTable(space, bp, int(data.get("mode", 2)))
            for name, p in (data.get("generators") or {}).items():
                table = register_loop(table, name, loader.path(p, f"{where}.generators.{name}", space))
        except GroupError as exc:
            loader.fail(where, str(exc))
        return table


def table_to_json(table: LoopTable) -> dict:
    return {
        "space": table.space.to_json(),
        "basepoint": table.space.points[table.basepoint],
        "mode": table.mode,
        "generators": {
            name: [{"interval": str(iv), "value": table.space.points[v]} for iv, v in p.pieces]
            for name, p in table.generators
        },
    }


# ---------------------------------------------------------------------------
# certificate text


_TOKENS = re.compile(r"\s*(\(|\)|[^\s()]+)")


def parse_sexpr(text: str, origin: str = "<certificate>"):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or not m.group(1):
            if text[pos:].strip() == "":
                break
            raise FormatError(f"{origin}: offset {pos}: unexpected character")
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()

    def read(i):
        if i >= len(tokens):
            raise FormatError(f"{origin}: unexpected end of input")
        tok, off = tokens[i]
        if tok == "(":
            out = []
            i += 1
            while True:
                if i >= len(tokens):
                    raise FormatError(f"{origin}: offset {off}: unclosed parenthesis")
                if tokens[i][0] == ")":
                    return out, i + 1
                item, i = read(i)
                out.append(item)
        if tok == ")":
            raise FormatError(f"{origin}: offset {off}: unexpected ')'")
        return tok, i + 1

    expr, nxt = read(0)
    if nxt != len(tokens):
        raise FormatError(f"{origin}: offset {tokens[nxt][1]}: trailing input")
    return expr


BUILTIN_RHOS = {
    "rho-assoc": RHO_ASSOC,
    "rho-unit-left": RHO_UNIT_LEFT,
    "rho-unit-right": RHO_UNIT_RIGHT,
    "identity": PLMap.identity(),
}


class CertificateBundle:
    def __init__(self, space: FiniteSpace, paths: dict, rhos: dict, mode: int, rel: bool):
        self.space = space
        self.paths = paths
        self.rhos = {**BUILTIN_RHOS, **rhos}
        self.mode = mode
        self.rel = rel
        self.inline = None

    @classmethod
    def load(cls, value: Source) -> "CertificateBundle":
        if isinstance(value, (str, Path)):
            loader, data = Loader.for_file(value)
        else:
            loader, data = Loader(), value
        if not isinstance(data, dict):
            loader.fail("bundle", "certificate bundle must be an object")
        space = loader.space(data.get("space"), "space")
        paths = {name: loader.path(p, f"paths.{name}", space) for name, p in (data.get("paths") or {}).items()}
        rhos = {name: loader.plmap(r, f"maps.{name}") for name, r in (data.get("maps") or {}).items()}
        bundle = cls(space, paths, rhos, int(data.get("mode", 1)), bool(data.get("rel", True)))
        text = data.get("certificate")
        if text is not None and not isinstance(text, str):
            loader.fail("certificate", "inline certificate must be a string")
        bundle.inline = text
        return bundle

    def path_expr(self, e, origin: str) -> StepPath:
        if isinstance(e, str):
            if e not in self.paths:
                raise FormatError(f"{origin}: unknown path name {e!r}")
            return self.paths[e]
        if len(e) == 3 and e[0] == "compose":
            try:
                return compose_paths(self.path_expr(e[1], origin), self.path_expr(e[2], origin))
            except PathError as exc:
                raise FormatError(f"{origin}: {exc}") from None
        if len(e) == 2 and e[0] == "inverse":
            return inverse_path(self.path_expr(e[1], origin))
        raise FormatError(f"{origin}: bad path expression {e!r}")

    def node(self, e, origin: str):
        if not isinstance(e, list) or not e or not isinstance(e[0], str):
            raise FormatError(f"{origin}: expected a rule application, got {e!r}")
        head, args = e[0], e[1:]
        P = lambda x: self.path_expr(x, origin)  # noqa: E731
        N = lambda x: self.node(x, origin)  # noqa: E731
        table = {
            "refl": (1, lambda a: Refl(P(a[0]))),
            "sym": (1, lambda a: Sym(N(a[0]))),
            "trans": (2, lambda a: Trans(N(a[0]), N(a[1]))),
            "reparam": (2, lambda a: Reparam(P(a[0]), self.rho(a[1], origin))),
            "paste": (2, lambda a: Paste(N(a[0]), N(a[1]))),
            "unit-left": (1, lambda a: UnitLeft(P(a[0]))),
            "unit-right": (1, lambda a: UnitRight(P(a[0]))),
            "assoc": (3, lambda a: Assoc(P(a[0]), P(a[1]), P(a[2]))),
            "inv-cancel-left": (1, lambda a: InvCancelLeft(P(a[0]))),
            "inv-cancel-right": (1, lambda a: InvCancelRight(P(a[0]))),
        }
        if head not in table:
            raise FormatError(f"{origin}: unknown rule {head!r}")
        arity, build = table[head]
        if len(args) != arity:
            raise FormatError(f"{origin}: rule {head!r} takes {arity} arguments, got {len(args)}")
        return build(args)

    def rho(self, name, origin: str) -> PLMap:
        if not isinstance(name, str) or name not in self.rhos:
            raise FormatError(f"{origin}: unknown PL map {name!r}")
        return self.rhos[name]

    def certificate(self, text: str, origin: str = "<certificate>") -> Certificate:
        return Certificate(self.node(parse_sexpr(text, origin), origin), self.mode, self.rel)


def certificate_to_bundle(cert: Certificate) -> dict:
    """Self-contained bundle with the certificate text inline; `cert verify` reads it back."""
    paths: dict = {}
    rhos: dict = {}
    builtin = {v: k for k, v in BUILTIN_RHOS.items()}
    space = None

    def p(x: StepPath) -> str:
        nonlocal space
        space = x.space
        if x not in paths:
            paths[x] = f"p{len(paths)}"
        return paths[x]

    def r(x: PLMap) -> str:
        if x in builtin:
            return builtin[x]
        if x not in rhos:
            rhos[x] = f"r{len(rhos)}"
        return rhos[x]

    def walk(n) -> str:
        if isinstance(n, Refl):
            return f"(refl {p(n.path)})"
        if isinstance(n, Sym):
            return f"(sym {walk(n.child)})"
        if isinstance(n, Trans):
            return f"(trans {walk(n.first)} {walk(n.second)})"
        if isinstance(n, Paste):
            return f"(paste {walk(n.left)} {walk(n.right)})"
        if isinstance(n, Reparam):
            return f"(reparam {p(n.path)} {r(n.rho)})"
        if isinstance(n, Assoc):
            return f"(assoc {p(n.alpha)} {p(n.beta)} {p(n.gamma)})"
        heads = {UnitLeft: "unit-left", UnitRight: "unit-right",
                 InvCancelLeft: "inv-cancel-left", InvCancelRight: "inv-cancel-right"}
        return f"({heads[type(n)]} {p(n.path)})"

    text = walk(cert.root)
    return {
        "space": space.to_json(),
        "mode": cert.mode,
        "rel": cert.rel,
        "paths": {name: x.to_json()["pieces"] for x, name in paths.items()},
        "maps": {name: x.to_json() for x, name in rhos.items()},
        "certificate": text,
    }


def family_to_json(family: SliceFamily) -> dict:
    return {
        "space": family.space.to_json(),
        "bands": [
            {
                "t": str(b.t),
                "pieces": [
                    {"value": family.space.points[p.value], "lo": p.lo.to_json(), "hi": p.hi.to_json(),
                     "lo_closed": p.lo_closed, "hi_closed": p.hi_closed}
                    for p in b.pieces
                ],
            }
            for b in family.bands
        ],
    }
