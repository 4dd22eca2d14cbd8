"""Batch command line front end.

Exit codes: 0 affirmative or success, 1 negative or counterexample found,
2 input error (the diagnostic names the offending file).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .finite_space import SpaceError
from .formats import CertificateBundle, FormatError, Loader, certificate_to_bundle, table_to_json
from .fundamental_group import (
    GroupError,
    basepoint_change,
    describe_step,
    equivalent,
    format_word,
    induced_hom,
    invert,
    multiply,
    parse_word,
    realize,
    register_loop,
)
from .homotopy import HYPOTHESES, CertificateError, check_certificate, falsify_joint, verify_slices
from .interval_sets import IntervalError, interior, is_semi_closed, is_semi_open, parse_ratset, topo_closure
from .maps import MapError, classify, classify_at, search_counterexample
from .paths import PathError, compose_paths, inverse_path, is_so_i_path, path_connectivity

INPUT_ERRORS = (FormatError, SpaceError, IntervalError, MapError, PathError, GroupError)


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, data: dict, text: str) -> None:
        if self.fmt == "json":
            print(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
        else:
            print(text)


def _load(path: str, kind: str):
    return getattr(Loader(origin="<argv>"), kind)(path, kind)


def _sets(space, masks) -> list[list[str]]:
    return [space.names(m) for m in masks]


# ---------------------------------------------------------------------------
# finite spaces and maps


def cmd_so_family(args, out: Output) -> int:
    space = _load(args.space, "space")
    fam = space.semi_closed_family if args.closed else space.semi_open_family
    kind = "semi-closed" if args.closed else "semi-open"
    out.emit(
        {"kind": kind, "count": len(fam), "sets": _sets(space, fam)},
        "\n".join(space.fmt(m) for m in fam),
    )
    return 0


def cmd_semi_open(args, out: Output) -> int:
    kind = "semi-closed" if args.closed else "semi-open"
    if args.interval is not None:
        try:
            a = parse_ratset(args.interval)
        except IntervalError as exc:
            raise FormatError(f"<--interval>: {exc}") from None
        ok = is_semi_closed(a) if args.closed else is_semi_open(a)
        witness = topo_closure(a) if args.closed else interior(a)
        data = {"kind": kind, "set": str(a), "holds": ok, "witness": str(witness) if ok else None}
        out.emit(data, f"{a}: {kind if ok else 'not ' + kind}" + (f" (witness {witness})" if ok else ""))
        return 0 if ok else 1
    if args.space is None or args.set is None:
        raise FormatError("<argv>: semi-open needs SPACE with --set, or --interval")
    space = _load(args.space, "space")
    names = [s for s in args.set.split(",") if s]
    try:
        mask = space.mask(names)
    except SpaceError as exc:
        raise FormatError(f"<--set>: {exc}") from None
    ok, witness = (space.is_semi_closed if args.closed else space.is_semi_open)(mask)
    data = {
        "kind": kind,
        "set": space.names(mask),
        "holds": ok,
        "witness": space.names(witness) if witness is not None else None,
        "interior": space.names(space.interior(mask)),
        "closure": space.names(space.closure(mask)),
    }
    text = f"{space.fmt(mask)}: {kind if ok else 'not ' + kind}"
    if witness is not None:
        text += f" (witness {space.fmt(witness)})"
    out.emit(data, text)
    return 0 if ok else 1


def cmd_classify(args, out: Output) -> int:
    f = _load(args.map, "map")
    if args.point is not None:
        try:
            p = f.domain.index(args.point)
        except SpaceError as exc:
            raise FormatError(f"<--point>: {exc}") from None
        r = classify_at(f, p)
        data = {
            "point": args.point,
            **{k: getattr(r, k) for k in ("so1", "so2", "so3")},
            "witnesses": {k: f.codomain.names(v) for k, v in sorted(r.witnesses.items())},
        }
        text = "\n".join(
            f"{k} at {args.point}: {'yes' if getattr(r, k) else 'no'}"
            + (f" (no neighbourhood maps into {f.codomain.fmt(r.witnesses[k])})" if k in r.witnesses else "")
            for k in ("so1", "so2", "so3")
        )
        out.emit(data, text)
        return 0
    r = classify(f)
    data = r.to_json(f)
    lines = []
    for k in ("continuous", "so1", "so2", "so3"):
        line = f"{k}: {'yes' if getattr(r, k) else 'no'}"
        if k in r.witnesses:
            v = r.witnesses[k]
            line += f" (preimage of {f.codomain.fmt(v.test_set)} is {f.domain.fmt(v.preimage)})"
        lines.append(line)
    out.emit(data, "\n".join(lines))
    return 0


def cmd_search(args, out: Output) -> int:
    try:
        r = search_counterexample(args.query, args.max_points, args.jobs)
    except MapError as exc:
        raise FormatError(f"<--query>: {exc}") from None
    data = r.to_json()
    if r.found:
        text = f"{r.query}: counterexample found after {r.checked} checks\n" + json.dumps(
            r.witness, sort_keys=True, ensure_ascii=False)
    else:
        text = f"{r.query}: no counterexample with at most {r.max_points} points ({r.checked} checks)"
    out.emit(data, text)
    return 1 if r.found else 0


# ---------------------------------------------------------------------------
# paths


def _path_json(p) -> dict:
    return p.to_json()


def cmd_check_path(args, out: Output) -> int:
    p = _load(args.path, "path")
    v = is_so_i_path(p, args.mode)
    data = {
        "path": str(p),
        "mode": args.mode,
        "holds": v.holds,
        "witness": None if v.holds else {"set": p.space.names(v.test_set), "preimage": str(v.preimage)},
    }
    text = f"{p}: so{args.mode} {'yes' if v.holds else 'no'}"
    if not v.holds:
        text += f" (preimage of {p.space.fmt(v.test_set)} is {v.preimage})"
    out.emit(data, text)
    return 0 if v.holds else 1


def cmd_compose(args, out: Output) -> int:
    a, b = _load(args.first, "path"), _load(args.second, "path")
    try:
        c = compose_paths(a, b)
    except PathError as exc:
        raise FormatError(f"{args.second}: {exc}") from None
    out.emit(_path_json(c), str(c))
    return 0


def cmd_invert(args, out: Output) -> int:
    c = inverse_path(_load(args.path, "path"))
    out.emit(_path_json(c), str(c))
    return 0


def cmd_connect(args, out: Output) -> int:
    space = _load(args.space, "space")
    try:
        x, y = space.index(args.x), space.index(args.y)
    except SpaceError as exc:
        raise FormatError(f"<argv>: {exc}") from None
    ok, path = path_connectivity(space, x, y, args.mode)
    data = {"from": args.x, "to": args.y, "mode": args.mode, "connected": ok,
            "witness": path.to_json() if path is not None else None}
    text = f"{args.x} -> {args.y}: " + (f"connected by {path}" if ok else f"not so{args.mode}-path connected")
    out.emit(data, text)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# certificates and slice families


def cmd_cert_verify(args, out: Output) -> int:
    bundle = CertificateBundle.load(args.bundle)
    if args.mode is not None:
        bundle.mode = args.mode
    if args.certificate is None:
        if bundle.inline is None:
            raise FormatError(f"{args.bundle}: no certificate file given and the bundle has no inline certificate")
        cert = bundle.certificate(bundle.inline, f"{args.bundle}:certificate")
    else:
        cert_path = Path(args.certificate)
        try:
            text = cert_path.read_text()
        except OSError as exc:
            raise FormatError(f"{cert_path}: cannot read: {exc.strerror}") from None
        cert = bundle.certificate(text, str(cert_path))
    try:
        j = check_certificate(cert)
    except CertificateError as exc:
        data = {"accepted": False, "mode": cert.mode, "node": exc.node, "rule": exc.rule,
                "hypothesis": exc.hypothesis, "statement": HYPOTHESES[exc.hypothesis], "detail": exc.detail}
        out.emit(data, f"rejected: {exc}")
        return 1
    data = {"accepted": True, "mode": j.mode, "rel_endpoints": j.rel, "lhs": str(j.lhs), "rhs": str(j.rhs)}
    out.emit(data, f"accepted: {j.lhs}  ~{j.mode}  {j.rhs}")
    return 0


def cmd_slices_verify(args, out: Output) -> int:
    fam = _load(args.family, "slices")
    r = verify_slices(fam, args.mode)
    joint = falsify_joint(fam, args.mode, args.grid) if args.grid else None
    ok = r.ok and joint is None
    space = fam.space
    data = {
        "mode": args.mode,
        "slices_ok": r.ok,
        "h0": str(r.h0),
        "h1": str(r.h1),
        "rel_endpoints": r.rel_endpoints,
        "checked": [str(t) for t in r.checked],
        "failures": [{"t": str(t), "set": space.names(b), "preimage": str(pre)} for t, b, pre in r.failures],
        "joint_grid": args.grid,
        "joint_violation": None if joint is None else {
            "set": space.names(joint.test_set), "s": str(joint.s), "t": str(joint.t)},
    }
    lines = [f"H0 = {r.h0}", f"H1 = {r.h1}", f"slices so{args.mode}: {'yes' if r.ok else 'no'} ({len(r.checked)} checked)"]
    lines += [f"  t={t}: preimage of {space.fmt(b)} is {pre}" for t, b, pre in r.failures]
    if args.grid:
        lines.append("joint search: " + ("no violation found" if joint is None
                                         else f"violation at (s,t)=({joint.s},{joint.t}) for {space.fmt(joint.test_set)}"))
    out.emit(data, "\n".join(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# loop tables


def _table(args):
    return _load(args.bundle, "table")


def _word(table, text: str):
    try:
        return table.check_word(parse_word(text))
    except GroupError as exc:
        raise FormatError(f"<word {text!r}>: {exc}") from None


def cmd_pi1_register(args, out: Output) -> int:
    table = _table(args)
    path = _load(args.path, "path")
    table = register_loop(table, args.name, path)
    data = table_to_json(table)
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    out.emit(data, f"registered {args.name} = {path}")
    return 0


def _cert_json(cert):
    return None if cert is None else certificate_to_bundle(cert)


def cmd_pi1_mul(args, out: Output) -> int:
    table = _table(args)
    w1, w2 = _word(table, args.w1), _word(table, args.w2)
    p = multiply(table, w1, w2)
    data = {"word": format_word(p.word), "certified": p.certificate is not None, "warning": p.warning or None,
            "certificate": _cert_json(p.certificate)}
    text = format_word(p.word) + (f"\nwarning: {p.warning}" if p.warning else "")
    out.emit(data, text)
    return 0


def cmd_pi1_inv(args, out: Output) -> int:
    table = _table(args)
    w = invert(_word(table, args.word))
    out.emit({"word": format_word(w)}, format_word(w))
    return 0


def cmd_pi1_realize(args, out: Output) -> int:
    table = _table(args)
    p = realize(table, _word(table, args.word))
    out.emit(p.to_json(), str(p))
    return 0


def cmd_pi1_equiv(args, out: Output) -> int:
    table = _table(args)
    e = equivalent(table, _word(table, args.w1), _word(table, args.w2), args.depth)
    steps = [describe_step(s) for s in e.steps]
    data = {"answer": e.answer, "depth": args.depth, "certified": e.certificate is not None, "steps": steps,
            "certificate": _cert_json(e.certificate)}
    out.emit(data, e.answer + "".join(f"\n  {s}" for s in steps))
    return 0 if e.answer == "yes" else 1


def cmd_pi1_rebase(args, out: Output) -> int:
    table = _table(args)
    gamma = _load(args.path, "path")
    w = _word(table, args.word)
    new, w2 = basepoint_change(table, gamma, w)
    data = {"table": table_to_json(new), "word": format_word(w2)}
    out.emit(data, f"basepoint {new.space.points[new.basepoint]}: {format_word(w2)}\n" + "\n".join(
        f"  {name} = {p}" for name, p in new.generators))
    return 0


def cmd_pi1_push(args, out: Output) -> int:
    table = _table(args)
    f = _load(args.map, "map")
    h = induced_hom(f, table)
    w = h(_word(table, args.word))
    data = {"table": table_to_json(h.target), "word": format_word(w)}
    out.emit(data, f"{format_word(w)}\n" + "\n".join(f"  {name} = {p}" for name, p in h.target.generators))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # --format is accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    def mode_arg(p, default=1):
        p.add_argument("--mode", "-i", type=int, choices=(1, 2, 3), default=default)

    parser = argparse.ArgumentParser(prog="semihomotopy")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("so-family", parents=[common], help="list the semi-open (or semi-closed) sets")
    p.add_argument("space")
    p.add_argument("--closed", action="store_true")
    p.set_defaults(run=cmd_so_family)

    p = sub.add_parser("semi-open", parents=[common], help="test one set of a finite space or of [0,1]")
    p.add_argument("space", nargs="?")
    p.add_argument("--set", help="comma separated point names")
    p.add_argument("--interval", help='interval text such as "[0,1/2) u {3/4}"')
    p.add_argument("--closed", action="store_true")
    p.set_defaults(run=cmd_semi_open)

    p = sub.add_parser("classify", parents=[common], help="so-i classification of a map")
    p.add_argument("--map", required=True)
    p.add_argument("--point")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("search", parents=[common], help="exhaustive counterexample search")
    p.add_argument("--query", required=True)
    p.add_argument("--max-points", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("check-path", parents=[common])
    p.add_argument("path")
    mode_arg(p)
    p.set_defaults(run=cmd_check_path)

    p = sub.add_parser("compose", parents=[common])
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(run=cmd_compose)

    p = sub.add_parser("invert", parents=[common])
    p.add_argument("path")
    p.set_defaults(run=cmd_invert)

    p = sub.add_parser("connect", parents=[common])
    p.add_argument("space")
    p.add_argument("x")
    p.add_argument("y")
    mode_arg(p)
    p.set_defaults(run=cmd_connect)

    cert = sub.add_parser("cert", parents=[common]).add_subparsers(dest="action", required=True)
    p = cert.add_parser("verify", parents=[common])
    p.add_argument("bundle")
    p.add_argument("certificate", nargs="?", help="s-expression file (default: the bundle's inline certificate)")
    p.add_argument("--mode", "-i", type=int, choices=(1, 2, 3), default=None, help="override the bundle's mode")
    p.set_defaults(run=cmd_cert_verify)

    sl = sub.add_parser("slices", parents=[common]).add_subparsers(dest="action", required=True)
    p = sl.add_parser("verify", parents=[common])
    p.add_argument("family")
    mode_arg(p)
    p.add_argument("--grid", type=int, default=0, help="also run the sampled joint search on this grid")
    p.set_defaults(run=cmd_slices_verify)

    pi = sub.add_parser("pi1", parents=[common]).add_subparsers(dest="action", required=True)
    p = pi.add_parser("register", parents=[common])
    p.add_argument("bundle")
    p.add_argument("--name", required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--out")
    p.set_defaults(run=cmd_pi1_register)
    p = pi.add_parser("mul", parents=[common])
    p.add_argument("bundle")
    p.add_argument("w1")
    p.add_argument("w2")
    p.set_defaults(run=cmd_pi1_mul)
    p = pi.add_parser("inv", parents=[common])
    p.add_argument("bundle")
    p.add_argument("word")
    p.set_defaults(run=cmd_pi1_inv)
    p = pi.add_parser("realize", parents=[common])
    p.add_argument("bundle")
    p.add_argument("word")
    p.set_defaults(run=cmd_pi1_realize)
    p = pi.add_parser("equiv", parents=[common])
    p.add_argument("bundle")
    p.add_argument("w1")
    p.add_argument("w2")
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(run=cmd_pi1_equiv)
    p = pi.add_parser("rebase", parents=[common])
    p.add_argument("bundle")
    p.add_argument("--path", required=True)
    p.add_argument("--word", default="", help="word to carry along (default: empty)")
    p.set_defaults(run=cmd_pi1_rebase)
    p = pi.add_parser("push", parents=[common])
    p.add_argument("bundle")
    p.add_argument("--map", required=True)
    p.add_argument("--word", default="", help="word to carry along (default: empty)")
    p.set_defaults(run=cmd_pi1_push)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.run(args, Output(args.format))
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
