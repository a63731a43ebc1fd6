"""Command-line front end.

Exit codes: 0 success, 2 mathematical failure (structure residual, modules not
isomorphic, inconclusive search), 3 bad input.  Failures print a JSON object
with an ``error`` key on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .dd_calculus import check_structure, check_u_equivariance, module_from_json, module_to_json, \
    reduce_module, to_dot
from .koszul_algebra import verify_ainfty_morphism
from .lspace_surgery_bimodule import SolverFailure, StructureFailure, UnstableWindow, build_bimodule
from .staircase import HFunction, MalformedH
from .trace_pairing import DepthExceeded, Inconclusive, UnsupportedInput, iso_check, pair

FIXTURE_ENV = "KOSZUL_SURGERY_FIXTURES"


class InputError(Exception):
    pass


class MathFailure(Exception):
    def __init__(self, kind: str, message: str, **extra):
        super().__init__(message)
        self.kind = kind
        self.extra = extra


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("koszul_surgery") / "fixtures"))


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    q = fixture_dir() / path
    if q.exists():
        return q
    raise InputError(f"no such file: {path}")


def load_json(path: str) -> dict:
    try:
        return json.loads(resolve(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def load_module(path: str):
    try:
        return module_from_json(load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a module ({exc})") from exc


def parse_window(text: str | None):
    if text is None:
        return None
    try:
        lo, hi = text.split(":")
        return Fraction(lo), Fraction(hi)
    except ValueError as exc:
        raise InputError(f"bad window {text!r}; expected a:b") from exc


def emit(args, module) -> None:
    if args.format == "dot":
        text = to_dot(module)
    else:
        text = json.dumps(module_to_json(module), indent=2, ensure_ascii=False) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    try:
        h = HFunction.from_json(load_json(args.hfile))
        m = build_bimodule(h, parse_window(args.window))
    except (MalformedH, UnstableWindow, SolverFailure) as exc:
        raise InputError(str(exc)) from exc
    except StructureFailure as exc:
        raise MathFailure("structure", str(exc), residual=exc.residual) from exc
    emit(args, m)
    return 0


def cmd_check(args) -> int:
    m = load_module(args.modfile)
    rep = check_structure(m, args.weight_cap, args.uprec)
    equiv = check_u_equivariance(m) if m.two_sided else None
    if not rep.ok:
        raise MathFailure("structure", "structure relation fails", residual=rep.lines())
    out = {"ok": True, "generators": len(m.generators), "arrows": len(m.terms)}
    if equiv is not None:
        out["u_equivariant"] = equiv
    print(json.dumps(out))
    return 0


def cmd_pair(args) -> int:
    x, y = load_module(args.xfile), load_module(args.yfile)
    try:
        p = pair(x, y, args.uprec, args.depth)
    except UnsupportedInput as exc:
        raise InputError(str(exc)) from exc
    except DepthExceeded as exc:
        raise MathFailure("depth", str(exc)) from exc
    emit(args, p)
    return 0


def cmd_reduce(args) -> int:
    emit(args, reduce_module(load_module(args.modfile), args.uprec))
    return 0


def cmd_iso(args) -> int:
    a, b = load_module(args.m1), load_module(args.m2)
    try:
        same = iso_check(a, b, args.uprec)
    except Inconclusive as exc:
        raise MathFailure("inconclusive", str(exc)) from exc
    print(json.dumps({"isomorphic": same}))
    return 0 if same else 2


def cmd_export_dot(args) -> int:
    args.format = "dot"
    emit(args, load_module(args.modfile))
    return 0


def cmd_bridge(args) -> int:
    rep = verify_ainfty_morphism(args.bridge_n, args.max_inputs, args.max_weight)
    out = {"ok": rep.ok, "checked": rep.checked}
    if not rep.ok:
        raise MathFailure("bridge", rep.detail, counterexample=[str(c) for c in rep.counterexample or ()])
    print(json.dumps(out))
    return 0


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="koszul-surgery",
                                description="Build, verify, pair and reduce surgery bimodules.")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp, fmt=True):
        sp.add_argument("-o", "--output")
        if fmt:
            sp.add_argument("--format", choices=("json", "dot"), default="json")

    b = sub.add_parser("build", help="build the bimodule of an H-function")
    b.add_argument("hfile")
    b.add_argument("--window", help="s1 window a:b (write --window=-2:2 for negative a)")
    out_opts(b)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="verify the structure relation")
    c.add_argument("modfile")
    c.add_argument("--uprec", type=int)
    c.add_argument("--weight-cap", type=int)
    c.set_defaults(func=cmd_check)

    pr = sub.add_parser("pair", help="pair a type-D module with a bimodule")
    pr.add_argument("xfile")
    pr.add_argument("yfile")
    pr.add_argument("--uprec", type=int, default=8)
    pr.add_argument("--depth", type=int, default=8)
    out_opts(pr)
    pr.set_defaults(func=cmd_pair)

    r = sub.add_parser("reduce", help="cancel unit arrows")
    r.add_argument("modfile")
    r.add_argument("--uprec", type=int, default=8)
    out_opts(r)
    r.set_defaults(func=cmd_reduce)

    i = sub.add_parser("iso", help="compare two reduced type-D modules")
    i.add_argument("m1")
    i.add_argument("m2")
    i.add_argument("--uprec", type=int, default=8)
    i.set_defaults(func=cmd_iso)

    e = sub.add_parser("export-dot", help="write a module as a DOT diagram")
    e.add_argument("modfile")
    out_opts(e, fmt=False)
    e.set_defaults(func=cmd_export_dot)

    br = sub.add_parser("bridge", help="check the A-infinity morphism between the dual algebras")
    br.add_argument("--bridge-n", type=int, default=4)
    br.add_argument("--max-inputs", type=int, default=3)
    br.add_argument("--max-weight", type=int, default=10)
    br.set_defaults(func=cmd_bridge)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        if getattr(args, "uprec", None) is not None and args.uprec < 1:
            raise InputError("--uprec must be at least 1")
        return args.func(args)
    except InputError as exc:
        print(json.dumps({"error": "input", "message": str(exc)}))
        return 3
    except MathFailure as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc), **exc.extra}, ensure_ascii=False))
        return 2


if __name__ == "__main__":
    sys.exit(main())
