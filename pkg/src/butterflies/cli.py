"""Command-line front end with a content-addressed object store.

Objects are stored under their canonical-serialization hash, so identical
objects share one entry and refs are reproducible across machines.  The
workspace root comes from --workspace, else BUTTERFLY_WORKSPACE, else
./.butterfly_workspace.  Exit codes: 0 ok, 1 domain failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import sys
from pathlib import Path
from typing import Any, Optional

from . import jsonio
from .butterfly import (
    compose,
    flip,
    identity_butterfly,
    is_flippable,
    isomorphic_butterflies,
    span_of_butterfly,
    split_from_morphism,
    validate_butterfly,
)
from .errors import ButterflyError, ParseError, UnknownKind, UnknownSuite
from .extension import classify_extensions, factor_set_oracle
from .fingroup import FinGroup, cyclic_group, direct_product, symmetric_group, trivial_group
from .laws import SUITES, generate_fixtures
from .report import ValidationReport
from .weakmap import butterfly_from_monoidal, check_monoidal, extract_monoidal, set_section
from .xmod import validate_crossed_module, validate_two_group, validate_xmod_morphism

ENV_WORKSPACE = "BUTTERFLY_WORKSPACE"


class Workspace:
    """Content-addressed store: objects/<sha256>.json plus an index file."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.objects = self.root / "objects"
        self.index_path = self.root / "index.json"
        self.lock_path = self.root / ".lock"

    def _ensure(self) -> None:
        self.objects.mkdir(parents=True, exist_ok=True)
        if not self.index_path.exists():
            self.index_path.write_text("{}")

    def _locked(self):
        self._ensure()
        fd = open(self.lock_path, "w")
        fcntl.flock(fd, fcntl.LOCK_EX)
        return fd

    def put(self, obj: Any) -> str:
        data = jsonio.to_jsonable(obj)
        blob = jsonio.canonical_bytes(data)
        ref = jsonio.content_ref(data)
        lock = self._locked()
        try:
            path = self.objects / f"{ref}.json"
            if not path.exists():
                path.write_bytes(blob)
            index = json.loads(self.index_path.read_text())
            if ref not in index:
                index[ref] = {"kind": data.get("kind", "unknown")}
                tmp = self.index_path.with_suffix(".tmp")
                tmp.write_text(json.dumps(index, sort_keys=True, indent=1))
                tmp.replace(self.index_path)
        finally:
            fcntl.flock(lock, fcntl.LOCK_UN)
            lock.close()
        return ref

    def get(self, ref: str) -> dict:
        self._ensure()
        index = json.loads(self.index_path.read_text())
        matches = [r for r in sorted(index) if r.startswith(ref)]
        if not matches:
            raise ParseError(f"no stored object matches {ref!r}")
        if len(matches) > 1:
            raise ParseError(f"ambiguous ref {ref!r}: {len(matches)} matches")
        return json.loads((self.objects / f"{matches[0]}.json").read_text())

    def ls(self) -> list[tuple[str, str]]:
        self._ensure()
        index = json.loads(self.index_path.read_text())
        return [(ref, index[ref].get("kind", "?")) for ref in sorted(index)]


def parse_group_spec(spec: str) -> Optional[FinGroup]:
    """Builtin group names: 1, Zn, V4, Sn, and x-products of these."""
    def atom(s: str) -> Optional[FinGroup]:
        if s == "1":
            return trivial_group()
        if s in ("V4", "K4"):
            return direct_product(cyclic_group(2), cyclic_group(2))[0]
        if s.startswith("Z") and s[1:].isdigit():
            return cyclic_group(int(s[1:]))
        if s.startswith("S") and s[1:].isdigit() and 1 <= int(s[1:]) <= 4:
            return symmetric_group(int(s[1:]))
        return None

    parts = spec.split("x")
    groups = [atom(p) for p in parts]
    if any(g is None for g in groups):
        return None
    out = groups[0]
    for g in groups[1:]:
        out = direct_product(out, g)[0]
    out.name = spec
    return out


def _load_json_arg(arg: str, ws: Workspace) -> dict:
    path = Path(arg)
    if path.exists():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{arg}: malformed JSON: {exc}") from exc
    return ws.get(arg)


def _load_object(arg: str, ws: Workspace):
    return jsonio.from_jsonable(_load_json_arg(arg, ws), resolver=ws.get)


def _load_group_arg(arg: str, ws: Workspace) -> FinGroup:
    builtin = parse_group_spec(arg)
    if builtin is not None:
        return builtin
    obj = _load_object(arg, ws)
    if not isinstance(obj, FinGroup):
        raise ParseError(f"{arg} is not a group")
    return obj


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)


def _validation_report(obj) -> ValidationReport:
    from .butterfly import Butterfly
    from .weakmap import MonoidalFunctor
    from .xmod import CrossedModule, Strict2Group, XModMorphism

    if isinstance(obj, FinGroup):
        return ValidationReport(f"group {obj.name}")
    if isinstance(obj, CrossedModule):
        return validate_crossed_module(obj)
    if isinstance(obj, Strict2Group):
        return validate_two_group(obj)
    if isinstance(obj, Butterfly):
        report = validate_butterfly(obj)
        for sub in (validate_crossed_module(obj.dom), validate_crossed_module(obj.cod)):
            for f in sub.findings:
                report.add(f"underlying-xmod:{f.condition}", f.witness, f.detail)
        return report
    if isinstance(obj, XModMorphism):
        return validate_xmod_morphism(obj)
    if isinstance(obj, MonoidalFunctor):
        return check_monoidal(obj)
    raise UnknownKind(f"cannot validate {type(obj).__name__}")


def cmd_validate(args, ws: Workspace) -> int:
    obj = _load_object(args.object, ws)
    report = _validation_report(obj)
    _emit(args, report.to_json(), str(report))
    return 0 if report.ok else 1


def cmd_identity(args, ws: Workspace) -> int:
    from .xmod import CrossedModule

    obj = _load_object(args.xmod, ws)
    if not isinstance(obj, CrossedModule):
        raise ParseError("identity expects a crossed module")
    B = identity_butterfly(obj)
    ref = ws.put(B)
    _emit(args, {"ref": ref}, ref)
    return 0


def cmd_compose(args, ws: Workspace) -> int:
    from .butterfly import Butterfly

    B1 = _load_object(args.first, ws)
    B2 = _load_object(args.second, ws)
    if not isinstance(B1, Butterfly) or not isinstance(B2, Butterfly):
        raise ParseError("compose expects two butterflies")
    C = compose(B1, B2)
    ref = ws.put(C)
    payload: dict = {"ref": ref}
    lines = [ref]
    if args.check:
        report = validate_butterfly(C)
        payload["check"] = report.to_json()
        lines.append(str(report))
    if args.witness:
        for label, other in (("first", B1), ("second", B2)):
            if other.dom == C.dom and other.cod == C.cod:
                w = isomorphic_butterflies(C, other)
                if w is not None:
                    payload[f"witness_{label}"] = list(w.f.map)
                    lines.append(f"isomorphic to {label} input via {list(w.f.map)}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_flip(args, ws: Workspace) -> int:
    from .butterfly import Butterfly

    B = _load_object(args.butterfly, ws)
    if not isinstance(B, Butterfly):
        raise ParseError("flip expects a butterfly")
    if not is_flippable(B):
        print("NotFlippable: the (kappa, rho) diagonal is not an extension", file=sys.stderr)
        return 1
    ref = ws.put(flip(B))
    _emit(args, {"ref": ref}, ref)
    return 0


def cmd_split(args, ws: Workspace) -> int:
    from .xmod import XModMorphism

    P = _load_object(args.morphism, ws)
    if not isinstance(P, XModMorphism):
        raise ParseError("split expects a crossed module morphism")
    B, section = split_from_morphism(P)
    ref = ws.put(B)
    _emit(
        args,
        {"ref": ref, "section": list(section.map)},
        f"{ref}\nsection {list(section.map)}",
    )
    return 0


def cmd_span(args, ws: Workspace) -> int:
    from .butterfly import Butterfly

    B = _load_object(args.butterfly, ws)
    if not isinstance(B, Butterfly):
        raise ParseError("span expects a butterfly")
    middle, left, right = span_of_butterfly(B)
    refs = {
        "middle": ws.put(middle),
        "left": ws.put(left),
        "right": ws.put(right),
    }
    _emit(args, refs, "\n".join(f"{k} {v}" for k, v in refs.items()))
    return 0


def cmd_weakmap(args, ws: Workspace) -> int:
    from .butterfly import Butterfly
    from .weakmap import MonoidalFunctor

    if args.mode == "extract":
        B = _load_object(args.object, ws)
        if not isinstance(B, Butterfly):
            raise ParseError("weakmap extract expects a butterfly")
        if args.section is None:
            raise ParseError("weakmap extract requires --section")
        try:
            values = tuple(int(v) for v in args.section.split(","))
        except ValueError as exc:
            raise ParseError(f"bad section list: {exc}") from exc
        M = extract_monoidal(B, set_section(B, values))
        ref = ws.put(M)
        _emit(args, {"ref": ref, "monoidal": jsonio.to_jsonable(M)}, ref)
        return 0
    M = _load_object(args.object, ws)
    if not isinstance(M, MonoidalFunctor):
        raise ParseError("weakmap assemble expects a monoidal functor")
    B = butterfly_from_monoidal(M)
    ref = ws.put(B)
    _emit(args, {"ref": ref}, ref)
    return 0


def cmd_classify(args, ws: Workspace) -> int:
    H = _load_group_arg(args.H, ws)
    G = _load_group_arg(args.G, ws)
    classes = classify_extensions(H, G, bound=args.bound)
    rows = []
    for cls in classes:
        rows.append(
            {
                "E": cls.e_group,
                "split": cls.split,
                "count": cls.count,
                "factor_set": {"phi": list(cls.factor_set.phi), "f": [list(r) for r in cls.factor_set.f]},
                "butterfly": ws.put(cls.butterfly),
            }
        )
    payload: dict = {"H": H.name, "G": G.name, "classes": rows}
    lines = [f"{len(classes)} extension class(es) of {H.name} by {G.name}"]
    for row in rows:
        lines.append(f"  E={row['E']} split={row['split']} cocycles={row['count']} ref={row['butterfly'][:12]}")
    status = 0
    if args.oracle:
        oracle = factor_set_oracle(H, G, bound=args.bound)
        payload["oracle_classes"] = len(oracle)
        agree = len(oracle) == len(classes)
        payload["agree"] = agree
        lines.append(f"oracle classes: {len(oracle)} ({'agree' if agree else 'MISMATCH'})")
        if not agree:
            status = 1
    if args.csv:
        n_split = sum(1 for c in classes if c.split)
        lines = [f"{H.name},{G.name},{len(classes)},{n_split}"]
        payload["csv"] = lines[0]
    _emit(args, payload, "\n".join(lines))
    return status


def cmd_suite(args, ws: Workspace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UnknownSuite(f"unknown suite {name!r}; available: {', '.join(SUITES)} or all")
    fx = generate_fixtures(args.seed, args.bound)
    status = 0
    payload = []
    lines = []
    for name in names:
        report = SUITES[name](fx, fault=args.fault)
        payload.append(report.to_json())
        lines.append(str(report))
        if not report.ok:
            status = 1
    _emit(args, {"reports": payload}, "\n".join(lines))
    return status


def cmd_store(args, ws: Workspace) -> int:
    if args.action == "ls":
        entries = ws.ls()
        _emit(
            args,
            {"objects": [{"ref": r, "kind": k} for r, k in entries]},
            "\n".join(f"{r}  {k}" for r, k in entries) or "(empty)",
        )
        return 0
    if not args.ref:
        raise ParseError("store get requires a ref")
    data = ws.get(args.ref)
    print(json.dumps(data, indent=1, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="butterflies",
        description="Exact computation with crossed modules, 2-groups and butterflies.",
    )
    parser.add_argument("--workspace", help="object store root (overrides BUTTERFLY_WORKSPACE)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a stored or on-disk object")
    p.add_argument("object")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("identity", help="identity butterfly of a crossed module")
    p.add_argument("xmod")
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("compose", help="compose two butterflies")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--check", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("flip", help="flip a flippable butterfly")
    p.add_argument("butterfly")
    p.set_defaults(func=cmd_flip)

    p = sub.add_parser("split", help="split butterfly of a crossed module morphism")
    p.add_argument("morphism")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("span", help="span of a butterfly")
    p.add_argument("butterfly")
    p.set_defaults(func=cmd_span)

    p = sub.add_parser("weakmap", help="butterfly <-> monoidal functor dictionary")
    p.add_argument("mode", choices=("extract", "assemble"))
    p.add_argument("object")
    p.add_argument("--section", help="comma-separated section values for extract")
    p.set_defaults(func=cmd_weakmap)

    p = sub.add_parser("classify", help="classify extensions of H by G")
    p.add_argument("H")
    p.add_argument("G")
    p.add_argument("--oracle", action="store_true", help="cross-check with the factor-set oracle")
    p.add_argument("--bound", type=int, default=16)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("suite", help="run a law suite")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--fault", default=None, help="fault-injection mode (suites must fail)")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("store", help="inspect the object store")
    p.add_argument("action", choices=("ls", "get"))
    p.add_argument("ref", nargs="?")
    p.set_defaults(func=cmd_store)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    root = args.workspace or os.environ.get(ENV_WORKSPACE) or ".butterfly_workspace"
    ws = Workspace(Path(root))
    try:
        return args.func(args, ws)
    except (ParseError, UnknownKind, UnknownSuite) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ButterflyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"invalid object: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
