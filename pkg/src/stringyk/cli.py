"""Command-line front end: ``stringyk <command> [options]`` writes one JSON document.

Exit codes: 0 success, 1 invalid input, 2 a mathematical check failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .acceptance import CRITERIA, DEFAULT_UPTO, run_all
from .characters import character_table
from .class_functions import table_to_json
from .cyclotomic import Cyclotomic
from .errors import InvariantViolation
from .finite_orbifold import (
    DelocalizedCharacter,
    FiniteOrbifold,
    KClass,
    pontryagin_product,
    stringy_formula,
    tensor_product,
)
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupError, builtin, from_permutations, from_table
from .local_model import UnitaryModel, from_weights, permutation_model, regular_model, sector_report, standard_model
from .orbisphere import PINNED_TAU, OrbisphereModel, report_json

__all__ = ["main", "build_parser", "parse_group", "parse_rep", "load_schema", "schema_name"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def load_schema(name: str) -> dict:
    """The shipped JSON schema ``schema/<name>.json``."""
    return json.loads(resources.files("stringyk").joinpath("schema", f"{name}.json").read_text())


def schema_name(doc: dict) -> str:
    """Which shipped schema a report document follows."""
    cmd = doc["command"]
    if cmd in ("ptg", "gg"):
        return "compare" if "tables" in doc else "products"
    return cmd


# ----- input specs ------------------------------------------------------------------


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def parse_group(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Zn, Sn, An, Dn, Q8, products such as Z2xZ2, or file:PATH (JSON with "table" or "generators")."""
    if spec.startswith("file:"):
        data = _load_json(spec[5:])
        if not isinstance(data, dict):
            raise UsageError("group file must hold a JSON object")
        name = data.get("name", Path(spec[5:]).stem)
        kind = data.get("kind") or ("table" if "table" in data else "perm" if "generators" in data else None)
        if kind == "table":
            return from_table(data["table"], names=data.get("names"), order_cap=order_cap, name=name)
        if kind == "perm":
            return from_permutations(data["generators"], order_cap=order_cap, name=name)
        if kind == "family":
            return builtin(data["family"])
        raise UsageError('group file needs "kind": "table" | "perm" | "family"')
    return builtin(spec)


def _entry(x) -> Cyclotomic:
    if isinstance(x, dict):
        return Cyclotomic.from_json(x)
    if isinstance(x, (int, str)):
        return Cyclotomic(x)
    raise UsageError(f"matrix entry {x!r} is neither a rational nor a cyclotomic object")


def parse_rep(spec: str, G: FiniteGroup) -> UnitaryModel:
    """weights:a,b,.. (cyclic groups), standard, regular, perm, or file:PATH (JSON "matrices")."""
    if spec.startswith("weights:"):
        if G.name != f"Z{G.order}":
            raise UsageError("weights:... needs a cyclic group Zn")
        try:
            weights = [int(w) for w in spec[8:].split(",") if w.strip()]
        except ValueError as exc:
            raise UsageError(f"bad weight list {spec[8:]!r}") from exc
        return from_weights(G, weights)
    if spec == "standard":
        return standard_model(G)
    if spec == "regular":
        return regular_model(G)
    if spec == "perm":
        return permutation_model(G)
    if spec.startswith("file:"):
        data = _load_json(spec[5:])
        mats = [[[_entry(x) for x in row] for row in m] for m in data.get("matrices", [])]
        return UnitaryModel(G, mats, name=data.get("name", Path(spec[5:]).stem))
    raise UsageError(f"unknown representation spec {spec!r}")


# ----- commands -----------------------------------------------------------------------


def _group_json(G: FiniteGroup) -> dict:
    cd = G.conjugacy
    return {
        "group": G.name,
        "order": G.order,
        "exponent": G.exponent,
        "abelian": bool(G.is_abelian),
        "elements": list(G.names),
        "classes": [
            {
                "representative": G.names[c[0]],
                "size": len(c),
                "elements": [G.names[x] for x in c],
                "centralizer_order": len(G.centralizer(c[0])),
            }
            for c in cd.classes
        ],
    }


def cmd_group(args) -> tuple[dict, bool]:
    G = parse_group(args.group, args.order_cap)
    return {"command": "group", **_group_json(G)}, True


def cmd_chartable(args) -> tuple[dict, bool]:
    G = parse_group(args.group, args.order_cap)
    T = character_table(G)
    checks = {
        "row_orthogonality": T.row_orthogonality_ok(),
        "column_orthogonality": T.column_orthogonality_ok(),
        "degree_sum": T.degree_sum_ok(),
    }
    return {"command": "chartable", **T.to_json(), "checks": checks}, all(checks.values())


def _basis_labels(X: FiniteOrbifold) -> list[list[str]]:
    lam, G = X.inertia, X.group
    out = []
    for orb in lam.orbits:
        s, g = lam.point[orb[0]], lam.sector[orb[0]]
        label = X.S.labels[s] if X.S.labels is not None else s
        out.append([str(label) if X.S.size == 1 else str(G.names[label]), str(G.names[g])])
    return out


def _product_fn(name: str, X: FiniteOrbifold):
    if name == "stringy":
        return lambda a, b: X.stringy(a, b)
    if name == "tensor":
        return lambda a, b: tensor_product(a, b, X)
    if name == "pontryagin":
        if X.S.size == 1 and X.group.order > 1:
            raise UsageError("the Pontryagin product is defined on [G/G], not on [pt/G]")
        return lambda a, b: pontryagin_product(a, b, X)
    if name == "convolution":
        return lambda a, b: KClass(stringy_formula(a.character, b.character))
    raise UsageError(f"unknown product {name!r}")


def _table(X: FiniteOrbifold, product: str):
    f = _product_fn(product, X)
    return X.structure_constants(f)


def _orbifold_json(X: FiniteOrbifold, command: str, product: str) -> dict:
    return {
        "command": command,
        "orbifold": X.name,
        "group": X.group.name,
        "product": product,
        "basis": _basis_labels(X),
        "structure_constants": table_to_json(_table(X, product)),
    }


def cmd_ptg(args) -> tuple[dict, bool]:
    X = FiniteOrbifold.point(parse_group(args.group, args.order_cap))
    return _orbifold_json(X, "ptg", args.product), True


def cmd_gg(args) -> tuple[dict, bool]:
    X = FiniteOrbifold.adjoint(parse_group(args.group, args.order_cap))
    if not args.compare_products:
        return _orbifold_json(X, "gg", args.product), True
    names = ("tensor", "pontryagin", "stringy")
    tables = {n: _table(X, n) for n in names}
    distinct = {f"{a}!={b}": tables[a] != tables[b] for a, b in itertools.combinations(names, 2)}
    equal = [[tables[a] == tables[b] for b in names] for a in names]
    out = {
        "command": "gg",
        "orbifold": X.name,
        "group": X.group.name,
        "basis": _basis_labels(X),
        "tables": {n: table_to_json(t) for n, t in tables.items()},
        "products": list(names),
        "equal": equal,
        "distinct": distinct,
        "pairwise_distinct": all(distinct.values()),
    }
    return out, True


def cmd_linear(args) -> tuple[dict, bool]:
    G = parse_group(args.group, args.order_cap)
    M = parse_rep(args.rep, G)
    rep = sector_report(M, pairs=args.report == "obstruction")
    return {"command": "linear", "report": args.report, **rep}, True


def cmd_orbisphere(args) -> tuple[dict, bool]:
    try:
        M = OrbisphereModel(args.p, args.q, tau=_fraction(args.tau), twisted_pairing=args.pairing)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {"command": "orbisphere", **report_json(M, verify=args.verify)}
    ok = True
    if args.verify:
        ok = all(v is not False for v in out["checks"].values()) and out["residual"]["single_tau_suffices"]
    return out, ok


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}") from exc
    if value == 0:
        raise UsageError("tau must be nonzero")
    return value


def _parse_upto(spec: str | None) -> int:
    if spec is None:
        return DEFAULT_UPTO
    if not spec.startswith("upto:") or not spec[5:].isdigit():
        raise UsageError("--groups expects upto:N")
    return int(spec[5:])


def cmd_selftest(args) -> tuple[dict, bool]:
    upto = _parse_upto(args.groups)
    only = None
    if args.only:
        only = sorted({int(x) for x in args.only.split(",")})
        if any(n not in CRITERIA for n in only):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = run_all(upto=upto, seed=args.seed, only=only)
    for r in results:
        print(r.line(), file=sys.stderr)
    out = {
        "command": "selftest",
        "upto": upto,
        "seed": args.seed,
        "criteria": [r.to_json() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    return out, out["all_passed"]


COMMANDS = {
    "group": cmd_group,
    "chartable": cmd_chartable,
    "ptg": cmd_ptg,
    "gg": cmd_gg,
    "linear": cmd_linear,
    "orbisphere": cmd_orbisphere,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", default="Z2", help="Zn | Sn | An | Dn | Q8 | GxH | file:PATH")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP, help="largest group order accepted from files")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = _Parser(prog="stringyk", description="Stringy K-theory of finite orbifold models.")
    parser.add_argument("--version", action="version", version=f"stringyk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("group", parents=[common], help="multiplication data and conjugacy classes")
    sub.add_parser("chartable", parents=[common], help="character table")
    p = sub.add_parser("ptg", parents=[common], help="products on K_G(pt) (x) C")
    p.add_argument("--product", default="stringy", choices=["stringy", "tensor", "convolution"])
    p = sub.add_parser("gg", parents=[common], help="products on K_G(G) (x) C")
    p.add_argument("--product", default="stringy", choices=["stringy", "tensor", "pontryagin", "convolution"])
    p.add_argument("--compare-products", action="store_true")
    p = sub.add_parser("linear", parents=[common], help="sectors and obstructions of a linear chart [V/G]")
    p.add_argument("--rep", default="standard", help="weights:a,b,.. | standard | regular | perm | file:PATH")
    p.add_argument("--report", default="sectors", choices=["sectors", "obstruction"])
    p = sub.add_parser("orbisphere", parents=[common], help="the weighted projective line WP(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--pairing", default="orbifold", choices=["orbifold", "unit"])
    p.add_argument("--tau", default=str(PINNED_TAU), help="integral of the point class, e.g. 1/2")
    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--groups", help="upto:N widens the group sweeps")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc, ok = COMMANDS[args.command](args)
    except InvariantViolation as exc:
        print(f"stringyk: invariant violation: {exc}", file=sys.stderr)
        return 2
    except (UsageError, GroupError, ValueError, KeyError) as exc:
        print(f"stringyk: error: {exc}", file=sys.stderr)
        return 1
    try:
        _emit(doc, args.out)
    except OSError as exc:
        print(f"stringyk: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
