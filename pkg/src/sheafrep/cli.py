"""Command-line surface: validation, decomposition, sheafification,
named-module constructors, Ore checks, invariant dimensions, and corpus
reports.

Exit codes: 0 success, 1 mathematical check failure, 2 usage or I/O error.
All output is deterministic: JSON with sorted keys and "p/q" rationals.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .combinat import Partition
from .modcore import TruncatedModule, cokernel_morphism
from .nakayama import (
    composition_factors_sheaf,
    generation_degree,
    is_saturated,
    presentation_degree,
    sheafify,
    simple_saturated,
    simple_saturated_oi,
)
from .oimod import kn_by_intersection
from .skelcat import CatKind, kronecker_quiver_category, left_ore_check
from .torsion import is_separated, torsion_submodule
from . import serialize
from .artin import invariants_F

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2

WINDOW_CAP = 10


class UsageError(Exception):
    """Bad input: malformed file, schema violation, out-of-range argument."""


class MathFailure(Exception):
    """A mathematical check failed; the message locates the violation."""


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _partition_label(p: Partition) -> str:
    return "(" + ",".join(str(x) for x in p.parts) + ")"


def _factors_json(factors: dict) -> dict:
    out = {}
    for key, mult in factors.items():
        label = _partition_label(key) if isinstance(key, Partition) else str(key)
        out[label] = mult
    return out


def _load_module(path: str) -> TruncatedModule:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: malformed JSON ({e.msg} at line {e.lineno})") from e
    try:
        return serialize.module_from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path}: schema violation ({e})") from e


def _check_window(window: int) -> None:
    if not 0 <= window <= WINDOW_CAP:
        raise UsageError(f"window must lie in 0..{WINDOW_CAP}")


# -- subcommands ---------------------------------------------------------------


def _cmd_check(args) -> int:
    v = _load_module(args.file)
    report = v.validate()
    if not report.ok:
        raise MathFailure(f"{args.file}: {report.message}")
    _emit({"file": args.file, "ok": True})
    return EXIT_OK


def _cmd_decompose(args) -> int:
    v = _load_module(args.file)
    if v.kind != CatKind.FI:
        raise UsageError("decompose applies to FI modules only")
    if not 0 <= args.degree <= v.window:
        raise UsageError(f"degree must lie in 0..{v.window}")
    factors = v.decompose_degree(args.degree)
    _emit(_factors_json(factors))
    return EXIT_OK


def _cmd_sheafify(args) -> int:
    v = _load_module(args.file)
    sheaf, unit = sheafify(v)
    serialize.save(sheaf, args.output)
    defect, _ = cokernel_morphism(unit)
    _emit(
        {
            "unit_iso": unit.is_isomorphism(),
            "defect_dims": list(defect.dims),
            "factors": _factors_json(composition_factors_sheaf(v)),
        }
    )
    return EXIT_OK


def _cmd_simple(args) -> int:
    _check_window(args.window)
    if args.cat == "fi":
        if args.lam is None:
            raise UsageError("--lambda is required for --cat fi")
        lam = _parse_partition(args.lam)
        v = simple_saturated(lam, args.window)
    else:
        if args.n is None:
            raise UsageError("--n is required for --cat oi")
        v = simple_saturated_oi(args.n, args.window)
    if args.output:
        serialize.save(v, args.output)
    _emit({"kind": v.kind.value, "window": v.window, "dims": v.dims})
    return EXIT_OK


def _cmd_kn(args) -> int:
    _check_window(args.window)
    if args.n < 0:
        raise UsageError("n must be nonnegative")
    if args.n + 1 > args.window:
        raise UsageError("window too small: need window >= n + 1")
    v = kn_by_intersection(args.n, args.window)
    if args.output:
        serialize.save(v, args.output)
    _emit({"kind": v.kind.value, "window": v.window, "dims": v.dims})
    return EXIT_OK


def _cmd_ore(args) -> int:
    if args.bound < 0:
        raise UsageError("bound must be nonnegative")
    if args.cat == "kronecker":
        result = left_ore_check(kronecker_quiver_category(), args.bound)
    else:
        result = left_ore_check(CatKind.FI if args.cat == "fi" else CatKind.OI, args.bound)
    if isinstance(result, list):
        _emit({"category": args.cat, "bound": args.bound, "ok": True, "witnesses": len(result)})
        return EXIT_OK
    _emit(
        {
            "category": args.cat,
            "bound": args.bound,
            "ok": False,
            "failure": {"f": str(result.f), "f_prime": str(result.f_prime)},
        }
    )
    return EXIT_MATH


def _cmd_artin_invariants(args) -> int:
    n, i, m = args.n, args.i, args.horizon
    if n < 0 or i < 0:
        raise UsageError("n and i must be nonnegative")
    if m < max(i, n) + 1:
        raise UsageError(f"horizon too small: need horizon >= {max(i, n) + 1}")
    dim = invariants_F(n, i, m).dim
    stable = invariants_F(n, i, m + 1).dim == dim
    _emit({"n": n, "i": i, "horizon": m, "dimension": dim, "stable": stable})
    return EXIT_OK


def _cmd_stable_range(args) -> int:
    v = _load_module(args.file)
    try:
        bounds = presentation_degree(v)
    except ValueError as e:
        raise MathFailure(f"{args.file}: {e}") from e
    _emit(
        {
            "generation_degree": bounds.gen_degree,
            "relation_degree": bounds.rel_degree,
            "presentation_degree": bounds.presentation_degree,
        }
    )
    return EXIT_OK


def _report_row(name: str, v: TruncatedModule) -> dict:
    torsion_dims = torsion_submodule(v).torsion_part.dims
    row = {
        "name": name,
        "kind": v.kind.value,
        "separated": is_separated(v),
        "saturated": is_saturated(v),
        "torsion_dims": torsion_dims,
        "factors": _factors_json(composition_factors_sheaf(v)),
        "generation_degree": generation_degree(v),
    }
    try:
        row["presentation_degree"] = presentation_degree(v).presentation_degree
    except ValueError:
        row["presentation_degree"] = None
    return row


def _markdown_report(rows: list[dict], unreadable: list[dict]) -> str:
    cols = [
        "name",
        "kind",
        "separated",
        "saturated",
        "torsion_dims",
        "factors",
        "generation_degree",
        "presentation_degree",
    ]
    lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for row in rows:
        cells = []
        for c in cols:
            val = row[c]
            if isinstance(val, dict):
                val = ", ".join(f"{k}:{v}" for k, v in sorted(val.items()))
            elif isinstance(val, (list, tuple)):
                val = ",".join(str(x) for x in val)
            cells.append(str(val))
        lines.append("| " + " | ".join(cells) + " |")
    for entry in unreadable:
        lines.append(f"unreadable: {entry['name']} ({entry['error']})")
    return "\n".join(lines) + "\n"


def _cmd_report(args) -> int:
    if not os.path.isdir(args.dir):
        raise UsageError(f"{args.dir}: not a directory")
    rows: list[dict] = []
    unreadable: list[dict] = []
    for name in sorted(os.listdir(args.dir)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(args.dir, name)
        try:
            v = _load_module(path)
            report = v.validate()
            if not report.ok:
                raise ValueError(report.message)
            rows.append(_report_row(name, v))
        except (UsageError, ValueError) as e:
            unreadable.append({"name": name, "error": str(e)})
    if args.format == "markdown":
        sys.stdout.write(_markdown_report(rows, unreadable))
    else:
        _emit({"modules": rows, "unreadable": unreadable})
    return EXIT_OK


def _parse_partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as e:
        raise UsageError(f"bad partition {text!r}: {e}") from e


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 by default; keep the behaviour but route the
        # message through stderr in one place.
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sheafrep", description="Truncated FI/OI module toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("check", help="validate a module file")
    q.add_argument("file")
    q.set_defaults(func=_cmd_check)

    q = sub.add_parser("decompose", help="irreducible multiplicities at one degree")
    q.add_argument("file")
    q.add_argument("--degree", type=int, required=True)
    q.set_defaults(func=_cmd_decompose)

    q = sub.add_parser("sheafify", help="sheafify a module and report the unit")
    q.add_argument("file")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=_cmd_sheafify)

    q = sub.add_parser("simple", help="build a simple saturated module")
    q.add_argument("--cat", choices=["fi", "oi"], required=True)
    q.add_argument("--lambda", dest="lam", help="partition, e.g. 2,1")
    q.add_argument("--n", type=int, help="OI index")
    q.add_argument("--window", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_simple)

    q = sub.add_parser("kn", help="OI simple via coface-difference intersections")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--window", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=_cmd_kn)

    q = sub.add_parser("ore", help="left Ore condition check")
    q.add_argument("--cat", choices=["fi", "oi", "kronecker"], required=True)
    q.add_argument("--bound", type=int, required=True)
    q.set_defaults(func=_cmd_ore)

    q = sub.add_parser("artin", help="group-side computations")
    asub = q.add_subparsers(dest="artin_command", required=True)
    qi = asub.add_parser("invariants", help="dimension of open-stabilizer invariants")
    qi.add_argument("--n", type=int, required=True)
    qi.add_argument("--i", type=int, required=True)
    qi.add_argument("--horizon", type=int, required=True)
    qi.set_defaults(func=_cmd_artin_invariants)

    q = sub.add_parser("stable-range", help="generation and presentation degrees")
    q.add_argument("file")
    q.set_defaults(func=_cmd_stable_range)

    q = sub.add_parser("report", help="summary table over a directory of modules")
    q.add_argument("dir")
    q.add_argument("--format", choices=["json", "markdown"], default="json")
    q.set_defaults(func=_cmd_report)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"sheafrep: error: {e}\n")
        return EXIT_USAGE
    except MathFailure as e:
        sys.stderr.write(f"sheafrep: check failed: {e}\n")
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
