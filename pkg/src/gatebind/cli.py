"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 numerical or verification
failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .errors import GateBindError, NumericalError, UsageError
from .eta import eta_analytic, eta_numeric, eta_spectral, eta_table, gate_count_lower_bound
from .gates import GateMatrix, GateSpec, build_named, canonical_gate, dump_gate, load_gate, random_su
from .invariants import (
    canonical_from_gate,
    classify_region,
    locally_equivalent,
    makhlin_from_gate,
    weyl_surface_samples,
    write_surface_csv,
)
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy
from .tables import verify_table1, verify_table2

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
METHODS = ("numeric", "analytic", "spectral")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x: float) -> float:
    """Display form: 12 significant digits, roundoff below 1e-12 shown as 0."""
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.12g}")


def _angle(x: float, degrees: bool) -> float:
    return _num(math.degrees(x) if degrees else x)


def _emit(obj: dict, plain: bool, out=None) -> None:
    out = out or sys.stdout
    if not plain:
        out.write(json.dumps(obj) + "\n")
        return
    for key, value in obj.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, (list, tuple)):
            value = ", ".join(str(v) for v in value)
        out.write(f"{key:<12} {value}\n")


def _parse_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--c expects three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--c expects numbers, got {text!r}") from None


def _tolerance(args) -> TolerancePolicy:
    if getattr(args, "tol", None) is None:
        return DEFAULT_TOLERANCE
    try:
        return DEFAULT_TOLERANCE.replace(eps_match=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _resolve_gate(args) -> GateMatrix:
    given = [x for x in (args.gate, args.file, args.c) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --gate, --file, --c")
    if args.gate is not None:
        return build_named(GateSpec.parse(args.gate))
    if args.file is not None:
        return load_gate(args.file)
    return canonical_gate(_parse_triple(args.c))


def _resolve_operand(text: str) -> GateMatrix:
    if Path(text).exists():
        return load_gate(text)
    return build_named(GateSpec.parse(text))


def _add_gate_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gate", help="catalog gate name, optionally name:alpha (e.g. cu:0.5)")
    p.add_argument("--file", help="gate file (JSON with n and matrix of [re, im] pairs)")
    p.add_argument("--c", help="canonical gate c1,c2,c3 (radians)")


def cmd_invariants(args) -> int:
    tol = _tolerance(args)
    U = _resolve_gate(args)
    methods = METHODS if args.method == "all" else (args.method,)
    report: dict = {"gate": U.label or "gate", "n": U.n}
    warnings: list[str] = []
    etas: dict = {}
    if U.n == 2:
        c = canonical_from_gate(U, tol)
        g = makhlin_from_gate(U)
        region = classify_region(c, tol.eps_match)
        report.update(
            c1=_angle(c.c1, args.degrees), c2=_angle(c.c2, args.degrees),
            c3=_angle(c.c3, args.degrees),
            g1=_num(g.g1), g2=_num(g.g2), g3=_num(g.g3), region=region.name,
        )
        for m in methods:
            if m == "numeric":
                etas[m] = eta_numeric(U, tol).eta
            elif m == "analytic":
                etas[m] = eta_analytic(c, tol).eta
            else:
                etas[m] = eta_spectral(U, tol).eta
        if len(methods) == len(METHODS):
            etas["table"] = eta_table(region)
    else:
        for m in methods:
            if m == "numeric":
                etas[m] = eta_numeric(U, tol).eta
            else:
                warnings.append(f"{m} eta is only defined for two-qubit gates")
    report["eta"] = etas
    if len(set(etas.values())) > 1:
        warnings.append("eta methods disagree: " + ", ".join(f"{k}={v}" for k, v in etas.items()))
    report["warnings"] = warnings
    if args.degrees and U.n == 2:
        report["angle_unit"] = "degrees"
    _emit(report, args.plain)
    return EXIT_NUMERIC if len(set(etas.values())) > 1 else EXIT_OK


def cmd_verify_tables(args) -> int:
    tol = _tolerance(args)
    results = verify_table1(tol) + verify_table2(tol)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def cmd_surface(args) -> int:
    if args.ns < 2 or args.nt < 2:
        raise UsageError("--ns and --nt must both be at least 2")
    samples = weyl_surface_samples(args.ns, args.nt)
    if args.out in (None, "-"):
        rows = write_surface_csv(samples, sys.stdout)
        print(f"rows: {rows}", file=sys.stderr)
    else:
        rows = write_surface_csv(samples, args.out)
        print(f"rows: {rows}")
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    tol = _tolerance(args)
    rng = np.random.default_rng(args.seed)
    values = [eta_numeric(random_su(4, rng), tol).eta for _ in range(args.count)]
    counts = Counter(values)
    report = {
        "count": args.count,
        "seed": args.seed,
        "min": min(values),
        "max": max(values),
        "mean": _num(sum(values) / len(values)),
        "fraction_eta6": _num(counts.get(6, 0) / len(values)),
    }
    if args.histogram:
        report["histogram"] = {str(k): counts[k] for k in sorted(counts)}
    _emit(report, args.plain)
    return EXIT_OK


def cmd_bound(args) -> int:
    tol = _tolerance(args)
    U = _resolve_gate(args)
    if U.n != 2:
        raise UsageError("the lower bound is defined for a fixed two-qubit gate")
    eta = eta_numeric(U, tol).eta
    bound = gate_count_lower_bound(args.n, eta)
    if args.plain:
        print(bound)
    else:
        _emit({"gate": U.label or "gate", "n": args.n, "eta": eta, "bound": bound}, False)
    return EXIT_OK


def cmd_equiv(args) -> int:
    tol = _tolerance(args)
    U, V = _resolve_operand(args.a), _resolve_operand(args.b)
    res = locally_equivalent(U, V, tol.eps_match)
    report = {
        "equivalent": res.equivalent,
        "makhlin_a": [_num(x) for x in res.makhlin_u],
        "makhlin_b": [_num(x) for x in res.makhlin_v],
        "canonical_a": [_angle(x, args.degrees) for x in res.canonical_u],
        "canonical_b": [_angle(x, args.degrees) for x in res.canonical_v],
    }
    _emit(report, args.plain)
    return EXIT_OK


def cmd_dump(args) -> int:
    U = _resolve_gate(args)
    text = dump_gate(U)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="override the invariant-matching tolerance")
    common.add_argument("--plain", action="store_true", help="human-readable output")
    common.add_argument("--degrees", action="store_true", help="display angles in degrees")

    parser = _Parser(prog="gatebind", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", parents=[common], help="invariant report for one gate")
    _add_gate_args(p)
    p.add_argument("--method", choices=METHODS + ("all",), default="all")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify-tables", parents=[common], help="re-derive the reference tables")
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("surface", parents=[common], help="chamber surface in Makhlin coordinates")
    p.add_argument("--ns", type=int, default=181)
    p.add_argument("--nt", type=int, default=91)
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("sample", parents=[common], help="eta statistics of Haar-random gates")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--histogram", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bound", parents=[common], help="gate-count lower bound for n qubits")
    p.add_argument("--n", type=int, required=True)
    _add_gate_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("equiv", parents=[common], help="local-equivalence check of two gates")
    p.add_argument("a", help="gate file or catalog name")
    p.add_argument("b", help="gate file or catalog name")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("dump", parents=[common], help="write a gate in the gate-file format")
    _add_gate_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GateBindError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
