"""Command-line entry point: ``hexwalks {partition,kernel,sample,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import verify
from .kernel import KernelContext, generic_point_kernel, hahn_kernel, partition_via_kernel
from .model import HexagonSpec, LinePoint, lgv_partition, line_geometry, macmahon
from .oracle import BudgetExceeded, EnumerationBudget, enumerate_configurations, kernel_report
from .sampler import SeededRng, one_point_stats, sample, tiling_svg, to_lozenges

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
SCHEMA = 1


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isfinite(obj):
            return format(obj, ".17g")
        return json.dumps(obj)
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _int_tuple(text: str, size: int, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be {size} comma-separated integers, got {text!r}") from None
    if len(vals) != size:
        raise UsageError(f"{what} must be {size} comma-separated integers, got {text!r}")
    return vals


def _spec(args) -> HexagonSpec:
    try:
        return HexagonSpec(*_int_tuple(args.abc, 3, "--abc"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, text: str) -> None:
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from None
    else:
        sys.stdout.write(text)


# -- partition --------------------------------------------------------------

def cmd_partition(args) -> int:
    a, b, c = _int_tuple(args.abc, 3, "--abc")
    swapped = c < b
    if swapped:
        # the tiling count is symmetric in b and c; the model itself needs c >= b
        args.abc = f"{a},{c},{b}"
    spec = _spec(args)
    routes = {
        "product": macmahon(spec.a, spec.b, spec.c),
        "lgv_determinant": lgv_partition(spec),
        "kernel_route": partition_via_kernel(KernelContext(spec)),
    }
    note = None
    try:
        routes["enumeration"] = Fraction(enumerate_configurations(spec, EnumerationBudget(args.budget)))
    except BudgetExceeded as exc:
        note = f"enumeration skipped: {exc}"
    agree = len(set(routes.values())) == 1
    report = {"schema": SCHEMA, "abc": [a, b, c],
              "routes": {k: str(v) for k, v in routes.items()}, "agree": agree}
    notes = ([f"computed as ({a},{c},{b}) since the model needs c >= b"] if swapped else [])
    notes += [note] if note else []
    if notes:
        report["notes"] = notes
    _emit(args, dumps(report) + "\n")
    return EXIT_OK if agree else EXIT_FAIL


# -- kernel -----------------------------------------------------------------

def _kernel_rows(spec: HexagonSpec, args) -> list[tuple[int, int, int, int]]:
    if args.point and args.grid:
        raise UsageError("use either --point or --grid, not both")
    if args.point:
        pts = [_int_tuple(p, 2, "--point") for p in args.point]
        bad = []
        for r, x in pts:
            if not 1 <= r < spec.last:
                bad.append(f"({r},{x}): line outside [1, {spec.last - 1}]")
            elif not 0 <= x <= line_geometry(spec, r).gamma_r:
                bad.append(f"({r},{x}): Hahn coordinate outside [0, {line_geometry(spec, r).gamma_r}]")
        if bad:
            raise UsageError("out-of-range points:\n  " + "\n  ".join(bad))
        return [(r, x, s, y) for r, x in pts for s, y in pts]
    if args.grid:
        pairs = []
        for g in args.grid:
            if g == "all":
                pairs += [(r, s) for r in spec.interior_lines() for s in spec.interior_lines()]
                continue
            r, s = _int_tuple(g, 2, "--grid")
            for line in (r, s):
                if not 1 <= line < spec.last:
                    raise UsageError(f"--grid line {line} outside [1, {spec.last - 1}]")
            pairs.append((r, s))
        return [(r, x, s, y) for r, s in pairs
                for x in range(line_geometry(spec, r).gamma_r + 1)
                for y in range(line_geometry(spec, s).gamma_r + 1)]
    raise UsageError("kernel needs --point r,x (repeatable) or --grid r,s|all")


def cmd_kernel(args) -> int:
    spec = _spec(args)
    rows = _kernel_rows(spec, args)
    ctx = KernelContext(spec)
    gk = generic_point_kernel(spec) if args.with_oracle else None
    out_rows = []
    for r, x, s, y in rows:
        row = {"r": r, "x_hahn": x, "s": s, "y_hahn": y,
               "value": hahn_kernel(ctx, r, x, s, y).value}
        if gk is not None:
            row["generic"] = float(gk(LinePoint(r, x), LinePoint(s, y)))
        out_rows.append(row)

    status = EXIT_OK
    oracle = None
    if args.with_oracle:
        try:
            oracle = kernel_report(spec, 3, EnumerationBudget(args.budget), seed=args.seed)
        except BudgetExceeded as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        tol = 1e-10 if args.tol is None else args.tol
        oracle["tolerance"] = tol
        oracle["passed"] = oracle["max_abs_error_hahn"] < tol and oracle["generic_exact"]
        status = EXIT_OK if oracle["passed"] else EXIT_FAIL

    if args.format == "csv":
        buf = io.StringIO()
        cols = ["r", "x_hahn", "s", "y_hahn", "value"] + (["generic"] if gk else [])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in out_rows:
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in (row[c] for c in cols)])
        _emit(args, buf.getvalue())
        if oracle is not None:
            sys.stderr.write(dumps(oracle) + "\n")
    else:
        report = {"schema": SCHEMA, "abc": [spec.a, spec.b, spec.c], "rows": out_rows}
        if oracle is not None:
            report["oracle"] = oracle
        _emit(args, dumps(report) + "\n")
    return status


# -- sample -----------------------------------------------------------------

def cmd_sample(args) -> int:
    spec = _spec(args)
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    rng = SeededRng(args.seed)
    configs = [sample(spec, rng) for _ in range(args.count)]
    expected = (spec.a * spec.c, spec.a * spec.b, spec.b * spec.c)

    stats = None
    if args.stats:
        table = one_point_stats(spec, configs)
        stats = {"samples": len(configs), "max_abs_z_score": max(abs(t["z_score"]) for t in table),
                 "sites": table}

    if args.format == "svg":
        tilings = [to_lozenges(spec, cfg) for cfg in configs]
        if any(t.counts() != expected for t in tilings):
            print("error: lozenge counts differ from (ac, ab, bc)", file=sys.stderr)
            return EXIT_FAIL
        if len(tilings) == 1:
            _emit(args, tiling_svg(tilings[0]))
        else:
            if not args.out:
                raise UsageError("--format svg with --count > 1 needs --out")
            base = Path(args.out)
            try:
                base.parent.mkdir(parents=True, exist_ok=True)
                for i, t in enumerate(tilings):
                    base.with_name(f"{base.stem}_{i:05d}{base.suffix or '.svg'}").write_text(tiling_svg(t))
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc}") from None
        if stats is not None:
            sys.stdout.write(dumps({"schema": SCHEMA, "stats": stats}) + "\n")
        return EXIT_OK
    if args.format != "json":
        raise UsageError("sample supports --format json or svg")

    report = {"schema": SCHEMA, "abc": [spec.a, spec.b, spec.c], "seed": args.seed,
              "samples": [{"a": spec.a, "b": spec.b, "c": spec.c, "lines": [list(l) for l in cfg.lines]}
                          for cfg in configs]}
    if stats is not None:
        report["stats"] = stats
    _emit(args, dumps(report) + "\n")
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from "
                         f"{', '.join(verify.SUITES + ('all',))}")
    try:
        results = verify.run(args.suite)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    passed = all(v["passed"] for k, v in results.items() if k != "coefficient_regression")
    _emit(args, dumps({"schema": SCHEMA, "suite": args.suite, "passed": passed, "results": results}) + "\n")
    for name, res in results.items():
        if name != "coefficient_regression":
            print(f"{name}: {'PASS' if res['passed'] else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--abc", default="2,2,2", help="hexagon sides A,B,C with C >= B (default 2,2,2)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json",
                        help="output format (default json)")
    common.add_argument("--budget", type=int, default=10**6,
                        help="maximum configurations to enumerate (default 1000000)")
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override for oracle comparisons (default 1e-10)")
    common.add_argument("--with-oracle", action="store_true",
                        help="compare against exact enumeration")

    parser = argparse.ArgumentParser(prog="hexwalks", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", parents=[common], help="partition function by four routes")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("kernel", parents=[common], help="correlation kernel values")
    p.add_argument("--point", action="append", metavar="R,X",
                   help="interior point (line, Hahn coordinate); repeatable")
    p.add_argument("--grid", action="append", metavar="R,S",
                   help="all site pairs on lines R and S, or 'all'; repeatable")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("sample", parents=[common], help="uniform random configurations")
    p.add_argument("--count", type=int, default=1, help="number of samples (default 1)")
    p.add_argument("--stats", action="store_true", help="one-point table against the kernel diagonal")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("suite", help="orthogonality, kernel, macmahon, hermite, limits, sampler or all")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.budget < 1:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
