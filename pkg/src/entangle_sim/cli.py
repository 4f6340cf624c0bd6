"""``entangle-sim`` command line.

Angles are decimal radians; pi/4 is 0.785398163397. Exit status is 0 on
success, 1 when a verification or invariant fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import math
import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from . import analysis, selftest
from .protocol import AngleTriple, ProtocolMode, run_protocol
from .qcore import InvalidArgumentError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

QUARTER_PI = math.pi / 4
# Decimal angles on the command line carry ~9-12 digits; 0.785398163 is
# 4e-10 from pi/4, so the library's 1e-12 test is too strict here.
CLI_ANGLE_TOL = 1e-9
FIG2_HEADER = ("theta_double_prime_rad", "t_avg")
FIG3_HEADER = ("theta_prime_rad", "t")
SCAN_HEADER = (
    "theta_rad", "theta_prime_rad", "theta_double_prime_rad", "mutual_info_ad_bits",
    "se_min_bits", "se_max_bits", "se_constant", "num_degenerate",
)


class UsageError(Exception):
    pass


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".15g")


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines += [",".join(format_value(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_json(header: Sequence[str], rows: Iterable[Sequence], metadata: dict) -> str:
    records = [dict(zip(header, row)) for row in rows]
    return json.dumps({"metadata": metadata, "rows": records}, indent=2, default=_jsonable) + "\n"


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_output(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _angles(args) -> AngleTriple:
    return AngleTriple(args.theta, args.theta_prime, args.theta2)


def _check_grid(value: int, flag: str) -> None:
    if value < 2:
        raise UsageError(f"{flag} must be at least 2, got {value}")


def cmd_run(args) -> int:
    if args.mode is None:
        raise UsageError("run needs --mode locc|local")
    mode = ProtocolMode(args.mode)
    angles = _angles(args)
    try:
        mode.check_angles(angles, CLI_ANGLE_TOL)
    except InvalidArgumentError as exc:
        raise UsageError(f"mode-angle mismatch: {exc}") from exc
    report = run_protocol(angles, mode, angle_tol=CLI_ANGLE_TOL)
    if args.json:
        text = json.dumps(report.as_dict(), indent=2) + "\n"
    else:
        text = "".join(f"{k}: {v!r}\n" if isinstance(v, float) else f"{k}: {v}\n"
                       for k, v in report.as_dict().items())
    write_output(text, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def sweep_rows(figure: str, grid: Optional[int], avg_grid: int):
    """Header, rows and metadata for one of the coherence curves."""
    if figure == "fig2":
        grid = 91 if grid is None else grid
        spec = analysis.fig2_spec(grid, avg_grid)
        header = FIG2_HEADER
    else:
        grid = 181 if grid is None else grid
        spec = analysis.fig3_spec(grid)
        header = FIG3_HEADER
    values = analysis.run_sweep(spec)
    metadata = {"figure": figure, "grid": grid, "fixed": spec.fixed}
    if spec.averaging_grid is not None:
        metadata["avg_grid"] = len(spec.averaging_grid)
    return header, list(zip(spec.grid, values.tolist())), metadata


def cmd_sweep(args) -> int:
    if args.figure is None:
        raise UsageError("sweep needs --figure fig2|fig3")
    if args.grid is not None:
        _check_grid(args.grid, "--grid")
    _check_grid(args.avg_grid, "--avg-grid")
    header, rows, metadata = sweep_rows(args.figure, args.grid, args.avg_grid)
    _emit(header, rows, metadata, args)
    return EXIT_OK


def scan_rows(grid: int):
    axis = np.linspace(0.0, math.pi / 2, grid)
    report = analysis.condition_scan(axis, axis, axis)
    rows = []
    for point in report:
        defined = point.defined_entropies
        rows.append((
            *point.angles.as_tuple(),
            point.mutual_info_ad,
            min(defined) if defined else math.nan,
            max(defined) if defined else math.nan,
            point.entropies_constant,
            point.num_degenerate,
        ))
    return SCAN_HEADER, rows, {"grid": grid, "range": [0.0, math.pi / 2]}


def cmd_condition_scan(args) -> int:
    grid = 11 if args.grid is None else args.grid
    _check_grid(grid, "--grid")
    header, rows, metadata = scan_rows(grid)
    _emit(header, rows, metadata, args)
    return EXIT_OK


def _emit(header, rows, metadata, args) -> None:
    if args.json:
        text = render_json(header, rows, metadata)
    else:
        print(json.dumps(metadata, default=_jsonable), file=sys.stderr)
        text = render_csv(header, rows)
    write_output(text, args.out)


def cmd_selftest(args) -> int:
    results = selftest.run_invariants(inject_fault=args.inject_fault)
    if args.json:
        text = json.dumps([r.as_dict() for r in results], indent=2) + "\n"
    else:
        buf = io.StringIO()
        width = max(len(r.name) for r in results)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status}  {r.module:<8} {r.name:<{width}}  {r.detail}", file=buf)
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} invariants passed", file=buf)
        text = buf.getvalue()
    write_output(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text/CSV")

    parser = argparse.ArgumentParser(prog="entangle-sim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", parents=[common], help="run and verify one protocol instance")
    run.add_argument("--mode", choices=[m.value for m in ProtocolMode])
    run.add_argument("--theta", type=float, default=QUARTER_PI)
    run.add_argument("--theta-prime", type=float, default=0.0)
    run.add_argument("--theta2", type=float, default=QUARTER_PI)
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", parents=[common], help="trace-distance curves as CSV")
    sweep.add_argument("--figure", choices=["fig2", "fig3"])
    sweep.add_argument("--grid", type=int, help="points on the swept axis")
    sweep.add_argument("--avg-grid", type=int, default=analysis.DEFAULT_AVG_POINTS,
                       help="theta' averaging points for fig2 (default: %(default)s)")
    sweep.set_defaults(func=cmd_sweep)

    scan = sub.add_parser("condition-scan", parents=[common],
                          help="S(A:D) and conditional entropies on a cubic grid")
    scan.add_argument("--grid", type=int, help="points per axis over [0, pi/2] (default: 11)")
    scan.set_defaults(func=cmd_condition_scan)

    test = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    test.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    test.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"entangle-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    with contextlib.suppress(BrokenPipeError):
        sys.exit(main())
