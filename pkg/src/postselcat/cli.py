"""``postselcat`` command line.

Subcommands
-----------
scan-r       R against |alpha| for several omega values
scan-gamma   R against Gamma for several phi values
wigner       Wigner grid file plus a one-line summary
validate     invariant suite with PASS/FAIL lines; writes the errata log

Angles accept arithmetic in ``pi`` (``7*pi/9``).  Exit codes: 0 success,
1 invalid parameters, 2 numerical or convergence failure, 3 a validation
check failed.
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from dataclasses import fields
from typing import Sequence

import numpy as np

from . import __version__
from .config import DEFAULT_DIM, DEFAULT_TOLERANCES, Tolerances
from .errata import ErrataRegistry
from .errors import InvalidParameterError, NumericalError, TruncationError
from .observables import R_scan, with_axis
from .postselect import MeasurementParams, pointer_after_measurement, postselection_probability
from .states import CatParams
from .wigner import DEFAULT_BOUNDS, DEFAULT_RESOLUTION, grid_summary, wigner_grid, format_grid

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3

CSV_COLUMNS = ("axis_name", "omega", "theta", "phi", "delta", "gamma", "alpha_abs", "R", "P_s")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class _ParamError(Exception):
    pass


def parse_real(text: str) -> float:
    """Evaluate a real expression built from numbers, ``pi`` and ``+ - * / **``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError
    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
        raise argparse.ArgumentTypeError(f"cannot read {text!r} as a number") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not finite")
    return value


def parse_list(text: str) -> list[float]:
    return [parse_real(t) for t in text.split(",") if t.strip()]


def parse_range(text: str) -> tuple[float, float, float]:
    parts = parse_list(text)
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise argparse.ArgumentTypeError(f"range must be START,STOP,STEP with STEP > 0, got {text!r}")
    return parts[0], parts[1], parts[2]


def parse_grid(text: str) -> tuple[tuple[float, ...], tuple[int, int]]:
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(f"grid must be x0,x1,p0,p1,nx,np, got {text!r}")
    try:
        nx, np_ = int(parts[4]), int(parts[5])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid point counts must be integers, got {text!r}") from None
    return tuple(parse_real(p) for p in parts[:4]), (nx, np_)


def range_values(start: float, stop: float, step: float) -> np.ndarray:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def _fmt(v) -> str:
    return "" if v is None else f"{v:.17g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _ParamError(message)


def _add_physics(p: argparse.ArgumentParser, **defaults) -> None:
    g = p.add_argument_group("physics")
    g.add_argument("--alpha", type=parse_real, default=defaults.get("alpha", 1.0), help="|alpha|")
    g.add_argument("--delta", type=parse_real, default=0.0, help="arg(alpha)")
    g.add_argument("--omega", type=parse_real, default=defaults.get("omega", 0.0), help="superposition phase")
    g.add_argument("--theta", type=parse_real, default=math.pi / 2, help="pre-selection polar angle")
    g.add_argument("--phi", type=parse_real, default=7 * math.pi / 9, help="pre-selection phase")
    g.add_argument("--gamma", type=parse_real, default=defaults.get("gamma", 2.0), help="coupling Gamma = g/sigma")
    g.add_argument("--dim", type=int, default=defaults.get("dim", DEFAULT_DIM), help="Fock truncation")
    t = p.add_argument_group("tolerances")
    for f in fields(Tolerances):
        t.add_argument(f"--tol-{f.name}", type=float, default=None, dest=f"tol_{f.name}",
                       help=f"default {getattr(DEFAULT_TOLERANCES, f.name):g}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="postselcat", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"postselcat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scan-r", help="R against |alpha| for several omega")
    _add_physics(p, dim=128)
    p.add_argument("--range", type=parse_range, default=(0.0, 5.0, 0.025), metavar="START,STOP,STEP")
    p.add_argument("--omegas", type=parse_list, default=[0.0, math.pi / 2, math.pi])
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.add_argument("--figure", help="also render R curves to this image file")

    p = sub.add_parser("scan-gamma", help="R against Gamma for several phi")
    _add_physics(p, gamma=0.0)
    p.add_argument("--range", type=parse_range, default=(0.0, 4.0, 0.02), metavar="START,STOP,STEP")
    p.add_argument("--phis", type=parse_list, default=[math.pi / 3, 2 * math.pi / 3, 7 * math.pi / 9])
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.add_argument("--figure", help="also render R curves to this image file")

    p = sub.add_parser("wigner", help="Wigner grid of the measured pointer")
    _add_physics(p)
    p.add_argument("--grid", type=parse_grid, default=(DEFAULT_BOUNDS, DEFAULT_RESOLUTION),
                   metavar="x0,x1,p0,p1,nx,np")
    p.add_argument("--out", required=True, help="grid file path")
    p.add_argument("--figure", help="also render the grid to this image file")

    p = sub.add_parser("validate", help="run the invariant suite")
    _add_physics(p)
    p.add_argument("--errata", default="errata.tsv", help="errata log path (appended)")
    return parser


def _tolerances(args) -> Tolerances:
    return DEFAULT_TOLERANCES.override(**{f.name: getattr(args, f"tol_{f.name}") for f in fields(Tolerances)})


def _params(args) -> tuple[CatParams, MeasurementParams]:
    return (CatParams(args.alpha, args.delta, args.omega),
            MeasurementParams(args.theta, args.phi, args.gamma))


def _header(args, extra: dict) -> str:
    items = {"command": args.command, "alpha": args.alpha, "delta": args.delta, "omega": args.omega,
             "theta": args.theta, "phi": args.phi, "gamma": args.gamma, "dim": args.dim}
    items.update(extra)
    tol = _tolerances(args)
    items.update({f"tol_{f.name}": getattr(tol, f.name) for f in fields(Tolerances)})
    body = " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in items.items())
    return f"# postselcat {__version__} {body}"


def _point(cat: CatParams, meas: MeasurementParams, axis: str, value: float) -> dict[str, float]:
    # Requested parameters; echoed even on rows whose values were rejected.
    p = {"omega": cat.omega, "theta": meas.theta, "phi": meas.phi, "delta": cat.delta,
         "gamma": meas.gamma, "alpha_abs": cat.alpha_abs}
    p[axis] = value
    return p


def _row(axis: str, p: dict[str, float], R, P_s) -> str:
    return ",".join([axis] + [_fmt(p[k]) for k in CSV_COLUMNS[1:7]] + [_fmt(R), _fmt(P_s)])


def _scan(args, axis: str, series_axis: str, series_values: Sequence[float]) -> int:
    tol = _tolerances(args)
    cat, meas = _params(args)
    values = range_values(*args.range)
    lines = [_header(args, {"axis": axis, "range": ",".join(_fmt(v) for v in args.range),
                            series_axis + "s": ",".join(_fmt(v) for v in series_values)}),
             ",".join(CSV_COLUMNS)]
    curves = {}
    failures = total = 0
    for s in series_values:
        base_cat, base_meas = with_axis(cat, meas, series_axis, s)
        pts = R_scan(base_cat, base_meas, axis, values, args.dim, tol)
        for pt in pts:
            total += 1
            if not pt.ok:
                failures += 1
                print(f"postselcat: {series_axis}={s:.6g} {axis}={pt.value:.6g}: {pt.error}", file=sys.stderr)
            p = _point(base_cat, base_meas, axis, pt.value)
            lines.append(_row(axis, p, pt.R, pt.P_s if pt.ok else _safe_ps(p)))
        curves[f"{series_axis} = {s:.4g}"] = ([p.value for p in pts], [p.R for p in pts])
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        from .plotting import plot_scan
        plot_scan(curves, axis, args.figure)
    if failures:
        print(f"postselcat: {failures} of {total} points failed (empty R cells)", file=sys.stderr)
    return EXIT_NUMERIC if failures == total else EXIT_OK


def _safe_ps(p: dict[str, float]) -> float | None:
    try:
        return postselection_probability(MeasurementParams(p["theta"], p["phi"], p["gamma"]))
    except InvalidParameterError:
        return None


def cmd_scan_r(args) -> int:
    return _scan(args, "alpha_abs", "omega", args.omegas)


def cmd_scan_gamma(args) -> int:
    return _scan(args, "gamma", "phi", args.phis)


def cmd_wigner(args) -> int:
    tol = _tolerances(args)
    cat, meas = _params(args)
    bounds, resolution = args.grid
    state, _ = pointer_after_measurement(args.dim, cat, meas, tol)
    grid = wigner_grid(state, bounds, resolution, tol)
    summary = grid_summary(grid, tol)
    params = {"alpha": args.alpha, "delta": args.delta, "omega": args.omega, "theta": args.theta,
              "phi": args.phi, "gamma": args.gamma, "dim": args.dim, "version": __version__}
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_grid(grid, params, summary))
    if args.figure:
        from .plotting import plot_wigner
        plot_wigner(grid, args.figure,
                    title=f"|alpha|={args.alpha:.3g}, omega={args.omega:.3g}, Gamma={args.gamma:.3g}")
    print(" ".join(f"{k}={summary[k]:.17g}" for k in ("min", "max", "integral", "negativity")))
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_suite
    tol = _tolerances(args)
    cat, meas = _params(args)
    registry = ErrataRegistry(args.errata)
    report = run_suite(cat, meas, args.dim, tol, registry)
    for c in report.checks:
        print(c.line())
    print(f"errata: {report.errata['total']} filed to {args.errata} "
          f"(moments {report.errata['moments']}, wigner {report.errata['wigner']})")
    print("validation passed" if report.passed else "validation FAILED")
    return EXIT_OK if report.passed else EXIT_VALIDATION


COMMANDS = {"scan-r": cmd_scan_r, "scan-gamma": cmd_scan_gamma, "wigner": cmd_wigner, "validate": cmd_validate}


_VALUE_FLAGS = ("--grid", "--range", "--omegas", "--phis", "--alpha", "--delta", "--omega",
                "--theta", "--phi", "--gamma")


def _join_values(argv: Sequence[str]) -> list[str]:
    # argparse takes "-4,4,..." for an option; bind such values to their flag.
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else argv))
        return COMMANDS[args.command](args)
    except (_ParamError, InvalidParameterError, KeyError) as exc:
        print(f"postselcat: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except TruncationError as exc:
        print(f"postselcat: truncation convergence failed: {exc} (try a larger --dim)", file=sys.stderr)
        return EXIT_NUMERIC
    except NumericalError as exc:
        print(f"postselcat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
