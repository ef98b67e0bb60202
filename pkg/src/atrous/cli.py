"""Command line tool.

Exit status: 0 success, 1 malformed input, 2 I/O failure, 3 divergence
verdict, 4 numerical failure.  Failures print one line
``error: <code>: <message>`` on standard error.

Examples
--------
    atrous filters list
    atrous analyze --bank example-5.1 --levels 6 --out report.json
    atrous transform --bank haar --signal x.csv --levels 3 --outdir pyr/
    atrous reconstruct --bank haar --pyramid pyr/ --bounds report.json --out y.csv
    atrous design bezout-pr --theta0 "5*pi/16" --theta1 "pi/4" --out bank.json
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__, registry
from .design import (interp_design, optimize_symmetric, pr_triplet_design,
                     symmetric_family)
from .errors import AtrousError, BadParams, InputError, IOFailure, PyramidShape
from .filterbank import (CoefficientPyramid, FilterBank, Verdict, analyze, certify_stability,
                         frame_bounds, frame_reconstruct, infinite_frame_bounds)
from .io import (atomic_write, bank_to_dict, dumps, format_signal, load_bank, read_json,
                 read_signal, write_json, write_signal)
from .separable2d import frame_bounds_2d, separable_product
from .sequences import prune
from .spectrum import GridSpec, eval_ft_grid
from .tfmetrics import bank_tf_stats

GRID_ENV = "ATROUS_GRID_N"
DIVERGENCE_STATUS = 3
_DETAIL = re.compile(r"detail_j(\d+)_l(\d+)\.csv$")

# -- numeric expressions -----------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "tan": math.tan,
          "log": math.log, "exp": math.exp}


def parse_number(text: str) -> float:
    """Evaluate arithmetic such as ``5*pi/16`` or ``1/sqrt(2)`` without ``eval``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError):
        raise InputError(f"cannot parse number {text!r}") from None
    if not math.isfinite(value):
        raise InputError(f"number {text!r} is not finite")
    return value


def parse_constraints(text: str) -> list[tuple[float, float]]:
    """``"xi:value, xi:value, ..."``."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if item.count(":") != 1:
            raise InputError(f"constraint {item!r} must look like xi:value")
        xi, v = item.split(":")
        out.append((parse_number(xi), parse_number(v)))
    return out


# -- shared helpers ----------------------------------------------------------

def _grid(args) -> GridSpec | None:
    n = getattr(args, "grid", None)
    if n is None and os.environ.get(GRID_ENV):
        n = os.environ[GRID_ENV]
        try:
            n = int(n)
        except ValueError:
            raise InputError(f"{GRID_ENV} must be an integer, got {n!r}") from None
    return None if n is None else GridSpec(n)


def _emit(obj, out: str | None):
    if out:
        write_json(obj, out)
    else:
        sys.stdout.write(dumps(obj))


def _emit_bank(bank: FilterBank, out: str | None, note: str):
    _emit(bank_to_dict(bank, note), out)


def _bounds_from(path) -> tuple[float, float]:
    d = read_json(path)
    rep = d.get("report", d) if isinstance(d, dict) else None
    try:
        A, B = float(rep["A"]["lo"]), float(rep["B"]["hi"])
    except (KeyError, TypeError, ValueError):
        raise InputError(f"{path}: expected a frame report with A.lo and B.hi") from None
    return A, B


def _read_pyramid(directory) -> CoefficientPyramid:
    d = Path(directory)
    if not d.is_dir():
        raise IOFailure(f"{d} is not a directory")
    details = {}
    for f in d.iterdir():
        m = _DETAIL.match(f.name)
        if m:
            details[(int(m.group(1)), int(m.group(2)))] = read_signal(f)
    approx = d / "approx.csv"
    if not approx.exists() or not details:
        raise PyramidShape(f"{d} must hold approx.csv and detail_j<j>_l<l>.csv files")
    J = max(j for j, _ in details)
    return CoefficientPyramid(J, details, read_signal(approx))


# -- commands ----------------------------------------------------------------

def cmd_filters(args) -> int:
    if args.action == "list":
        for name in registry.names():
            bank = registry.get(name)
            print(f"{name}\tL={bank.L}\tlowpass length {len(bank.lowpass)}")
        return 0
    if not args.name:
        raise InputError("filters show needs a bank name")
    sys.stdout.write(dumps(bank_to_dict(registry.get(args.name))))
    return 0


def cmd_analyze(args) -> int:
    bank = load_bank(args.bank)
    grid = _grid(args)
    if args.infinite:
        report = infinite_frame_bounds(bank, args.jmax, grid)
    else:
        report = frame_bounds(bank, args.levels, grid)
    cert = certify_stability(bank, jmax=args.jmax)
    _emit({"bank": bank.name, "report": report.to_dict(), "certificate": cert.to_dict()}, args.out)
    if cert.verdict is Verdict.DIVERGENCE_DETECTED:
        print(f"error: {cert.verdict.value}: partial sums of the frame function grow "
              f"without bound up to order {args.jmax}", file=sys.stderr)
        return DIVERGENCE_STATUS
    return 0


def cmd_transform(args) -> int:
    bank = load_bank(args.bank)
    pyr = analyze(bank, read_signal(args.signal), args.levels)
    out = Path(args.outdir)
    for (j, l), c in sorted(pyr.details.items()):
        write_signal(c, out / f"detail_j{j}_l{l}.csv")
    write_signal(pyr.approximation, out / "approx.csv")
    return 0


def cmd_reconstruct(args) -> int:
    bank = load_bank(args.bank)
    pyr = _read_pyramid(args.pyramid)
    A, B = _bounds_from(args.bounds)
    x = frame_reconstruct(bank, pyr, A, B, tol=args.tol, max_iter=args.max_iter)
    rel = args.tol if args.prune is None else args.prune
    if rel > 0 and not x.is_zero():
        # the iterations spread support; values below the accuracy are noise
        x = prune(x, rel * float(np.max(np.abs(x.taps))))
    if args.out:
        write_signal(x, args.out)
    else:
        sys.stdout.write(format_signal(x))
    return 0


def cmd_tf(args) -> int:
    bank = load_bank(args.bank)
    stats = bank_tf_stats(bank, bandpass_high=args.bandpass_high)
    _emit({k: v.to_dict() for k, v in stats.items()}, args.out)
    return 0


def cmd_response(args) -> int:
    bank = load_bank(args.bank)
    grid = _grid(args) or GridSpec(1024)
    half = grid.N // 2 + 1
    cols = [np.abs(eval_ft_grid(f, grid)[:half]) ** 2 for f in bank.filters()]
    phi = np.sum(cols, axis=0)
    names = ["xi", "h"] + [f"g{l}" for l in range(1, bank.L + 1)] + ["phi1"]
    rows = np.column_stack([grid.xi[:half]] + cols + [phi])
    text = ",".join(names) + "\n" + "".join(",".join(repr(float(v)) for v in r) + "\n" for r in rows)
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_design(args) -> int:
    if args.kind == "symmetric":
        if args.optimize:
            res = optimize_symmetric(args.n, args.degree)
            params, ratio = res.params, res.ratio
        else:
            if not args.params:
                raise BadParams("give --params or --optimize")
            params, ratio = [parse_number(p) for p in args.params], None
        bank = symmetric_family(args.n, params, args.name or "symmetric")
        note = f"symmetric family n={args.n} params={list(map(float, params))}"
        if ratio is not None:
            note += f" ratio={ratio!r}"
        _emit_bank(bank, args.out, note)
    elif args.kind == "interp":
        low = load_bank(args.lowpass).lowpass
        highs = []
        for text in args.constraints:
            pts = parse_constraints(text)
            highs.append(interp_design(len(pts) - 1, pts).to_sequence())
        bank = FilterBank(low, tuple(highs), args.name or "interpolated")
        _emit_bank(bank, args.out, "interpolated high-pass responses")
    else:
        t0, t1 = parse_number(args.theta0), parse_number(args.theta1)
        bank = pr_triplet_design(t0, t1)
        _emit_bank(bank, args.out, f"perfect reconstruction triplet theta0={t0!r} theta1={t1!r}")
    return 0


def cmd_analyze2d(args) -> int:
    bank = separable_product(load_bank(args.bank_x), load_bank(args.bank_y))
    report = frame_bounds_2d(bank, args.levels, _grid(args))
    _emit(report.to_dict(), args.out)
    return 0


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"error: {InputError.code}: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="atrous", description="Shift-invariant iterated filter banks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("filters", help="list or show built-in banks")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_filters)

    s = sub.add_parser("analyze", help="certified frame bounds and stability certificate")
    s.add_argument("--bank", required=True, help="built-in name or bank JSON file")
    s.add_argument("--levels", type=_positive, default=6)
    s.add_argument("--infinite", action="store_true", help="bounds for the infinitely iterated bank")
    s.add_argument("--jmax", type=_positive, default=20)
    s.add_argument("--grid", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("transform", help="analysis of a signal CSV")
    s.add_argument("--bank", required=True)
    s.add_argument("--signal", required=True)
    s.add_argument("--levels", type=_positive, required=True)
    s.add_argument("--outdir", required=True)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("reconstruct", help="frame-algorithm inversion of a coefficient directory")
    s.add_argument("--bank", required=True)
    s.add_argument("--pyramid", required=True)
    s.add_argument("--bounds", required=True, help="report JSON from analyze")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--max-iter", type=_positive, default=500)
    s.add_argument("--prune", type=float,
                   help="zero values below this fraction of the largest; default --tol, 0 keeps all")
    s.add_argument("--out")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("tf", help="time and frequency spreads")
    s.add_argument("--bank", required=True)
    s.add_argument("--bandpass-high", action="store_true",
                   help="measure every high-pass filter with the band-pass convention")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tf)

    s = sub.add_parser("response", help="squared frequency responses on [0, 1/2]")
    s.add_argument("--bank", required=True)
    s.add_argument("--grid", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_response)

    s = sub.add_parser("design", help="construct a bank")
    dsub = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    d = dsub.add_parser("symmetric")
    d.add_argument("--n", type=_positive, default=2)
    d.add_argument("--params", nargs="+")
    d.add_argument("--optimize", action="store_true")
    d.add_argument("--degree", type=int, choices=[1, 2], default=1)
    d.add_argument("--name")
    d.add_argument("--out")
    d = dsub.add_parser("interp")
    d.add_argument("--lowpass", required=True, help="bank whose low-pass filter is kept")
    d.add_argument("--constraints", action="append", required=True,
                   help='"xi:value, ..." for one high-pass filter; repeat per filter')
    d.add_argument("--name")
    d.add_argument("--out")
    d = dsub.add_parser("bezout-pr")
    d.add_argument("--theta0", required=True)
    d.add_argument("--theta1", required=True)
    d.add_argument("--out")
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("analyze2d", help="frame bounds of a separable 2-D product")
    s.add_argument("--bank-x", required=True)
    s.add_argument("--bank-y", required=True)
    s.add_argument("--levels", type=_positive, default=3)
    s.add_argument("--grid", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_analyze2d)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AtrousError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status
    except OSError as exc:
        print(f"error: {IOFailure.code}: {exc}", file=sys.stderr)
        return IOFailure.exit_status


if __name__ == "__main__":
    sys.exit(main())
