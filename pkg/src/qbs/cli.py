"""Command-line front end.

    qbs <command> [--n N] [--n-list 4,8,16] [--q 0.9 | --qseq nthroot:0.5]
        [--alpha1 .. --beta2 ..] [--f fig6|expr] [--grid 501] [--out path]
        [--tol 1e-14] [--const-C 4] [--config file]

Commands: eval, moments, sweep, voronovskaja, bounds, verify, plot.
Tables are written as CSV (stdout unless --out is given). Parse errors exit
with status 2, numeric failures with status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import moments
from .analysis import (
    MODULUS_GRID,
    THEOREM_4_1_CONSTANT,
    bound_lipschitz,
    bound_theorem_3_2,
    bound_theorem_4_1,
    bound_theorem_4_4,
    convergence_sweep,
    q_sweep,
    voronovskaja_deviation,
)
from .functions import builtin, parse_function
from .moments import NegativeDeltaError, QSequence
from .operators import DomainWarning, Kind, OperatorSpec, apply, operator_domain, q_kantorovich_stancu
from .qcalc import JacksonTolerance, JacksonTruncationError
from .stancu_basis import StancuParams

log = logging.getLogger("qbs")

COMMANDS = ("eval", "moments", "sweep", "voronovskaja", "bounds", "verify", "plot")

SWEEP_PARAMS = StancuParams(1.0, 2.0, 3.0, 4.0)
SWEEP_N_LIST = (4, 8, 16, 32, 64)
SWEEP_QSEQ = "one-minus-c/N:1"
FIXED_Q_LIST = (0.5, 0.7, 0.9, 0.99)
FIXED_Q_N = 32

_QSEQ_KINDS = {
    "one-minus-c/n": "one-minus-c/n",
    "one-minus-c/sqrtn": "one-minus-c/sqrt-n",
    "one-minus-c/sqrt-n": "one-minus-c/sqrt-n",
    "nthroot": "nthroot",
    "fixed": "fixed",
}


class UsageError(ValueError):
    pass


@dataclass
class CsvTable:
    header: list[str]
    rows: list[tuple] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.header):
            raise ValueError(f"row has {len(values)} values, header has {len(self.header)}")
        self.rows.append(tuple(float(v) for v in values))

    def to_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow(["%.12g" % v for v in row])
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "CsvTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        table = cls(header)
        for row in reader:
            table.add(*(float(v) for v in row))
        return table

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows])


def parse_qseq(text: str) -> QSequence:
    kind, sep, value = text.partition(":")
    key = kind.strip().lower()
    if not sep or key not in _QSEQ_KINDS:
        raise UsageError(
            f"bad --qseq {text!r}; expected one-minus-c/N:c, one-minus-c/sqrtN:c, nthroot:a or fixed:q"
        )
    try:
        return QSequence(_QSEQ_KINDS[key], float(value))
    except ValueError as exc:
        raise UsageError(f"bad --qseq {text!r}: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbs", description="Kantorovich q-Bernstein-Stancu operator toolkit")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value file; command-line flags win")
    p.add_argument("--kind", default=Kind.Q_KANTOROVICH_STANCU.value, choices=[k.value for k in Kind])
    p.add_argument("--n", type=int)
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--q", type=float)
    p.add_argument("--q-list", type=_float_list)
    p.add_argument("--qseq")
    for name in ("alpha1", "alpha2", "beta1", "beta2"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--f", default="fig6", help="built-in name or expression in x")
    p.add_argument("--x", type=_float_list, help="evaluation points for eval")
    p.add_argument("--grid", type=int)
    p.add_argument("--modulus-grid", type=int, default=MODULUS_GRID)
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--const-C", type=float, default=THEOREM_4_1_CONSTANT)
    p.add_argument("--limits", choices=("stated", "derived"), default="stated")
    p.add_argument("--strict", action="store_true", help="verify: claim scans also decide the exit code")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def read_config(path: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = read_config(known.config)
        except (OSError, UsageError) as exc:
            parser.error(str(exc))
        dests = {a.dest: a for a in parser._actions}
        defaults = {}
        for key, value in cfg.items():
            action = dests.get(key)
            if action is None or key in ("command", "config", "help"):
                parser.error(f"unknown config key {key!r}")
            if action.const is True:
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
                continue
            try:
                defaults[key] = action.type(value) if action.type else value
            except (ValueError, argparse.ArgumentTypeError) as exc:
                parser.error(f"config key {key!r}: {exc}")
        parser.set_defaults(**defaults)
    args = parser.parse_args(argv)
    try:
        _finish(args)
    except UsageError as exc:
        parser.error(str(exc))
    return args


def _finish(args):
    given = [getattr(args, k) for k in ("alpha1", "alpha2", "beta1", "beta2")]
    if all(v is None for v in given) and args.command in ("sweep", "plot"):
        args.params = SWEEP_PARAMS
    else:
        try:
            args.params = StancuParams(*(0.0 if v is None else v for v in given))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        args.function = parse_function(args.f)
    except ValueError as exc:
        raise UsageError(f"--f: {exc}") from None
    if args.q is not None and args.qseq is not None:
        raise UsageError("give either --q or --qseq, not both")
    args.qsequence = parse_qseq(args.qseq) if args.qseq else None
    if args.q is not None and not 0 < args.q < 1:
        raise UsageError("--q must lie in (0, 1)")
    if args.q_list is not None and not all(0 < q < 1 for q in args.q_list):
        raise UsageError("--q-list values must lie in (0, 1)")
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.n_list is not None:
        if not args.n_list or any(n < 1 for n in args.n_list):
            raise UsageError("--n-list needs positive integers")
        if any(b <= a for a, b in zip(args.n_list, args.n_list[1:])):
            raise UsageError("--n-list must be strictly ascending")
    if args.grid is not None and args.grid < 2:
        raise UsageError("--grid must be at least 2")
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    if args.command == "eval" and not args.x:
        raise UsageError("eval needs --x")
    args.tolerance = JacksonTolerance(abs_tol=args.tol)


def _q(args, default=0.9):
    if args.q is not None:
        return args.q
    if args.qsequence is not None:
        return args.qsequence(args.n or 16)
    return default


def _spec(args) -> OperatorSpec:
    kind = Kind(args.kind)
    return OperatorSpec(kind, args.n or 16, _q(args) if kind.uses_q else None, args.params if kind.uses_params else None)


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    spec = _spec(args)
    xs = np.asarray(args.x, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("always", DomainWarning)
        values = apply(spec, args.function, xs, args.tolerance)
    table = CsvTable(["x", "value"])
    for x, v in zip(xs, values):
        table.add(x, v)
    _emit(table.to_text(), args.out)
    return 0


def cmd_moments(args) -> int:
    n, q, params = args.n or 16, _q(args), args.params
    xs = operator_domain(q_kantorovich_stancu(n, q, params)).grid(args.grid or 21)
    m1 = moments.moment1_closed(n, q, params, xs)
    m2 = moments.moment2_closed(n, q, params, xs)
    c2 = moments.central2_exact(n, q, params, xs)
    bound = moments.central2_bound(n, q, params)
    table = CsvTable(["x", "m0", "m1", "m2", "central2", "central2_bound"])
    for row in zip(xs, np.ones_like(xs), m1, m2, c2, np.full_like(xs, bound)):
        table.add(*row)
    _emit(table.to_text(), args.out)
    return 0


def _sweep_rows(args):
    grid = args.grid or 501
    if args.q_list is not None:
        return q_sweep(args.function, args.n or FIXED_Q_N, args.q_list, args.params, grid, args.modulus_grid, args.tolerance)
    if args.q is not None:
        qseq = QSequence.fixed(args.q)
    else:
        qseq = args.qsequence or parse_qseq(SWEEP_QSEQ)
    n_list = args.n_list or list(SWEEP_N_LIST)
    return convergence_sweep(args.function, qseq, args.params, n_list, grid, args.modulus_grid, args.tolerance)


def _sweep_table(rows) -> CsvTable:
    table = CsvTable(["n", "q", "sup_error", "bound", "x_argmax", "grid_points"])
    for r in rows:
        table.add(r.n, r.q, r.sup_error, r.bound, r.x_argmax, r.grid_points)
        if r.diagnostic:
            print(f"note: n={r.n} q={r.q:.12g}: {r.diagnostic}", file=sys.stderr)
    return table


def cmd_sweep(args) -> int:
    rows = _sweep_rows(args)
    _emit(_sweep_table(rows).to_text(), args.out)
    return 1 if any(math.isnan(r.sup_error) for r in rows) else 0


def cmd_voronovskaja(args) -> int:
    qseq = args.qsequence or parse_qseq("nthroot:0.5")
    if qseq.limit is None:
        raise UsageError("voronovskaja needs a q-sequence with q_n -> 1, not fixed:q")
    xs = np.linspace(0.2, 0.8, args.grid or 5)
    table = CsvTable(["n", "deviation"])
    for n in args.n_list or [16, 64, 256]:
        table.add(n, voronovskaja_deviation(args.function, qseq, args.params, n, xs, args.tolerance, args.limits))
    _emit(table.to_text(), args.out)
    return 0


def cmd_bounds(args) -> int:
    n, q, params, f = args.n or 16, _q(args), args.params, args.function
    spec = q_kantorovich_stancu(n, q, params)
    xs = operator_domain(spec).grid(args.grid or 21)
    err = np.abs(apply(spec, f, xs, args.tolerance) - f(xs))
    try:
        thm32 = bound_theorem_3_2(f, n, q, params, args.modulus_grid)
    except NegativeDeltaError as exc:
        print(f"note: {exc}", file=sys.stderr)
        thm32 = math.nan
    thm44 = bound_theorem_4_4(f, n, q, params, xs, args.modulus_grid) if f.d1 is not None else np.full_like(xs, math.nan)
    if f.lipschitz is not None and not math.isnan(thm32):
        lip = bound_lipschitz(f, n, q, params)
    else:
        lip = math.nan
    thm41 = bound_theorem_4_1(f, n, q, params, xs, args.const_C, args.modulus_grid)
    table = CsvTable(["x", "error", "thm32_bound", "thm41_bound", "thm44_bound", "lip_bound"])
    for x, e, b41, b44 in zip(xs, err, thm41, thm44):
        table.add(x, e, thm32, b41, b44, lip)
    _emit(table.to_text(), args.out)
    return 0


# verify

VERIFY_N = (1, 2, 4, 8, 16)
VERIFY_Q = (0.3, 0.5, 0.9, 0.99)
VERIFY_PARAMS = (
    StancuParams(0, 0, 0, 0),
    StancuParams(1, 2, 3, 4),
    StancuParams(0, 1, 1, 2),
    StancuParams(2, 2, 2, 2),
)
ORACLE_TOL = 1e-10


@dataclass
class Check:
    name: str
    deviation: float
    passed: bool
    claim: bool = False

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {self.deviation:.3e}"


def _grid():
    for params in VERIFY_PARAMS:
        for q in VERIFY_Q:
            for n in VERIFY_N:
                yield n, q, params


def run_checks(tol: JacksonTolerance | None = None) -> list[Check]:
    tol = tol or JacksonTolerance()
    one, t1, t2, fig6 = builtin("one"), builtin("x"), builtin("x2"), builtin("fig6")
    dev = dict.fromkeys(("pou", "m1", "m2", "c2", "shifted", "shift", "bound"), 0.0)
    for n, q, params in _grid():
        spec = q_kantorovich_stancu(n, q, params)
        xs = operator_domain(spec).grid(11)
        b0 = apply(spec, one, xs, tol)
        b1 = apply(spec, t1, xs, tol)
        b2 = apply(spec, t2, xs, tol)
        m1 = moments.moment1_closed(n, q, params, xs)
        m2 = moments.moment2_closed(n, q, params, xs)
        a_n, b_n = moments.local_shift_coeffs(n, q, params)
        c2 = moments.central2_exact(n, q, params, xs)
        brute_c2 = b2 - 2 * xs * b1 + xs * xs * b0
        dev["pou"] = max(dev["pou"], np.max(np.abs(b0 - 1)))
        dev["m1"] = max(dev["m1"], np.max(np.abs(m1 - b1)))
        dev["m2"] = max(dev["m2"], np.max(np.abs(m2 - b2)))
        dev["c2"] = max(dev["c2"], np.max(np.abs(c2 - brute_c2)))
        dev["shifted"] = max(dev["shifted"], np.max(np.abs(moments.moment2_q_shifted_reading(n, q, params, xs) - b2)))
        dev["shift"] = max(dev["shift"], np.max(np.abs(a_n * xs + b_n - b1)))
        dev["bound"] = max(dev["bound"], np.max(c2 - moments.central2_bound(n, q, params)))

    red_q = 0.0
    red_classical = 0.0
    for n in VERIFY_N:
        xs = np.linspace(0.0, 1.0, 11)
        for q in VERIFY_Q:
            ours = apply(q_kantorovich_stancu(n, q), fig6, xs, tol)
            plain = apply(OperatorSpec(Kind.Q_BERNSTEIN_KANTOROVICH, n, q), fig6, xs, tol)
            red_q = max(red_q, np.max(np.abs(ours - plain)))
        near = apply(q_kantorovich_stancu(n, 1 - 1e-8), fig6, xs, tol)
        classical = apply(OperatorSpec(Kind.KANTOROVICH, n), fig6, xs, tol)
        red_classical = max(red_classical, np.max(np.abs(near - classical)))

    return [
        Check("partition-of-unity", dev["pou"], dev["pou"] <= 1e-12),
        Check("moment-m1-vs-brute-force", dev["m1"], dev["m1"] <= ORACLE_TOL),
        Check("moment-m2-vs-brute-force", dev["m2"], dev["m2"] <= ORACLE_TOL),
        Check("central2-vs-brute-force", dev["c2"], dev["c2"] <= ORACLE_TOL),
        Check("local-shift-identity", dev["shift"], dev["shift"] <= ORACLE_TOL),
        Check("dual-reading:ordinary-square-matches", dev["m2"], dev["m2"] <= ORACLE_TOL),
        Check("dual-reading:q-shifted-rejected", dev["shifted"], dev["shifted"] > 1e3 * ORACLE_TOL),
        Check("reduction:q-bernstein-kantorovich", red_q, red_q <= 1e-12),
        Check("reduction:classical-kantorovich", red_classical, red_classical <= 1e-5),
        Check("claim:central-moment-bound", max(dev["bound"], 0.0), dev["bound"] <= 1e-12, claim=True),
    ]


def cmd_verify(args) -> int:
    checks = run_checks(args.tolerance)
    text = "".join(c.line() + "\n" for c in checks)
    _emit(text, args.out)
    deciding = [c for c in checks if args.strict or not c.claim]
    return 0 if all(c.passed for c in deciding) else 1


# plot

_GNUPLOT = """set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 1200,400
set output '{stem}.png'
set multiplot layout 1,2
set title 'f and its approximants'
set xlabel 'x'
plot for [i=2:{ncols}] '{curves}' using 1:i with lines
set title 'sup error and bound vs {xvar}'
set logscale y
set xlabel '{xvar}'
plot '{sweep}' using {xcol}:3 with linespoints title 'sup error', \\
     '{sweep}' using {xcol}:4 with linespoints title 'bound'
unset multiplot
"""


def cmd_plot(args) -> int:
    out = Path(args.out or "qbs_sweep.csv")
    stem = out.with_suffix("")
    rows = _sweep_rows(args)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(_sweep_table(rows).to_text(), newline="\n")

    xs = np.linspace(0.0, 1.0, args.grid or 201)
    header = ["x", "f"]
    cols = [args.function(xs)]
    for r in rows:
        if math.isnan(r.sup_error):
            continue
        spec = q_kantorovich_stancu(r.n, r.q, args.params)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DomainWarning)
            cols.append(apply(spec, args.function, xs, args.tolerance))
        header.append(f"K_n{r.n}_q{r.q:.4g}")
    curves = CsvTable(header)
    for i, x in enumerate(xs):
        curves.add(x, *(c[i] for c in cols))
    curves_path = Path(f"{stem}_curves.csv")
    curves_path.write_text(curves.to_text(), newline="\n")

    by_q = args.q_list is not None
    script = _GNUPLOT.format(
        stem=stem.name,
        curves=curves_path.name,
        sweep=out.name,
        ncols=len(header),
        xvar="q" if by_q else "n",
        xcol=2 if by_q else 1,
    )
    Path(f"{stem}.gp").write_text(script, newline="\n")
    print(f"wrote {out}, {curves_path}, {stem}.gp", file=sys.stderr)
    return 1 if any(math.isnan(r.sup_error) for r in rows) else 0


HANDLERS = {
    "eval": cmd_eval,
    "moments": cmd_moments,
    "sweep": cmd_sweep,
    "voronovskaja": cmd_voronovskaja,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return HANDLERS[args.command](args)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(f"qbs: error: {exc}", file=sys.stderr)
        return 2
    except (JacksonTruncationError, NegativeDeltaError, ArithmeticError, ValueError) as exc:
        print(f"qbs: numeric failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"qbs: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
