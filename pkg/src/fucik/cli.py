"""Command-line interface.

Exit codes: 0 success, 1 configuration or input error, 2 eigenvalue not
found, 3 requested curve empty at the working resolution.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

from . import __version__
from .analysis import (
    DEFAULT_K_STOP,
    EmptyCurveError,
    InconsistencyError,
    asymptote_consistency,
    count_quadrant,
    spectrum_report,
)
from .eigen import EigenNotFound, eigenvalue
from .presets import PRESETS, preset_problem
from .problem import ProblemError, load_problem
from .shooting import (
    DEFAULT_TOL,
    TOL_CEILING,
    IntegrationError,
    Tolerances,
    shoot,
    write_trace_csv,
)
from .spectrum import DEFAULT_A_MAX, GRID_PER_DECADE, QUADRANTS, Quadrant, curves_csv, curves_json, trace_curve

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_FOUND = 2
EXIT_EMPTY = 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for "not found"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _tolerance(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (0 < v <= TOL_CEILING):
        raise argparse.ArgumentTypeError(f"tolerance must lie in ]0, {TOL_CEILING:g}], got {v:g}")
    return v


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_k(text: str) -> list[int]:
    """Parse '3', '-1', '1..4', '-3..-1' or comma-separated combinations."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = _RANGE.match(part)
        try:
            if m:
                lo, hi = int(m.group(1)), int(m.group(2))
                step = 1 if hi >= lo else -1
                out.extend(range(lo, hi + step, step))
            else:
                out.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad k specification {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty k specification")
    return out


def _interval(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected t1,t2, got {text!r}") from None
    return a, b


def _quadrant(text: str) -> Quadrant:
    try:
        return Quadrant.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("problem and numerics")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--problem", metavar="FILE", help="problem definition (JSON)")
    src.add_argument("--preset", metavar="NAME[:ARG]", help="built-in problem, see the presets command")
    g.add_argument("--tol-rel", type=_tolerance, default=DEFAULT_TOL.rtol, help="relative integration tolerance")
    g.add_argument("--tol-abs", type=_tolerance, default=DEFAULT_TOL.atol, help="absolute integration tolerance")
    g.add_argument("--tol-event", type=_tolerance, default=DEFAULT_TOL.event, help="tolerance on crossing times")
    g.add_argument("--a-max", type=_positive, default=DEFAULT_A_MAX, help="parameter scale for emptiness tests")
    g.add_argument("--grid-per-decade", type=int, default=GRID_PER_DECADE, help="curve samples per decade")
    g.add_argument("--workers", type=int, default=1, help="threads for curve tracing")
    o = common.add_argument_group("output")
    o.add_argument("--out", metavar="FILE", help="write results to FILE instead of stdout")
    o.add_argument("--format", choices=("csv", "json"), help="output format (default: table or csv)")

    p = _Parser(prog="fucik", description="Fucik spectra of weighted Dirichlet Sturm-Liouville problems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eigen", parents=[common], help="eigenvalues of the weighted linear problem")
    e.add_argument("--k", type=parse_k, default=[1], help="index or range, e.g. 1..4 or -1")
    e.add_argument("--which", choices=("m", "n"), default="m")
    e.add_argument("--sub", type=_interval, help="subinterval t1,t2 (default: whole interval)")

    z = sub.add_parser("zerofn", parents=[common], help="evaluate one zero-function value")
    z.add_argument("--a", type=float, required=True)
    z.add_argument("--s", type=float, help="start time (default: left end; right end with --inverse)")
    z.add_argument("--which", choices=("m", "n"), default="m")
    z.add_argument("--inverse", action="store_true", help="shoot backwards")
    z.add_argument("--trace", metavar="FILE", help="also write the integrated states as CSV")

    t = sub.add_parser("trace", parents=[common], help="sample Fucik curves C_k")
    t.add_argument("--k", type=parse_k, default=[2])
    t.add_argument("--branch", choices=("gt", "lt", ">", "<", "both"), default="gt")
    t.add_argument("--quadrant", type=_quadrant, default=Quadrant.PP)

    r = sub.add_parser("report", parents=[common], help="counts, trivial lines and asymptotes")
    r.add_argument("--quadrant", type=_quadrant, action="append", help="restrict to quadrant (repeatable)")
    r.add_argument("--k-stop", type=int, default=DEFAULT_K_STOP)

    c = sub.add_parser("count", parents=[common], help="nonempty sets C_k per quadrant")
    c.add_argument("--quadrant", type=_quadrant, action="append")
    c.add_argument("--k-stop", type=int, default=DEFAULT_K_STOP)

    a = sub.add_parser("asymptote", parents=[common], help="asymptotes of C_2 and distances to them")
    a.add_argument("--quadrant", type=_quadrant, default=Quadrant.PP)
    a.add_argument("--branch", choices=("gt", "lt", ">", "<"), default="gt")
    a.add_argument("--a-probe", type=_positive, help="first probe (default 100 x domain edge)")
    a.add_argument("--probes", type=int, default=5)

    sub.add_parser("presets", help="list built-in problems")
    return p


def _problem(args):
    if args.problem:
        return load_problem(args.problem)
    if args.preset:
        return preset_problem(args.preset)
    raise ConfigError("give a problem with --problem FILE or --preset NAME[:ARG]")


def _tol(args) -> Tolerances:
    return Tolerances(args.tol_rel, args.tol_abs, args.tol_event)


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _num(x) -> str:
    return "none" if x is None else f"{x:.17g}"


def cmd_eigen(args) -> int:
    prob = _problem(args)
    tol = _tol(args)
    rows = []
    for k in args.k:
        if k == 0:
            raise ConfigError("k must be nonzero")
        rows.append((k, eigenvalue(prob, args.which, k, args.sub, tol)))
    if args.format == "json":
        _emit(args, json.dumps([{"which": args.which, "k": k, "lambda": v} for k, v in rows], indent=2))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["which", "k", "lambda"])
        w.writerows([args.which, k, _num(v)] for k, v in rows)
        _emit(args, buf.getvalue())
    else:
        _emit(args, "\n".join([f"{'k':>4}  lambda"] + [f"{k:>4}  {_num(v)}" for k, v in rows]))
    return EXIT_OK


def cmd_zerofn(args) -> int:
    prob = _problem(args)
    t1, t2 = prob.interval
    s = args.s if args.s is not None else (t2 if args.inverse else t1)
    shot = shoot(prob, args.which, args.a, s, _tol(args), direction=-1 if args.inverse else 1,
                 trace_capacity=200_000 if args.trace else 0)
    if args.trace:
        write_trace_csv(shot, args.trace)
    value = shot.t if math.isfinite(shot.t) else None
    if args.format == "json":
        _emit(args, json.dumps({"which": args.which, "a": args.a, "s": s, "inverse": args.inverse,
                                "crossing": value, "beyond_horizon": value is None, "steps": shot.steps}))
    else:
        _emit(args, "BeyondHorizon" if value is None else f"{value:.17g}")
    return EXIT_OK


def cmd_trace(args) -> int:
    prob = _problem(args)
    branches = ("gt", "lt") if args.branch == "both" else (args.branch,)
    curves = []
    for k in args.k:
        if k < 2:
            raise ConfigError("trace needs k >= 2")
        for br in branches:
            curves.append(trace_curve(prob, k, br, args.quadrant, args.a_max, args.grid_per_decade,
                                      _tol(args), args.workers))
    _emit(args, curves_json(curves) if args.format == "json" else curves_csv(curves))
    empty = [c for c in curves if not c.nonempty]
    for c in empty:
        print(f"C{c.k} {c.branch} {c.quadrant}: {c.status}", file=sys.stderr)
    return EXIT_EMPTY if empty else EXIT_OK


def _quadrants(args):
    return args.quadrant or list(QUADRANTS)


def cmd_report(args) -> int:
    prob = _problem(args)
    rep = spectrum_report(prob, _quadrants(args), args.k_stop, args.a_max, _tol(args))
    if args.format == "json":
        _emit(args, rep.to_json())
    elif args.format == "csv":
        _emit(args, _counts_csv(rep.per_quadrant.values()))
    else:
        _emit(args, rep.table())
    return EXIT_OK


def _counts_csv(counts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quadrant", "k", "branch", "status", "total"])
    for qc in counts:
        for k, br, v in qc.entries:
            w.writerow([qc.quadrant.label, k, br, "Nonempty" if v.nonempty else "EmptyAtResolution", str(qc.total)])
    return buf.getvalue()


def cmd_count(args) -> int:
    prob = _problem(args)
    counts = [count_quadrant(prob, q, args.k_stop, args.a_max, _tol(args)) for q in _quadrants(args)]
    if args.format == "json":
        _emit(args, json.dumps([c.to_dict() for c in counts], indent=2))
    elif args.format == "csv":
        _emit(args, _counts_csv(counts))
    else:
        lines = []
        for c in counts:
            sets = " ".join(f"C{k}{'>' if br == 'gt' else '<'}" for k, br in c.nonempty_sets()) or "-"
            flag = "  (symbolically infinite)" if c.symbolically_infinite else ""
            lines.append(f"{c.quadrant.label}: {c.total}  {sets}{flag}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_asymptote(args) -> int:
    prob = _problem(args)
    rep = asymptote_consistency(prob, args.quadrant, args.branch, args.a_probe, args.probes, _tol(args), args.a_max)
    if args.format == "json":
        _emit(args, json.dumps(rep.to_dict(), indent=2))
    else:
        asy = rep.asymptotes
        lines = [
            f"C2 {asy.branch} {asy.quadrant}: case ({asy.case})",
            f"horizontal asymptote b = {_num(asy.horizontal)} on {asy.horizontal_interval}",
            f"vertical asymptote   a = {_num(asy.vertical)} on {asy.vertical_interval}",
            f"{'a':>24}  {'f(a)':>24}  distance",
        ]
        lines += [f"{a:>24.17g}  {b:>24.17g}  {r:.3e}"
                  for a, b, r in zip(rep.a_probes, rep.b_values, rep.horizontal_residuals)]
        lines.append(f"monotone: horizontal {rep.horizontal_monotone}, vertical {rep.vertical_monotone}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_presets(args) -> int:
    width = max(map(len, PRESETS))
    sys.stdout.write("\n".join(f"{k:<{width}}  {v}" for k, v in PRESETS.items()) + "\n")
    return EXIT_OK


COMMANDS = {
    "eigen": cmd_eigen,
    "zerofn": cmd_zerofn,
    "trace": cmd_trace,
    "report": cmd_report,
    "count": cmd_count,
    "asymptote": cmd_asymptote,
    "presets": cmd_presets,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ProblemError) as exc:
        print(f"fucik: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EigenNotFound as exc:
        print(f"fucik: not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except EmptyCurveError as exc:
        print(f"fucik: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (InconsistencyError, IntegrationError) as exc:
        print(f"fucik: numerical failure: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"fucik: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fucik: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
