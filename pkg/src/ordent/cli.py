"""Command-line interface: ``ordent <command> [options]``.

Commands
--------
encode    ordinal-pattern ranks of each input series
entropy   empirical permutation entropy report(s)
sweep     permutation entropy over a range of orders
labels    comparison labels (P, Ptilde, Q, R) of every window
exact     exact entropy-rate table of a PL map's ordinal partition
examples  the two tent-map separation examples

Exit codes: 0 ok, 2 usage, 3 input parse, 4 resource budget.  Errors are
reported on stderr as ``ERROR <code> <kind>: <message>``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import log

import mpmath
import numpy as np

from . import exactpl
from ._errors import InputParseError, InvalidArgumentError, ResourceLimitError
from ._format import fmt_float
from .demos import ordered_observables_demo, separation_demo
from .entropy import (EmpiricalDistribution, empirical_permutation_entropy, shannon_entropy)
from .io import FORMATS, ingest, ingest_symbols
from .labels import FAMILIES, label_sequence
from .patterns import rank_sequence
from .systems import (SystemSpec, example1_observable, example2_observables, observation_windows,
                      orbit, system_map)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 0, 2, 3, 4

OBSERVABLES = {
    "id": lambda: None,
    "binary": lambda: exactpl.PiecewiseLinearMap.from_breakpoints([0, "1/2", 1], [(0, 0), (0, 1)]),
    "example1": example1_observable,
    "example2x": lambda: example2_observables()[0],
    "example2y": lambda: example2_observables()[1],
}

SYSTEM_HELP = (
    "builtin system as key=value pairs or JSON, e.g. 'map=tent initial=0.3 length=100000'. "
    "Maps: tent, logistic (r), rotation (alpha), identity, noise (seed). Float tent orbits "
    "longer than 1000 states are generated via the conjugate logistic map; use mode=exact "
    "for exact rational orbits.")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors through :func:`run`."""

    def error(self, message):
        raise _UsageError(message)


def _add_input(p):
    g = p.add_argument_group("input")
    g.add_argument("--input", "-i", help="path to a data file")
    g.add_argument("--format", "-f", choices=FORMATS, default="plain", help="input file format")
    g.add_argument("--system", help=SYSTEM_HELP)
    g.add_argument("--seed", type=int, default=None, help="RNG seed for noise systems")


def _add_output(p, default="json"):
    p.add_argument("--output", "-o", choices=("json", "csv", "text"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordent", description="Ordinal patterns and entropy.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="ordinal-pattern ranks")
    _add_input(p)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tau", type=int, default=1)
    _add_output(p, "text")

    p = sub.add_parser("entropy", help="empirical permutation entropy")
    _add_input(p)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tau", type=int, default=1)
    p.add_argument("--symbols", action="store_true",
                   help="treat the input as a symbol sequence (one per line), e.g. encode output")
    p.add_argument("--base2", action="store_true", help="display entropies in bits")
    _add_output(p)

    p = sub.add_parser("sweep", help="permutation entropy over a range of orders")
    _add_input(p)
    p.add_argument("--d-min", type=int, default=1)
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--tau", type=int, default=1)
    p.add_argument("--base2", action="store_true")
    _add_output(p, "csv")

    p = sub.add_parser("labels", help="comparison labels of every window")
    _add_input(p)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--family", choices=FAMILIES, default="P")
    _add_output(p, "text")

    p = sub.add_parser("exact", help="exact entropy-rate table")
    p.add_argument("--map", choices=("tent", "identity"), default="tent")
    p.add_argument("--obs", choices=sorted(OBSERVABLES), default="id")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--family", choices=FAMILIES + ("level",), default="P",
                   help="'level' uses the observable's level sets instead of an ordinal partition")
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--precision", type=int, default=30, help="decimal digits for logarithms")
    p.add_argument("--budget", type=int, default=None,
                   help="maximum number of intervals (default: $ORDENT_BUDGET or 1000000)")
    p.add_argument("--cells", action="store_true", help="print the order-d cells instead")
    p.add_argument("--base2", action="store_true")
    _add_output(p, "csv")

    p = sub.add_parser("examples", help="tent-map separation examples")
    p.add_argument("--d-max", type=int, default=12)
    _add_output(p, "text")
    return parser


def _load_series(args) -> list:
    if args.input and args.system:
        raise InvalidArgumentError("give either --input or --system, not both")
    if args.input:
        return ingest(args.input, args.format)
    if args.system:
        text = args.system
        if text.startswith("@"):
            try:
                with open(text[1:], encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputParseError(f"cannot read {text[1:]}: {exc}") from exc
        spec = SystemSpec.parse(text)
        if args.seed is not None:
            spec.seed = args.seed
        states = orbit(spec)
        return [[float(s) for s in states] if isinstance(states, list) else states]
    raise InvalidArgumentError("no input: pass --input PATH or --system KEY=VALUE")


def _emit_table(out, header, rows, fmt):
    if fmt == "json":
        out.write(json.dumps([dict(zip(header, r)) for r in rows], sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    else:
        for r in rows:
            out.write(" ".join(f"{h}={v}" for h, v in zip(header, r)) + "\n")


def cmd_encode(args, out):
    series = _load_series(args)
    ranks = [rank_sequence(s, args.d, args.tau) for s in series]
    if args.output == "json":
        doc = {"order": args.d, "delay": args.tau,
               "series": [{"index": i, "ranks": r.tolist()} for i, r in enumerate(ranks)]}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    elif args.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t"] + [f"series{i}" for i in range(len(ranks))])
        n = min(len(r) for r in ranks)
        for t in range(n):
            w.writerow([t] + [int(r[t]) for r in ranks])
    else:
        for i, r in enumerate(ranks):
            if i:
                out.write("\n")
            out.write("".join(f"{v}\n" for v in r.tolist()))


def cmd_entropy(args, out):
    if args.symbols:
        if not args.input:
            raise InvalidArgumentError("--symbols needs --input")
        dist = EmpiricalDistribution.from_symbols(ingest_symbols(args.input))
        h = shannon_entropy(dist)
        scale = 1 / log(2) if args.base2 else 1.0
        doc = {"order": args.d, "windows": dist.total, "distinct_symbols": dist.distinct,
               "unit": "bits" if args.base2 else "nats",
               "shannon_entropy": fmt_float(h * scale),
               "permutation_entropy": fmt_float(h / args.d * scale)}
        reports = [doc]
    else:
        reports = [empirical_permutation_entropy(s, args.d, args.tau).to_dict(base2=args.base2)
                   for s in _load_series(args)]
    if args.output == "json":
        out.write(json.dumps({"reports": reports}, sort_keys=True) + "\n")
        return
    keys = sorted(k for k in reports[0] if k != "distribution")
    if args.output == "csv":
        _emit_table(out, ["series"] + keys, [[i] + [r[k] for k in keys] for i, r in enumerate(reports)], "csv")
    else:
        for i, r in enumerate(reports):
            out.write(f"series={i}\n" + "".join(f"{k}={r[k]}\n" for k in keys))


def cmd_sweep(args, out):
    if args.d_min < 1 or args.d_max < args.d_min:
        raise InvalidArgumentError("need 1 <= d-min <= d-max")
    scale = 1 / log(2) if args.base2 else 1.0
    rows = []
    for i, s in enumerate(_load_series(args)):
        for d in range(args.d_min, args.d_max + 1):
            r = empirical_permutation_entropy(s, d, args.tau)
            rows.append([i, d, fmt_float(r.shannon_entropy * scale), fmt_float(r.permutation_entropy * scale),
                         r.distinct_symbols, fmt_float(r.undersampling_ratio), r.undersampling_warning])
    header = ["series", "d", "shannon_entropy", "permutation_entropy", "distinct",
              "undersampling_ratio", "undersampling_warning"]
    _emit_table(out, header, rows, args.output)


def cmd_labels(args, out):
    series = _load_series(args)
    n = min(len(s) for s in series)
    values = np.vstack([np.asarray(s[:n], dtype=float) for s in series])
    labs = label_sequence(observation_windows(values, args.d), args.family)
    if args.output == "json":
        out.write(json.dumps({"family": args.family, "order": args.d, "n_observables": len(series),
                              "labels": [lab.outcomes for lab in labs]}, sort_keys=True) + "\n")
    elif args.output == "csv":
        _emit_table(out, ["t", "label"], [[t, lab.serialize()] for t, lab in enumerate(labs)], "csv")
    else:
        out.write("".join(lab.serialize() + "\n" for lab in labs))


def _num(x, digits=12):
    return mpmath.nstr(x, digits, strip_zeros=False)


def cmd_exact(args, out):
    T = system_map(args.map)
    obs = OBSERVABLES[args.obs]()
    if args.family == "level":
        if obs is None:
            raise InvalidArgumentError("--family level needs a piecewise-constant --obs")
        base = exactpl.level_set_partition(obs)
    else:
        base = exactpl.ordinal_cells(T, obs, args.d, args.family, args.budget)
    if args.cells:
        out.write(base.to_text())
        return
    rows = exactpl.partition_rate_table(base, T, args.tmax, args.precision, args.budget)
    scale = 1 / mpmath.log(2) if args.base2 else 1
    table = [[r.t, _num(r.block_entropy * scale), _num(r.rate * scale), _num(r.increment * scale), r.cells]
             for r in rows]
    _emit_table(out, ["t", "H_t", "H_t_over_t", "increment", "cells"], table, args.output)


def cmd_examples(args, out):
    ex1 = separation_demo(args.d_max)
    ex2 = ordered_observables_demo(args.d_max)
    if args.output == "json":
        doc = {"separation": {**ex1, "ptilde_separated": {str(k): v for k, v in ex1["ptilde_separated"].items()}},
               "ordered_observables": {**ex2, "p_Y_separated": {str(k): v for k, v in ex2["p_Y_separated"].items()}}}
        out.write(json.dumps(doc, sort_keys=True) + "\n")
        return

    def row(r):
        return "(" + ",".join(str(v) for v in r) + ",...)"
    lines = [
        "# Y = 2*1[0,1/3] + 3*1(1/3,2/3] + 1*1(2/3,1] on the tent map",
        f"Y-row w=1:   {row(ex1['rows'][0])}",
        f"Y-row w=5/6: {row(ex1['rows'][1])}",
        f"Ptilde(Y)-separated for d<={args.d_max}: {str(any(ex1['ptilde_separated'].values())).lower()}",
        f"P(YoT)-separated at d=1: {str(ex1['p_YoT_separated_d1']).lower()}",
        "# X = 2*1[0,5/8] + 1*1(5/8,1];  Y = 4*1[0,1/8]u[3/8,5/8] + 3*1(1/8,3/8) + 1*1(5/8,1]",
        f"X-row w=1/4: {row(ex2['rows']['X'][0])}",
        f"X-row w=3/4: {row(ex2['rows']['X'][1])}",
        f"Y-row w=1/4: {row(ex2['rows']['Y'][0])}",
        f"Y-row w=3/4: {row(ex2['rows']['Y'][1])}",
        f"X precedes Y on grid: {str(ex2['x_precedes_y']).lower()}",
        f"P(X)-separated at d=1: {str(ex2['p_X_separated_d1']).lower()}",
        f"P(Y)-separated for d<={args.d_max}: {str(any(ex2['p_Y_separated'].values())).lower()}",
    ]
    if args.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["item", "value"])
        for ln in lines:
            if not ln.startswith("#"):
                k, v = ln.split(":", 1)
                w.writerow([k.strip(), v.strip()])
        return
    out.write("\n".join(lines) + "\n")


COMMANDS = {
    "encode": cmd_encode,
    "entropy": cmd_entropy,
    "sweep": cmd_sweep,
    "labels": cmd_labels,
    "exact": cmd_exact,
    "examples": cmd_examples,
}


def run(argv=None, out=None, err=None) -> int:
    """Run one command; returns the exit status instead of exiting."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(f"ERROR {EXIT_USAGE} usage: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        COMMANDS[args.command](args, buf)
    except InputParseError as exc:
        err.write(f"ERROR {EXIT_PARSE} input-parse: {exc}\n")
        return EXIT_PARSE
    except ResourceLimitError as exc:
        err.write(f"ERROR {EXIT_BUDGET} resource-budget: {exc}\n")
        return EXIT_BUDGET
    except InvalidArgumentError as exc:
        err.write(f"ERROR {EXIT_USAGE} invalid-argument: {exc}\n")
        return EXIT_USAGE
    out.write(buf.getvalue())
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
