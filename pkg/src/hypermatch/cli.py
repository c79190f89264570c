"""Command-line interface: ``hypermatch <subcommand> ...``.

Exit status is 0 on success, 1 on a usage error and 2 on a runtime error
(parse failure, exhausted node budget, invalid parameters).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .bounds import (
    DEFAULT_DELTA,
    DEFAULT_DENSE_FRACTION,
    chebyshev_ratio,
    conditional_match_probability_bound,
    expected_matchings_bounds,
    expected_matchings_exact,
    markov_no_pair_bound,
    match_probability,
    regime_classify,
    variance_upper_bound,
)
from .combinatorics import LogNumber
from .errors import BudgetExceeded, HypermatchError
from .experiments import (
    GAP,
    UNITY,
    SweepConfig,
    read_summary_csv,
    run_sweep,
    summarize,
    summary_csv_text,
    write_summary_csv,
    write_trials_csv,
)
from .hypergraph import RNG_FAMILY, parse_instance, sample_hypergraph, serialize_instance
from .plotting import STYLES, write_plot
from .solver import DEFAULT_NODE_BUDGET, export_ilp, max_matching_exact

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

# Exact rational values are included in `analyze` output up to this n.
EXACT_MAX_N = 30

QUANTITIES = (
    "match-probability",
    "expected-upper",
    "expected-lower",
    "expected-exact",
    "markov",
    "conditional",
    "variance",
    "chebyshev",
    "regime",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


def _version_text() -> str:
    return f"hypermatch {__version__} (rng {RNG_FAMILY}, numpy {np.__version__})"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypermatch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=_version_text())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="draw an instance from H(n, M)")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", "--edges", dest="M", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", help="instance file (default: stdout)")

    p = sub.add_parser("solve", help="print the hyper-matching number of an instance")
    p.add_argument("-i", "--input", required=True, help="instance file, or - for stdin")
    p.add_argument("--witness", action="store_true", help="print JSON with a maximum matching")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--no-preprocess", action="store_true")

    p = sub.add_parser("analyze", help="evaluate a closed-form quantity as JSON")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-m", "--edges", dest="M", type=int)
    size = p.add_mutually_exclusive_group()
    size.add_argument("-k", type=int)
    size.add_argument("-f", type=int)
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--support", type=int, help="n_S for match-probability (default n)")
    p.add_argument("--ell", type=int, help="shared edges for conditional")
    p.add_argument("--overlap-support", dest="t", type=int, help="t for conditional")
    p.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    p.add_argument("--dense-fraction", type=float, default=DEFAULT_DENSE_FRACTION)

    p = sub.add_parser("sweep", help="run a Monte-Carlo sweep and write CSVs")
    p.add_argument("--mode", choices=(UNITY, GAP), required=True)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", dest="master_seed", type=int, default=0)
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=55)
    p.add_argument("--base", type=float, default=1.154)
    p.add_argument("-n", type=int, default=13)
    p.add_argument("--m-start", type=int, default=1)
    p.add_argument("--m-stop", type=int)
    p.add_argument("--step", type=int, default=10)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.add_argument("--trials-out", required=True)
    p.add_argument("--summary-out", required=True)
    p.add_argument("--figure-out", help="also render the summary to this SVG")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("plot", help="render a summary CSV to SVG")
    p.add_argument("-i", "--input", required=True, help="summary CSV, or - for stdin")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--style", choices=STYLES, default="auto")

    p = sub.add_parser("export-ilp", help="write the 0/1 program in LP format")
    p.add_argument("-i", "--input", required=True, help="instance file, or - for stdin")
    p.add_argument("-o", "--output", help="LP file (default: stdout)")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json_value(x) -> dict:
    """Float value, log10 magnitude and clamped probability of a LogNumber."""
    value = float(x)
    return {
        "value": value if math.isfinite(value) else None,
        "log10_value": x.log10 if not x.is_zero else None,
        "clamped": x.clamped(),
    }


def analyze(args) -> dict:
    n, M = args.n, args.M
    size = args.k if args.k is not None else args.f
    q = args.quantity

    def need(name, value):
        if value is None:
            raise UsageError(f"--quantity {q} needs {name}")
        return value

    if q != "conditional":
        need("-m", M)
    if q not in ("markov", "regime"):
        need("-k or -f", size)

    def evaluate(exact: bool):
        if q == "match-probability":
            return match_probability(n, args.support or n, size, exact=exact)
        if q == "expected-upper":
            return expected_matchings_bounds(n, M, size, exact=exact).upper
        if q == "expected-lower":
            return expected_matchings_bounds(n, M, size, exact=exact).lower
        if q == "expected-exact":
            return expected_matchings_exact(n, M, size, exact=exact)
        if q == "markov":
            return markov_no_pair_bound(n, M, exact=exact)
        if q == "conditional":
            return conditional_match_probability_bound(
                n, size, need("--ell", args.ell), need("--overlap-support", args.t), exact=exact)
        if q == "variance":
            return variance_upper_bound(n, M, size, exact=exact)
        if q == "chebyshev":
            return chebyshev_ratio(n, M, size, exact=exact)
        raise AssertionError(q)

    out = {"n": n, "M": M, "k_or_f": size, "quantity": q}
    if q != "regime":
        value = evaluate(exact=False)
        out["exact"] = str(evaluate(exact=True)) if n <= EXACT_MAX_N else None
        out.update(_json_value(value))
    if M is not None:
        report = regime_classify(n, M, args.delta, args.dense_fraction)
        out["regime"] = {
            "regime": report.regime.value,
            "lower": report.lower_fn_value,
            "upper": report.upper_fn_value,
            "delta": report.delta,
            "dense_fraction": report.dense_fraction,
            "unit_threshold": report.unit_threshold,
        }
    return out


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "sample":
        h = sample_hypergraph(args.n, args.M, args.seed)
        _write(args.output, serialize_instance(h))
    elif cmd == "solve":
        h = parse_instance(_read(args.input))
        matching, _ = max_matching_exact(
            h, preprocess=not args.no_preprocess, node_budget=args.node_budget)
        if args.witness:
            print(json.dumps({"matching_number": matching.size,
                              "witness": matching.edge_sets()}))
        else:
            print(matching.size)
    elif cmd == "analyze":
        print(json.dumps(analyze(args)))
    elif cmd == "sweep":
        config = SweepConfig(
            mode=args.mode, trials=args.trials, master_seed=args.master_seed,
            n_min=args.n_min, n_max=args.n_max, base=args.base,
            n=args.n, m_start=args.m_start, m_stop=args.m_stop, step=args.step,
            node_budget=args.node_budget, trials_out=args.trials_out,
            summary_out=args.summary_out, figure_out=args.figure_out,
        )
        records = run_sweep(config, jobs=args.jobs)
        rows = summarize(records)
        write_trials_csv(records, config.trials_out)
        write_summary_csv(rows, config.summary_out)
        if config.figure_out:
            # Draw what the summary CSV holds so `plot` reproduces the figure.
            rows = read_summary_csv(summary_csv_text(rows))
            write_plot(rows, config.figure_out, style=config.mode)
    elif cmd == "plot":
        rows = read_summary_csv(_read(args.input))
        write_plot(rows, args.output, style=args.style)
    elif cmd == "export-ilp":
        h = parse_instance(_read(args.input))
        _write(args.output, export_ilp(h))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _dispatch(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hypermatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"hypermatch: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (HypermatchError, OSError) as exc:
        print(f"hypermatch: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
