"""Command-line entry point: simulate, estimate, confint, benchmark."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .benchmark import (
    DATA_REGIMES,
    METHODS,
    BenchmarkConfig,
    run_benchmark,
    simulate_datasets,
)
from .confidence import conf_ev, conf_general, conf_pev
from .dualml import estimate_effects
from .exceptions import (
    CausalConfError,
    DegenerateQuadratic,
    GenerationExhausted,
    ParseError,
    SingularBlock,
    SingularCovariance,
)
from .matrixcore import SampleMatrix, empirical_covariance, invert_pd
from .scm import PARTIAL_EV, Regime

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_CONF_BY_REGIME = {"general": conf_general, "partial_ev": conf_pev, "ev": conf_ev}


def read_samples_csv(path: str) -> SampleMatrix:
    """Parse a samples CSV: n rows of d numeric columns, optional header."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if lineno == 1:
                    width = len(parts)  # header row
                    continue
                raise ParseError(
                    f"{path}: line {lineno}: non-numeric entry", line=lineno
                ) from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ParseError(
                    f"{path}: line {lineno}: expected {width} columns, got {len(values)}",
                    line=lineno,
                )
            if not all(v == v and abs(v) != float("inf") for v in values):
                raise ParseError(
                    f"{path}: line {lineno}: non-finite entry", line=lineno
                )
            rows.append(values)
    if not rows:
        raise ParseError(f"{path}: no data rows", line=1)
    return SampleMatrix(rows)


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _parse_name_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalconf",
        description=(
            "Total causal effects and test-inversion confidence regions in "
            "linear Gaussian SCMs under three error-variance regimes."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write synthetic SCMs and sample CSVs")
    sim.add_argument("--d", type=int, default=10)
    sim.add_argument("--n", type=_parse_int_list, default=(1000,))
    sim.add_argument("--reps", type=int, default=1000)
    sim.add_argument("--regime", choices=DATA_REGIMES, default="general")
    sim.add_argument("--truth", choices=("nonzero", "zero"), default="nonzero")
    sim.add_argument("--i", type=int, default=0)
    sim.add_argument("--j", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default="simdata")
    sim.set_defaults(func=_cmd_simulate)

    est = sub.add_parser("estimate", help="set-valued effect estimate from a CSV")
    est.add_argument("data", help="samples CSV (n rows x d columns, optional header)")
    est.add_argument("--regime", choices=DATA_REGIMES, default="general")
    est.add_argument("--i", type=int, default=0)
    est.add_argument("--j", type=int, default=1)
    est.add_argument("--center", action="store_true", help="subtract column means")
    est.set_defaults(func=_cmd_estimate)

    conf = sub.add_parser("confint", help="confidence region from a CSV")
    conf.add_argument("data", help="samples CSV (n rows x d columns, optional header)")
    conf.add_argument("--regime", choices=DATA_REGIMES, default="general")
    conf.add_argument("--alpha", type=float, default=0.05)
    conf.add_argument("--i", type=int, default=0)
    conf.add_argument("--j", type=int, default=1)
    conf.add_argument("--center", action="store_true", help="subtract column means")
    conf.set_defaults(func=_cmd_confint)

    bench = sub.add_parser("benchmark", help="Monte-Carlo coverage/width study")
    bench.add_argument("--d", type=int, default=10)
    bench.add_argument("--n", type=_parse_int_list, default=(100, 1000, 10000))
    bench.add_argument("--reps", type=int, default=1000)
    bench.add_argument("--alpha", type=float, default=0.05)
    bench.add_argument(
        "--regime",
        type=_parse_name_list,
        default=DATA_REGIMES,
        help="comma-separated data regimes",
    )
    bench.add_argument(
        "--methods",
        type=_parse_name_list,
        default=METHODS,
        help="comma-separated confidence methods",
    )
    bench.add_argument("--truth", choices=("nonzero", "zero"), default="nonzero")
    bench.add_argument("--i", type=int, default=0)
    bench.add_argument("--j", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", default="bench")
    bench.add_argument("--workers", type=int, default=1)
    bench.set_defaults(func=_cmd_benchmark)
    return parser


def _load_precision(args):
    data = read_samples_csv(args.data)
    sigma = empirical_covariance(data, center=args.center)
    return data, invert_pd(sigma)


def _cmd_simulate(args) -> int:
    if len(args.n) != 1:
        print("simulate takes a single --n value", file=sys.stderr)
        return EXIT_USAGE
    paths = simulate_datasets(
        d=args.d,
        n=args.n[0],
        reps=args.reps,
        regime_kind=args.regime,
        truth=args.truth,
        i=args.i,
        j=args.j,
        seed=args.seed,
        out=args.out,
    )
    for p in paths:
        print(p)
    return EXIT_OK


def _cmd_estimate(args) -> int:
    data, prec = _load_precision(args)
    regime = (
        Regime.partial_ev(args.i, args.j)
        if args.regime == PARTIAL_EV
        else Regime(args.regime)
    )
    estimate = estimate_effects(prec, data.n, args.i, args.j, regime)
    print(json.dumps(estimate.to_json()))
    return EXIT_OK


def _cmd_confint(args) -> int:
    data, prec = _load_precision(args)
    region = _CONF_BY_REGIME[args.regime](prec, data.n, args.i, args.j, args.alpha)
    print(json.dumps(region.to_json()))
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    config = BenchmarkConfig(
        d=args.d,
        n_values=args.n,
        reps=args.reps,
        alpha=args.alpha,
        data_regimes=args.regime,
        methods=args.methods,
        effect_truth=args.truth,
        i=args.i,
        j=args.j,
        seed=args.seed,
        out=args.out,
        workers=args.workers,
    )
    for p in run_benchmark(config):
        print(p)
    return EXIT_OK


def main(argv=None) -> int:
    level = os.environ.get("CAUSALCONF_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SingularCovariance, GenerationExhausted, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DegenerateQuadratic, SingularBlock) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except CausalConfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
