"""Command-line front end: one subcommand per experiment.

Flags override values from an optional ``--config`` INI file; anything
left unset falls back to the documented defaults.  Exit codes: 0 on
success, 2 when the configuration is invalid (each violation printed on
its own line), 3 on cache or resource failures.
"""

from __future__ import annotations

import argparse
import sys

from .config import EXPERIMENTS, ExperimentConfig
from .errors import CacheCorruptionError, ConfigError, ResourceBudgetError
from .runner import run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divisorlab",
        description="Divisor-sum error-term experiments: sieves, truncated "
        "expansions, moments, tuple counts and extrema scans.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        s = sub.add_parser(name, help=f"run the {name} experiment")
        s.add_argument("--config", default=None, metavar="FILE",
                       help="INI file with defaults for this run")
        s.add_argument("--k", type=int, default=None,
                       help="divisor order k")
        s.add_argument("--m", type=int, default=None,
                       help="moment power m")
        s.add_argument("--l", type=int, default=None,
                       help="half-tuple size for counting")
        s.add_argument("--x", default=None, metavar="LIST",
                       help="comma-separated x values")
        s.add_argument("--h", default=None, metavar="LIST",
                       help="comma-separated interval lengths")
        s.add_argument("--n", default=None, metavar="LIST",
                       help="comma-separated N values")
        s.add_argument("--delta", default=None, metavar="LIST",
                       help="comma-separated window parameters")
        s.add_argument("--limit", type=int, default=None,
                       help="divisor table size")
        s.add_argument("--order", type=int, default=None,
                       help="quadrature order (4..16)")
        s.add_argument("--samples", type=int, default=None,
                       help="sample count for randomised sweeps")
        s.add_argument("--seed", type=int, default=None,
                       help="seed for all sampling in this run")
        s.add_argument("--cache-dir", default=None,
                       help="directory for divisor table caches")
        s.add_argument("--out", default=None,
                       help="directory for CSV/JSON reports")
    return parser


def _floats(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _ints(text: str) -> tuple:
    return tuple(int(part) for part in text.split(",") if part.strip())


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        cfg = ExperimentConfig.load(args.config)
        cfg = cfg.with_overrides(experiment=args.experiment)
    else:
        cfg = ExperimentConfig(experiment=args.experiment)
    overrides = {}
    if args.k is not None:
        overrides["k"] = args.k
    if args.m is not None:
        overrides["m"] = args.m
    if args.l is not None:
        overrides["l"] = args.l
    if args.x is not None:
        overrides["x_list"] = _floats(args.x)
    if args.h is not None:
        overrides["h_list"] = _floats(args.h)
    if args.n is not None:
        overrides["n_list"] = _ints(args.n)
    if args.delta is not None:
        overrides["delta_list"] = _floats(args.delta)
    if args.limit is not None:
        overrides["limit"] = args.limit
    if args.order is not None:
        overrides["order"] = args.order
    if args.samples is not None:
        overrides["sample_count"] = args.samples
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.cache_dir is not None:
        overrides["cache_dir"] = args.cache_dir
    if args.out is not None:
        overrides["out_dir"] = args.out
    return cfg.with_overrides(**overrides)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        artifacts = run_experiment(cfg)
    except ConfigError as exc:
        print("invalid configuration:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid configuration:\n  - {exc}", file=sys.stderr)
        return 2
    except (CacheCorruptionError, ResourceBudgetError) as exc:
        print(f"resource failure: {exc}", file=sys.stderr)
        return 3
    print(artifacts.csv_path)
    print(artifacts.json_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
