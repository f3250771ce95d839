"""Command-line entry points: run one config, sweep a directory of configs,
or merge aggregates into plot-ready files.

Exit codes: 0 success, 2 configuration error, 3 model inconsistency
(an update wiped out a posterior) during a run.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .beliefs import ZeroMassError
from .experiments import ConfigError, ExperimentConfig, emit_plotdata, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decbayes",
        description="Decentralized multi-agent Bayes filtering experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a single experiment config")
    run.add_argument("--config", required=True, help="path to a config JSON file")
    run.add_argument("--seeds", type=int, help="override: run seeds 0..N-1")
    run.add_argument("--out", help="override the config's output directory")

    sweep = sub.add_parser("sweep", help="run every config JSON in a directory")
    sweep.add_argument("--configs", required=True, help="directory of config JSON files")
    sweep.add_argument("--seeds", type=int, help="override: run seeds 0..N-1")
    sweep.add_argument("--out", help="override every config's output directory")

    plot = sub.add_parser("plotdata", help="merge aggregates into per-metric files")
    plot.add_argument("--in", dest="in_dir", required=True, help="directory of *_aggregate.csv")
    plot.add_argument("--out", required=True, help="output directory for per-metric files")
    return parser


def _load_config(path, seed_count) -> ExperimentConfig:
    config = ExperimentConfig.from_json(path)
    if seed_count is not None:
        if seed_count < 1:
            raise ConfigError("--seeds must be positive")
        config = ExperimentConfig.from_dict({**config.to_dict(), "seeds": list(range(seed_count))})
    return config


def _cmd_run(args) -> int:
    config = _load_config(args.config, args.seeds)
    result = run_experiment(config, out_dir=args.out)
    print(f"{config.name}: {len(config.seeds)} seed(s) -> {result.output_dir}")
    return 0


def _cmd_sweep(args) -> int:
    config_dir = Path(args.configs)
    paths = sorted(config_dir.glob("*.json"))
    if not paths:
        raise ConfigError(f"no config JSON files under {config_dir}")
    configs = [_load_config(path, args.seeds) for path in paths]

    failed = []
    for config in configs:
        try:
            result = run_experiment(config, out_dir=args.out)
        except ZeroMassError as exc:
            print(f"error: {exc}", file=sys.stderr)
            failed.append(config.name)
            continue
        print(f"{config.name}: {len(config.seeds)} seed(s) -> {result.output_dir}")
    if failed:
        print(f"{len(failed)} run(s) failed: {', '.join(failed)}", file=sys.stderr)
        return 3
    return 0


def _cmd_plotdata(args) -> int:
    for path in emit_plotdata(args.in_dir, args.out):
        print(path)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "plotdata": _cmd_plotdata}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ZeroMassError as exc:
        print(f"model inconsistency: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
