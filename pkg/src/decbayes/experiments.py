"""Experiment configuration, seed sweeps, aggregation, and file output.

A run is fully described by an ExperimentConfig (JSON on disk, every field
explicit in the materialized run log). Running it produces, per variant:

    <name>_steps.csv      seed,t,step_reward,cumulative_reward,total_w1,prey_w1
    <name>_aggregate.csv  t,cumulative_reward,total_w1,prey_w1   (means over seeds)
    <name>_config.json    the materialized configuration

Floats are serialized with 17 significant digits so emitted values
round-trip exactly; given the same config and seeds, every emitted byte is
reproducible.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .beliefs import ZeroMassError
from .policies import PolicyKind
from .simulation import Episode, MetricsRecord, Scenario

TASKS = ("congregation", "predator_prey")
SYSTEMS = ("decentralized", "oracle", "random")


class ConfigError(ValueError):
    """Invalid experiment configuration; rejected before any episode runs."""


@dataclass
class ExperimentConfig:
    """One experiment variant. Defaults mirror the base study setup:
    10x10 grid, 5 agents, sensing range 1, horizon 30, seeds 0..99."""

    task: str
    system: str = "decentralized"
    H: int = 10
    W: int = 10
    n_agents: int = 5
    n_prey: int = 1
    sensing_range: int = 1
    feature_alphabet: int = 4
    rounds: int = 1
    horizon: int = 30
    seeds: tuple = tuple(range(100))
    separation_radius: int = 1
    feature_assignment: str = "shuffled"
    output_path: str = "results"
    name: str = ""

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.system not in SYSTEMS:
            raise ConfigError(f"system must be one of {SYSTEMS}, got {self.system!r}")
        if self.task == "congregation":
            self.n_prey = 0
        elif self.n_prey < 1:
            raise ConfigError("predator_prey needs n_prey >= 1")
        if self.system == "oracle":
            self.rounds = 0
        for field_name in ("H", "W", "n_agents", "horizon", "feature_alphabet"):
            if getattr(self, field_name) < 1:
                raise ConfigError(f"{field_name} must be positive")
        if self.sensing_range < 0 or self.rounds < 0 or self.separation_radius < 0:
            raise ConfigError("ranges and rounds must be non-negative")
        if self.feature_assignment not in ("shuffled", "round_robin"):
            raise ConfigError("feature_assignment must be 'shuffled' or 'round_robin'")
        if self.n_agents + self.n_prey > self.H * self.W:
            raise ConfigError("n_agents + n_prey exceeds the number of cells")
        self.seeds = tuple(int(s) for s in self.seeds)
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if not self.name:
            self.name = f"{self.task}_{self.system}_r{self.rounds}"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "task" not in data:
            raise ConfigError("config must name a task")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["seeds"] = list(self.seeds)
        return data

    def scenario(self) -> Scenario:
        if self.system == "random":
            policy = PolicyKind.RANDOM
        elif self.task == "congregation":
            policy = PolicyKind.CONGREGATION
        else:
            policy = PolicyKind.PREDATOR
        # The oracle's sensing spans the map; rewards keep the base range.
        vis_range = max(self.H, self.W) if self.system == "oracle" else self.sensing_range
        return Scenario(
            height=self.H,
            width=self.W,
            n_features=self.feature_alphabet,
            n_agents=self.n_agents,
            n_external=self.n_prey,
            task=self.task,
            agent_policy=policy,
            sensing_range=vis_range,
            reward_range=self.sensing_range,
            rounds=self.rounds,
            horizon=self.horizon,
            separation_radius=self.separation_radius,
            feature_assignment=self.feature_assignment,
        )


@dataclass
class AggregateRow:
    """Per-timestep means across seeds."""

    t: int
    cumulative_reward: float
    total_w1: float
    prey_w1: Optional[float]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: dict[int, list[MetricsRecord]]
    aggregate_rows: list[AggregateRow]
    output_dir: Optional[Path]


def aggregate(records_by_seed: dict[int, list[MetricsRecord]]) -> list[AggregateRow]:
    """Arithmetic mean per timestep across seeds; horizons must match."""
    streams = list(records_by_seed.values())
    horizon = len(streams[0])
    if any(len(stream) != horizon for stream in streams):
        raise ValueError("record streams have mismatched horizons")
    rows = []
    for step in range(horizon):
        at_t = [stream[step] for stream in streams]
        if any(rec.t != at_t[0].t for rec in at_t):
            raise ValueError("record streams have mismatched timesteps")
        has_prey = at_t[0].prey_w1 is not None
        rows.append(
            AggregateRow(
                t=at_t[0].t,
                cumulative_reward=sum(r.cumulative_reward for r in at_t) / len(at_t),
                total_w1=sum(r.total_w1 for r in at_t) / len(at_t),
                prey_w1=sum(r.prey_w1 for r in at_t) / len(at_t) if has_prey else None,
            )
        )
    return rows


def _fmt(value: Optional[float]) -> str:
    # 17 significant digits round-trip any float64 exactly.
    return "" if value is None else f"{value:.17g}"


STEPS_HEADER = "seed,t,step_reward,cumulative_reward,total_w1,prey_w1"
AGGREGATE_HEADER = "t,cumulative_reward,total_w1,prey_w1"


def write_steps_csv(path: Path, records_by_seed: dict[int, list[MetricsRecord]]) -> None:
    lines = [STEPS_HEADER]
    for seed in sorted(records_by_seed):
        for rec in records_by_seed[seed]:
            lines.append(
                f"{rec.seed},{rec.t},{rec.step_reward},{rec.cumulative_reward},"
                f"{_fmt(rec.total_w1)},{_fmt(rec.prey_w1)}"
            )
    path.write_text("\n".join(lines) + "\n")


def write_aggregate_csv(path: Path, rows: list[AggregateRow]) -> None:
    lines = [AGGREGATE_HEADER]
    for row in rows:
        lines.append(
            f"{row.t},{_fmt(row.cumulative_reward)},{_fmt(row.total_w1)},{_fmt(row.prey_w1)}"
        )
    path.write_text("\n".join(lines) + "\n")


def run_experiment(
    config: ExperimentConfig,
    out_dir=None,
    write: bool = True,
    on_step: Optional[Callable] = None,
    on_share_round: Optional[Callable] = None,
) -> ExperimentResult:
    """Run every seed of one config; aggregate; optionally write output files.

    Episodes are independent and run in seed order for deterministic output.
    If any episode raises ZeroMassError the failing seeds are reported and
    the error re-raised after the sweep, with no files written.
    """
    scenario = config.scenario()
    records: dict[int, list[MetricsRecord]] = {}
    failures: list[tuple[int, ZeroMassError]] = []
    for seed in config.seeds:
        try:
            episode = Episode(scenario, seed, on_step=on_step, on_share_round=on_share_round)
            records[seed] = episode.run()
        except ZeroMassError as exc:
            failures.append((seed, exc))
    if failures:
        detail = "; ".join(f"seed {seed}: {exc}" for seed, exc in failures)
        raise ZeroMassError(f"{config.name}: {len(failures)} episode(s) failed ({detail})")

    rows = aggregate(records)
    output_dir = None
    if write:
        output_dir = Path(out_dir) if out_dir is not None else Path(config.output_path)
        output_dir.mkdir(parents=True, exist_ok=True)
        write_steps_csv(output_dir / f"{config.name}_steps.csv", records)
        write_aggregate_csv(output_dir / f"{config.name}_aggregate.csv", rows)
        (output_dir / f"{config.name}_config.json").write_text(
            json.dumps(config.to_dict(), indent=2) + "\n"
        )
    return ExperimentResult(config, records, rows, output_dir)


PLOT_METRICS = ("cumulative_reward", "total_w1", "prey_w1")


def emit_plotdata(in_dir, out_dir) -> list[Path]:
    """Merge every ``*_aggregate.csv`` under ``in_dir`` into per-metric files.

    Each output file has a ``t`` column plus one column per variant, copied
    verbatim from the aggregate files (no recomputation, so values stay
    bit-identical).
    """
    in_dir = Path(in_dir)
    agg_paths = sorted(in_dir.glob("*_aggregate.csv"))
    if not agg_paths:
        raise ConfigError(f"no *_aggregate.csv files under {in_dir}")

    variants: dict[str, dict[str, list[str]]] = {}
    t_column: Optional[list[str]] = None
    for path in agg_paths:
        lines = path.read_text().splitlines()
        if not lines or lines[0] != AGGREGATE_HEADER:
            raise ConfigError(f"{path}: unexpected aggregate header")
        columns = list(zip(*(line.split(",") for line in lines[1:])))
        name = path.name[: -len("_aggregate.csv")]
        if t_column is None:
            t_column = list(columns[0])
        elif list(columns[0]) != t_column:
            raise ConfigError(f"{path}: timestep column differs from other variants")
        variants[name] = {
            metric: list(columns[k + 1]) for k, metric in enumerate(PLOT_METRICS)
        }

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    names = sorted(variants)
    for metric in PLOT_METRICS:
        lines = ["t," + ",".join(names)]
        for row_index, t in enumerate(t_column):
            cells = [variants[name][metric][row_index] for name in names]
            lines.append(f"{t}," + ",".join(cells))
        path = out_dir / f"{metric}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written
