"""A miniature version of the full experiment grid, end to end.

Runs both tasks with the decentralized system at 0/1/5 message-passing
rounds plus the oracle baseline (a handful of seeds so it finishes in
seconds), writes the per-step and aggregate CSVs, merges them into
plot-ready files, and prints the final-step comparison table. Use the
shipped configs/ directory with the CLI for the real 100-seed study:

    decbayes sweep --configs configs --out results
    decbayes plotdata --in results --out results/plots
"""

import tempfile
from pathlib import Path

from decbayes import ExperimentConfig, emit_plotdata, run_experiment

out = Path(tempfile.mkdtemp(prefix="decbayes_demo_"))
seeds = tuple(range(10))

variants = []
for task in ("congregation", "predator_prey"):
    for system, rounds in (("decentralized", 0), ("decentralized", 1),
                           ("decentralized", 5), ("oracle", 0)):
        variants.append(ExperimentConfig(task=task, system=system, rounds=rounds, seeds=seeds))

results = {}
for config in variants:
    results[config.name] = run_experiment(config, out_dir=out)
    print(f"ran {config.name}: {len(config.seeds)} seeds")

plot_dir = out / "plots"
emit_plotdata(out, plot_dir)
print(f"\nCSV tree in {out}")
print(f"plot-ready per-metric files in {plot_dir}: "
      + ", ".join(p.name for p in sorted(plot_dir.iterdir())))

print(f"\n{'variant':<34} {'final cum reward':>16} {'final total W1':>15}")
for name, result in results.items():
    last = result.aggregate_rows[-1]
    print(f"{name:<34} {last.cumulative_reward:>16.1f} {last.total_w1:>15.2f}")

print("\nmessage passing buys most of its divergence reduction in the first")
print("round. The full-range oracle pins peers almost exactly, but its")
print("indicator bit is always on and carries no prey information, so the")
print("decentralized predators out-hunt it.")
