"""One end-to-end run: simulate, impute, discover x4, effects, trees, verdicts.

Writes every artifact into ./pipeline-demo and prints the aggregate view.
Rerunning with the same seed reproduces the directory byte for byte.
"""

from pathlib import Path

from causalchron.pipeline import PipelineConfig, ScenarioSpec, run_pipeline

cfg = PipelineConfig(
    scenario=ScenarioSpec(preset="random-8-0.25", n_rows=3000, missing_rate=0.2, seed=5),
    algorithms=("hc", "pc", "lingam", "notears"),
    refutations="all",
    output_dir="pipeline-demo",
    seed=13,
)
report = run_pipeline(cfg)

print("scores (best BIC first):")
for entry in report["scores"]:
    print(f"  {entry['name']:>8}: BIC={entry['bic']:.1f}  logL={entry['log_likelihood']:.1f}")

print("\nfalsification:")
for name, verdict in report["falsification"].items():
    print(f"  {name:>8}: falsifiable={verdict['falsifiable']} falsified={verdict['falsified']}")

print("\nconsensus directed edges (>= 2 models):")
for parent, child in report["consensus_directed"]:
    print(f"  {parent} -> {child}")

print("\nartifacts:")
for path in sorted(Path("pipeline-demo").iterdir()):
    print(f"  {path}")
