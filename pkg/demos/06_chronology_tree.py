"""From relation table to chronology: strongest cause per outcome.

Learns a structure, quantifies every edge, keeps only the highest-impact
cause for each outcome, and assembles theticking timeline tree.
"""

from causalchron import (
    build_chronology,
    effects_for_dag,
    fit_cpts,
    sample,
    strong_causal_relations,
)
from causalchron.discovery import hc_learn
from causalchron.pipeline import preset_network

truth = preset_network("diamond")
data = sample(truth, 6000, seed=4)

dag = hc_learn(data)
fitted = fit_cpts(dag, data)
table = effects_for_dag(fitted, data, refutations="none")

print("validated relations (descending effect):")
for row in table.validated_rows():
    print(f"  {row.treatment} -> {row.outcome}: {row.value:+.3f}")

strong = strong_causal_relations(table)
print("\nstrongest cause per outcome:")
for row in strong:
    print(f"  {row.treatment} -> {row.outcome}: {row.value:+.3f}")

tree = build_chronology(dag, strong)
print("\nchronology levels:")
by_level: dict[int, list[str]] = {}
for node, level in tree.levels.items():
    by_level.setdefault(level, []).append(node)
for level in sorted(by_level):
    print(f"  level {level}: {', '.join(sorted(by_level[level]))}")
if tree.isolated:
    print("isolated:", ", ".join(tree.isolated))
print("\nDOT output:\n" + tree.to_dot())
