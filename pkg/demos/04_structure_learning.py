"""Four structure learners plus stability selection on the same dataset.

A diamond-shaped generating network is sampled and every algorithm gets a
shot; the consensus summary shows which edges survive across models.
"""

from causalchron import consensus_edges, sample
from causalchron.discovery import (
    default_lambda_grid,
    hc_learn,
    lingam_learn,
    notears_learn,
    pc_learn,
    stability_select,
)
from causalchron.pipeline import preset_network

truth = preset_network("diamond")
data = sample(truth, 5000, seed=1)
print("generating edges:", sorted(truth.dag.edges))

results = {}
results["hc"] = hc_learn(data)
results["pc"] = pc_learn(data).dag
results["lingam"] = lingam_learn(data)
_, results["notears"] = notears_learn(data)

for name, dag in results.items():
    print(f"{name:>8}: {sorted(dag.edges)}")

report = stability_select(
    data,
    lambda_grid=default_lambda_grid(1e-3, 1.0, 8),
    n_resamples=10,
    seed=0,
)
print(f"\nstability-selected edges ({report.failures} solver failures):")
print(" ", sorted(report.stable_edges))

summary = consensus_edges(list(results.values()))
print("\nedges recovered by at least two models (any direction):")
for pair in summary.consensus_undirected:
    print("  " + " -- ".join(sorted(pair)))
