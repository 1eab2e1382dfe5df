"""Exact interventional effects: adjustment, surgery, mediation, refutation.

Builds a small confounded and mediated network by hand, estimates the
average effect by backdoor adjustment, cross-checks it against the
graph-surgery oracle, separates the direct from the mediated component,
and runs the three robustness refutations.
"""

import numpy as np

from causalchron import (
    Cpt,
    Dag,
    DiscreteBayesNet,
    ace,
    ace_surgery,
    effects_for_dag,
    fit_cpts,
    nde,
    sample,
)

# z confounds x and y; m mediates part of x's effect on y
dag = Dag(
    ("z", "x", "m", "y"),
    [("z", "x"), ("z", "y"), ("x", "m"), ("x", "y"), ("m", "y")],
)
net = DiscreteBayesNet(
    dag,
    (
        Cpt("z", (), np.array([0.4])),
        Cpt("x", ("z",), np.array([0.25, 0.75])),
        Cpt("m", ("x",), np.array([0.2, 0.8])),
        # parents of y in declared order: (z, x, m)
        Cpt("y", ("z", "x", "m"), np.array([0.05, 0.3, 0.35, 0.6, 0.15, 0.4, 0.45, 0.9])),
    ),
)

total = ace(net, "x", "y")
print(f"ACE of x on y (backdoor on {sorted(total.adjustment_set)}): {total.value:+.4f}")
print(f"surgery oracle:                      {ace_surgery(net, 'x', 'y'):+.4f}")

direct = nde(net, "x", "y")
print(f"direct effect (mediator {sorted(direct.mediators)} held at baseline): {direct.value:+.4f}")
print(f"indirect component: {total.value - direct.value:+.4f}")

# the full per-edge table with refutations, on sampled data
data = sample(net, 8000, seed=0)
fitted = fit_cpts(dag, data)
table = effects_for_dag(fitted, data, refutations="all", seed=0)
print("\nper-edge relation table (sorted by effect):")
for row in table.rows:
    checks = ", ".join(
        f"{kind}={'ok' if row.refutation_passed(kind) else 'FAIL'}"
        for kind in ("placebo", "subset", "random_common_cause")
    )
    print(f"  {row.treatment} -> {row.outcome}  {row.estimand_kind}={row.value:+.3f}"
          f"  validated={row.validated}  [{checks}]")
