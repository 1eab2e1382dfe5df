"""The count-rule baseline, and the case where it points the wrong way.

The deterministic rule orients A -> B when A is seen without B more often
than B without A.  When one event strongly and quickly promotes another,
the cause is rarely seen alone, and the rule reverses the true direction.
This demo generates data from a known a -> b mechanism with exactly that
character and compares the baseline against the interventional estimate.
"""

import numpy as np

from causalchron import (
    Cpt,
    Dag,
    DiscreteBayesNet,
    ace,
    contingency,
    deterministic_chronology,
    fit_cpts,
    sample,
)

# a promotes b strongly; b fires on its own now and then
truth = DiscreteBayesNet(
    Dag(("a", "b"), [("a", "b")]),
    (
        Cpt("a", (), np.array([0.55])),
        Cpt("b", ("a",), np.array([0.35, 0.97])),  # P(b=1 | a=0), P(b=1 | a=1)
    ),
)
data = sample(truth, 4000, seed=2)

t = contingency(data, "a", "b")
print(f"counts: a-alone={t.n10}  b-alone={t.n01}  both={t.n11}  neither={t.n00}")

baseline = deterministic_chronology(data)
print("frequency-rule edges:", sorted(baseline.dag.edges))

fitted = fit_cpts(truth.dag, data)
estimate = ace(fitted, "a", "b")
print(f"interventional effect of a on b: {estimate.value:+.3f}")
print("true generating edge: a -> b")
