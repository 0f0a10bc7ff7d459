"""
Two small instances where greedy selection goes wrong
=====================================================

Both instances are tiny enough to check by hand.
"""
import numpy as np

from projsel import brute_force_optimal, forward_regression, omp, validate_axioms
from projsel.harness import fr_counterexample, nonuniform_counterexample

# Three unit vectors in R^4, each straddling two neighbouring coordinates,
# and a target that leans on the middle coordinates. We may pick two.
inst = fr_counterexample()
print("ground set:\n", inst.ground.round(4))
print("target:", inst.eta)

fr = forward_regression(inst)
print("\nforward regression picks", [inst.labels[i] for i in fr.chosen],
      "-> f =", round(fr.objective, 6))
print("  step values:", np.round(fr.step_values, 6))

best = brute_force_optimal(inst)
print("the best pair is", [inst.labels[i] for i in best.chosen], "-> f =", round(best.objective, 6))

# The middle vector wins the first round (it captures 8 of 10), and after
# that neither outer vector adds much. The outer pair together gets 9.

# Second instance: an orthonormal ground set, but a constraint family that is
# not uniform. Greedy grabs |0> first, which then only pairs with |1>.
eps = 0.1
inst = nonuniform_counterexample(eps)
fr, om, best = forward_regression(inst), omp(inst), brute_force_optimal(inst)
print("\nfamily:", sorted(sorted(S) for S in inst.matroid.family))
print("FR  ->", fr.chosen, fr.objective)
print("OMP ->", om.chosen, om.objective)
print("OPT ->", best.chosen, best.objective)
print("ratio:", fr.objective / best.objective)

report = validate_axioms(inst.matroid)
print("\nis this family a matroid?", report.is_matroid)
print("augmentation fails for S, T =", report.counterexample)
