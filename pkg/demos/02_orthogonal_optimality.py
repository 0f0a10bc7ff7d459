"""
Greedy is exact on orthonormal ground sets
==========================================

With mutually orthogonal vectors the objective is just a sum of squared
coordinates, so both greedy rules pick the largest ones.
"""
import numpy as np

from projsel import GeneratorConfig, brute_force_optimal, forward_regression, generate, omp

cfg = GeneratorConfig(kind="orthogonal", dim=10, n=10, K=3, seed=7)
gaps = []
for i in range(50):
    inst = generate(cfg, i)
    fr, om, best = forward_regression(inst), omp(inst), brute_force_optimal(inst)
    gaps.append(max(abs(fr.objective - best.objective), abs(om.objective - best.objective)))
    if i == 0:
        coords = (inst.ground @ inst.eta) ** 2
        print("squared coordinates:", np.round(coords, 4))
        print("three largest:", np.sort(np.argsort(coords)[-3:]), " FR chose:", sorted(fr.chosen))

print(f"largest gap to the optimum over 50 instances: {max(gaps):.2e}")

# The same holds under a partition constraint, and FR and OMP agree step by step.
cfg = GeneratorConfig(kind="orthogonal", dim=9, n=9, K=3, seed=8,
                      matroid={"type": "partition", "n_blocks": 3, "cap": 1})
inst = generate(cfg)
print("\npartition blocks:", inst.matroid.blocks)
print("FR :", forward_regression(inst).chosen)
print("OMP:", omp(inst).chosen)
