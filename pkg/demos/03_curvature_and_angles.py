"""
Curvatures, the principal angle, and how they bound each other
==============================================================

We tilt an orthonormal set a little and watch the curvatures move away from
the orthogonal values. The angle-based ceiling 1/(1 - 2 cos phi) caps the
forward and backward curvatures as long as cos phi < 1/2.
"""

from projsel import GeneratorConfig, coherence_relaxation, curvature_report, generate, angle_curvature_bound

K = 3
print(" delta   phi     kfwd    kbwd    komp   ceiling  coherence cos bound")
for delta in [0.0, 0.05, 0.1, 0.2, 0.3]:
    inst = generate(GeneratorConfig(kind="perturbed", dim=8, n=8, K=K, seed=3, delta=delta))
    rep = curvature_report(inst, K)
    ceiling = angle_curvature_bound(rep.phi)
    coh = coherence_relaxation(inst, K)
    print(f"{delta:6.2f} {rep.phi:6.3f} {rep.kappa_fwd:7.3f} {rep.kappa_bwd:7.3f} "
          f"{rep.kappa_omp:7.3f} {ceiling if ceiling else float('nan'):8.3f} "
          f"{coh.cos_phi_upper:10.3f}")

# A random Gaussian dictionary is far from orthogonal: cos phi is close to one
# and the curvatures are large, so the guarantees built on them are loose.
inst = generate(GeneratorConfig(kind="gaussian_dictionary", dim=8, n=8, K=K, seed=3))
rep = curvature_report(inst, K)
print("\ngaussian dictionary: phi = %.3f, curvatures = %.2f / %.2f / %.2f"
      % (rep.phi, rep.kappa_fwd, rep.kappa_bwd, rep.kappa_omp))
print("worst forward triple (E, s, t):", rep.witnesses["fwd"])

# Sampled mode for when the exhaustive count gets large.
print("triples in exact mode:", rep.triples)
approx = curvature_report(inst, K, mode="sampled", n_samples=2000, seed=0)
print("sampled estimate (a lower bound): %.2f" % approx.kappa_fwd)
print("largest |<s_perp, t_perp>|: %.3f" % rep.max_abs_perp_cos)
