"""Subspace selection for projection maximization under matroid constraints."""
from .hilbert import (decompose, extend_basis, inner, marginal_gain, normalize,
                      project_norm_sq)
from .matroid import (Explicit, GuardError, Partition, Uniform, can_extend,
                      enumerate_independent_sets, is_independent, validate_axioms)
from .selectors import (Instance, SelectionResult, brute_force_optimal,
                        forward_regression, omp)
from .curvature import (CurvatureReport, backward_curvature, coherence_relaxation,
                        curvature_report, forward_curvature, omp_curvature,
                        principal_angle, angle_curvature_bound, theorem2_bound)
from .bounds import (BoundReport, bound_fr_nonuniform, bound_fr_uniform,
                     bound_omp_nonuniform, bound_omp_uniform, k_hat,
                     near_orthogonal_asymptote, verify_bounds)
from .harness import GeneratorConfig, generate, run_sweep

__version__ = "0.1.0"
