"""Curvature-based approximation guarantees and their empirical check."""
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import matroid as mt
from .curvature import angle_curvature_bound, curvature_report
from .selectors import brute_force_optimal, forward_regression, omp

SLACK = 1e-9


def k_hat(K: int, kf: float, kb: float) -> float:
    """Curvature-weighted horizon: sum of min(kf, kb)**(i-1) for i = 1..K."""
    if K < 1:
        raise ValueError("K must be at least 1")
    base = min(kf, kb)
    if base == 1.0:
        return float(K)
    return float(sum(base ** i for i in range(K)))


def bound_fr_uniform(K: int, kf: float, kb: float) -> float:
    return 1.0 - (1.0 - 1.0 / k_hat(K, kf, kb)) ** K


def bound_omp_uniform(K: int, kf: float, kb: float, phi: float) -> float:
    s2 = np.sin(phi) ** 2
    return float(1.0 - (1.0 - s2 / k_hat(K, kf, kb)) ** K)


def _a(K: int, *kappas: float) -> float:
    top = max(kappas)
    return top if top <= 1.0 else top ** K


def _b(K: int, kf: float) -> float:
    return kf ** (K - 1) if kf > 1.0 else 1.0


def bound_fr_nonuniform(K: int, kf: float, kb: float) -> float:
    return 1.0 / (1.0 + _a(K, kf, kb) * _b(K, kf))


def bound_omp_nonuniform(K: int, kf: float, kb: float, ko: float,
                         phi: float) -> Optional[float]:
    """Returns ``None`` when ``phi`` is zero and the bound degenerates."""
    s2 = np.sin(phi) ** 2
    if s2 <= 0.0:
        return None
    return float(1.0 / (1.0 + _a(K, kf, kb, ko) * _b(K, kf) / s2))


def near_orthogonal_asymptote(K: int, delta: float) -> float:
    """First-order non-uniform bound when the angle gap pi/2 - phi is ``delta``."""
    return 1.0 / (2.0 + 2.0 * (2 * K - 1) * delta)


@dataclass
class BoundReport:
    K: int
    kappa_fwd: float
    kappa_bwd: float
    kappa_omp: float
    phi: float
    k_hat: float
    bound_fr_uniform: float
    bound_omp_uniform: float
    bound_fr_nonuniform: float
    bound_omp_nonuniform: Optional[float]
    f_fr: float
    f_omp: float
    f_opt: float
    empirical_ratio_fr: float
    empirical_ratio_omp: float
    uniform: bool
    is_matroid: bool
    degenerate: bool
    satisfied: dict = field(default_factory=dict)
    angle_bound: Optional[float] = None
    angle_bound_ok: Optional[bool] = None
    pairwise_ok: Optional[bool] = None
    omp_angle_ok: Optional[bool] = None
    chosen: dict = field(default_factory=dict)

    @property
    def all_satisfied(self) -> bool:
        return all(v for v in self.satisfied.values() if v is not None)

    def to_json(self) -> dict:
        return asdict(self)


def verify_bounds(inst, K: Optional[int] = None, **curv_kw) -> BoundReport:
    """Compare FR and OMP against the exhaustive optimum and the guarantees.

    Curvatures and the angle are computed exactly over ``|E| <= 2K - 2``
    with ``K`` defaulting to the matroid's rank. Uniform structures are
    checked against the uniform guarantees, everything else against the
    non-uniform ones.
    """
    m = inst.matroid
    if K is None:
        K = max(1, m.rank_cap)
    curv = curvature_report(inst, K, "exact", **curv_kw)
    fr = forward_regression(inst)
    om = omp(inst)
    opt = brute_force_optimal(inst)
    kf, kb, ko, phi = curv.kappa_fwd, curv.kappa_bwd, curv.kappa_omp, curv.phi

    degenerate = opt.objective <= 1e-12 * max(1.0, float(inst.eta @ inst.eta))
    ratio_fr = 1.0 if degenerate else fr.objective / opt.objective
    ratio_omp = 1.0 if degenerate else om.objective / opt.objective

    uniform = isinstance(m, mt.Uniform)
    is_matroid = mt.validate_axioms(m).is_matroid if isinstance(m, mt.Explicit) else True
    rep = BoundReport(
        K=K, kappa_fwd=kf, kappa_bwd=kb, kappa_omp=ko, phi=phi,
        k_hat=k_hat(K, kf, kb),
        bound_fr_uniform=bound_fr_uniform(K, kf, kb),
        bound_omp_uniform=bound_omp_uniform(K, kf, kb, phi),
        bound_fr_nonuniform=bound_fr_nonuniform(K, kf, kb),
        bound_omp_nonuniform=bound_omp_nonuniform(K, kf, kb, ko, phi),
        f_fr=fr.objective, f_omp=om.objective, f_opt=opt.objective,
        empirical_ratio_fr=ratio_fr, empirical_ratio_omp=ratio_omp,
        uniform=uniform, is_matroid=is_matroid, degenerate=degenerate,
        chosen={"fr": fr.chosen, "omp": om.chosen, "opt": opt.chosen},
    )
    if uniform:
        rep.satisfied = {"fr_uniform": bool(ratio_fr >= rep.bound_fr_uniform - SLACK),
                         "omp_uniform": bool(ratio_omp >= rep.bound_omp_uniform - SLACK)}
    else:
        omp_nu = rep.bound_omp_nonuniform
        rep.satisfied = {"fr_nonuniform": bool(ratio_fr >= rep.bound_fr_nonuniform - SLACK),
                         "omp_nonuniform": None if omp_nu is None else bool(ratio_omp >= omp_nu - SLACK)}

    rep.angle_bound = ab = angle_curvature_bound(phi)
    if ab is not None:
        rep.angle_bound_ok = bool(max(kf, kb) <= ab + SLACK)
    pw = curv.pairwise_bound()
    if pw is not None:
        rep.pairwise_ok = bool(curv.max_abs_perp_cos <= pw + SLACK)
    ob = curv.omp_angle_bound()
    if ob is not None:
        rep.omp_angle_ok = bool(ko <= ob + SLACK)
    return rep
