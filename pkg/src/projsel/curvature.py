"""Elemental curvatures and the principal angle of a ground set.

All four quantities range over triples ``(E, s, t)`` (pairs ``(E, s)`` for
the angle) with ``|E| <= 2K - 2`` and ``s, t`` distinct elements outside
``E``. Exact mode walks every such ``E``; sampled mode draws ``E`` at random
and evaluates all pairs for it, giving a lower estimate of each curvature
and an upper estimate of the angle.

For a fixed ``E`` with residuals ``r_x`` of the remaining elements against
``span(E)``, write ``a_x = <eta, r_x / |r_x|>``. Then
``f(E + x) - f(E) = a_x**2`` and the gain of ``t`` after ``s`` is the same
quantity for ``t`` taken against ``span(E + s)``.
"""
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .hilbert import TOL_RANK, build_basis
from .matroid import GuardError

EXACT_MAX_N = 12
EXACT_MAX_K = 3
DEFAULT_SAMPLES = 100_000
ORDER_SLACK = 1e-12

KINDS = ("fwd", "bwd", "omp")


@dataclass
class CurvatureReport:
    kappa_fwd: float
    kappa_bwd: float
    kappa_omp: float
    phi: float
    K: int
    mode: str
    n_samples: Optional[int] = None
    witnesses: dict = field(default_factory=dict)
    skipped_pairs: dict = field(default_factory=dict)
    vacuous: dict = field(default_factory=dict)
    denom_tol: float = 0.0
    triples: int = 0
    # largest |<s_perp, t_perp>| over evaluated pairs
    max_abs_perp_cos: float = 0.0

    @property
    def cos_phi(self) -> float:
        return float(np.cos(self.phi))

    def pairwise_bound(self) -> Optional[float]:
        """Upper bound on |<s_perp, t_perp>| implied by the angle, if finite."""
        s2 = np.sin(self.phi) ** 2
        if s2 <= 0:
            return None
        c = self.cos_phi
        return (c + c * c) / s2

    def omp_angle_bound(self) -> Optional[float]:
        """Angle-based upper bound on the OMP curvature.

        The bound grows with ``|<t_perp, s_perp>|``, so the largest absolute
        value over the evaluated pairs gives the maximum over pairs.
        """
        s2 = np.sin(self.phi) ** 2
        c = self.max_abs_perp_cos
        if s2 <= 0 or c >= 1.0:
            return None
        return (1.0 / s2 + c) ** 2 / (1.0 - c * c)

    def to_json(self) -> dict:
        mode = self.mode if self.n_samples is None else f"sampled({self.n_samples})"
        return {
            "kappa_fwd": self.kappa_fwd, "kappa_bwd": self.kappa_bwd,
            "kappa_omp": self.kappa_omp, "phi": self.phi, "K": self.K, "mode": mode,
            "skipped": dict(self.skipped_pairs), "vacuous": dict(self.vacuous),
            "witnesses": {k: {"E": list(w[0]), "s": w[1], "t": w[2]} if k in KINDS
                          else {"E": list(w[0]), "s": w[1]}
                          for k, w in self.witnesses.items()},
            "denom_tol": self.denom_tol, "triples": self.triples,
        }


def _max_subset_size(n: int, K: int) -> int:
    return max(0, min(2 * K - 2, n - 1))


def count_triples(n: int, K: int) -> int:
    """Number of ordered (E, s, t) triples the exact search visits."""
    return sum(comb(n, e) * (n - e) * (n - e - 1) for e in range(_max_subset_size(n, K) + 1))


class _Accumulator:
    def __init__(self, inst, K, tol_rank):
        self.inst = inst
        self.K = K
        self.tol_rank = tol_rank
        self.denom_tol = 1e-12 * float(inst.eta @ inst.eta)
        self.best = {k: 0.0 for k in KINDS}
        self.witness = {}
        self.skipped = {k: 0 for k in KINDS}
        self.found = {k: False for k in KINDS}
        self.cos_phi = 0.0
        self.phi_witness = None
        self.triples = 0
        self.max_abs_c = 0.0

    def visit(self, E):
        inst = self.inst
        X = inst.ground
        eta = inst.eta
        rest = np.array([i for i in range(inst.n) if i not in set(E)], dtype=int)
        basis = build_basis([X[i] for i in E], dim=inst.dim, tol_rank=self.tol_rank)
        Xr = X[rest]
        if basis.rank:
            Q = basis.vectors
            par = Xr @ Q.T
            R = Xr - par @ Q
            R = R - (R @ Q.T) @ Q
            proj_norm = np.linalg.norm(par, axis=1)
            r_eta = basis.residual(eta)
        else:
            R = Xr.copy()
            proj_norm = np.zeros(len(rest))
            r_eta = eta.copy()

        # principal angle: E = {} contributes pi/2 by convention
        if len(E) and len(rest):
            j = int(np.argmax(proj_norm))
            c = min(1.0, float(proj_norm[j]))
            if c > self.cos_phi:
                self.cos_phi = c
                self.phi_witness = (tuple(E), int(rest[j]))

        m = len(rest)
        if m < 2:
            return
        rho = np.linalg.norm(R, axis=1)
        live = rho > self.tol_rank
        U = np.zeros_like(R)
        U[live] = R[live] / rho[live, None]
        a = U @ eta                       # <eta, x_perp>, zero when x in span(E)
        g1 = a * a                        # single-element gains

        # gain of t after s: residual of U_t against U_s, then against span(E)
        C = U @ U.T
        Rt = U[None, :, :] - C[:, :, None] * U[:, None, :]
        if basis.rank:
            Rt = Rt - (Rt @ Q.T) @ Q
        Rt = Rt - np.einsum("stk,sk->st", Rt, U)[:, :, None] * U[:, None, :]
        rho2 = np.linalg.norm(Rt, axis=2)
        g2 = np.zeros((m, m))
        ok = rho2 > self.tol_rank
        g2[ok] = (np.einsum("stk,k->st", Rt, eta)[ok] / rho2[ok]) ** 2
        # s in span(E): adding it changes nothing
        g2[~live, :] = g1[None, :]

        offdiag = ~np.eye(m, dtype=bool)
        both = offdiag & live[:, None] & live[None, :]
        if np.any(both):
            self.max_abs_c = max(self.max_abs_c, float(np.max(np.abs(C[both]))))

        abs_a = np.abs(a)
        # rows index s, columns index t
        self.triples += m * (m - 1)
        masks = {
            "fwd": abs_a[:, None] <= abs_a[None, :] + ORDER_SLACK,
            "bwd": abs_a[:, None] + ORDER_SLACK >= abs_a[None, :],
        }
        denoms = {"fwd": np.broadcast_to(g1[None, :], (m, m)),
                  "bwd": np.broadcast_to(g1[:, None], (m, m)),
                  "omp": np.broadcast_to(g1[:, None], (m, m))}
        eta_perp_norm = float(np.linalg.norm(r_eta))
        if eta_perp_norm > self.tol_rank:
            b = np.abs(Xr @ (r_eta / eta_perp_norm))
            masks["omp"] = b[:, None] + ORDER_SLACK >= b[None, :]
        else:
            masks["omp"] = np.zeros((m, m), dtype=bool)
            self.skipped["omp"] += m * (m - 1)

        for kind in KINDS:
            adm = masks[kind] & offdiag
            den = denoms[kind]
            small = adm & (den <= self.denom_tol)
            self.skipped[kind] += int(np.count_nonzero(small))
            use = adm & ~small
            if not np.any(use):
                continue
            ratio = np.full((m, m), -np.inf)
            ratio[use] = g2[use] / den[use]
            s, t = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
            val = float(ratio[s, t])
            if not self.found[kind] or val > self.best[kind]:
                self.best[kind] = val
                self.witness[kind] = (tuple(E), int(rest[s]), int(rest[t]))
            self.found[kind] = True

    def report(self, mode, n_samples=None) -> CurvatureReport:
        phi = float(np.arccos(np.clip(self.cos_phi, 0.0, 1.0)))
        witnesses = dict(self.witness)
        if self.phi_witness is not None:
            witnesses["phi"] = self.phi_witness
        return CurvatureReport(
            kappa_fwd=self.best["fwd"], kappa_bwd=self.best["bwd"], kappa_omp=self.best["omp"],
            phi=phi, K=self.K, mode=mode, n_samples=n_samples, witnesses=witnesses,
            skipped_pairs=dict(self.skipped),
            vacuous={k: not self.found[k] for k in KINDS},
            denom_tol=self.denom_tol, triples=self.triples,
            max_abs_perp_cos=self.max_abs_c,
        )


def curvature_report(inst, K: int, mode: str = "exact", n_samples: int = DEFAULT_SAMPLES,
                     seed: int = 0, max_n: int = EXACT_MAX_N, max_K: int = EXACT_MAX_K,
                     tol_rank: float = TOL_RANK) -> CurvatureReport:
    """Forward, backward and OMP curvatures plus the principal angle.

    In exact mode the instance must satisfy ``n <= max_n`` and ``K <= max_K``.
    Sampled mode keeps drawing subsets ``E`` (uniform size, then uniform
    subset) from a generator seeded with ``seed`` until ``n_samples`` triples
    have been evaluated; a larger budget with the same seed only ever adds
    triples, so the estimates are monotone in the budget.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    acc = _Accumulator(inst, K, tol_rank)
    n = inst.n
    top = _max_subset_size(n, K)
    if mode == "exact":
        if n > max_n or K > max_K:
            raise GuardError(
                f"exact curvature over n={n}, K={K} ({count_triples(n, K)} triples) exceeds "
                f"n<={max_n}, K<={max_K}; use sampled mode")
        for size in range(top + 1):
            for E in combinations(range(n), size):
                acc.visit(E)
        return acc.report("exact")
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    while acc.triples < n_samples and n >= 2:
        size = int(rng.integers(0, top + 1))
        E = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
        acc.visit(E)
    return acc.report("sampled", n_samples)


def forward_curvature(inst, K, mode="exact", **kw) -> float:
    return curvature_report(inst, K, mode, **kw).kappa_fwd


def backward_curvature(inst, K, mode="exact", **kw) -> float:
    return curvature_report(inst, K, mode, **kw).kappa_bwd


def omp_curvature(inst, K, mode="exact", **kw) -> float:
    return curvature_report(inst, K, mode, **kw).kappa_omp


def principal_angle(inst, K, mode="exact", **kw) -> float:
    return curvature_report(inst, K, mode, **kw).phi


def triple_ratio(inst, kind: str, E, s: int, t: int) -> float:
    """Recompute one curvature ratio directly from the objective."""
    f = inst.f
    E = tuple(E)
    num = f(E + (s, t)) - f(E + (s,))
    if kind == "fwd":
        den = f(E + (t,)) - f(E)
    else:
        den = f(E + (s,)) - f(E)
    return num / den


@dataclass(frozen=True)
class CoherenceStats:
    mu: float
    m: int
    lambda_min_bound: float
    cos_phi_upper: float  # +inf when the eigenvalue bound is not positive

    @property
    def applicable(self) -> bool:
        return np.isfinite(self.cos_phi_upper)

    def to_json(self) -> dict:
        return {"mu": self.mu, "m": self.m, "lambda_min_bound": self.lambda_min_bound,
                "cos_phi_upper": self.cos_phi_upper if self.applicable else None}


def coherence_relaxation(inst, K: int) -> CoherenceStats:
    """Incoherence-based upper bound on the cosine of the principal angle.

    Uses ``lambda_min >= 1 - (m-1) mu`` (Gershgorin on a unit-diagonal Gram
    matrix) and ``sum_i <h_i, s>^2 <= m mu^2`` with ``m = 2K - 2``.
    """
    G = inst.ground @ inst.ground.T
    n = inst.n
    mu = float(np.max(np.abs(G[~np.eye(n, dtype=bool)]))) if n > 1 else 0.0
    mu = min(mu, 1.0)
    m = 2 * K - 2
    if m <= 0:
        return CoherenceStats(mu, m, 1.0, 0.0)
    lam = 1.0 - (m - 1) * mu
    upper = np.sqrt(m) * mu / np.sqrt(lam) if lam > 0 else np.inf
    return CoherenceStats(mu, m, lam, float(upper))


def angle_curvature_bound(phi: float) -> Optional[float]:
    """Ceiling on the forward and backward curvatures implied by the angle.

    ``1 / (1 - 2 cos phi)``, or ``None`` once ``cos phi >= 1/2``.
    """
    c = np.cos(phi)
    if abs(c) < 1e-15:
        c = 0.0
    if c >= 0.5:
        return None
    return float(1.0 / (1.0 - 2.0 * c))


# name used by the external interface
theorem2_bound = angle_curvature_bound


def principal_cos(ground: np.ndarray, K: int, tol_rank: float = TOL_RANK) -> float:
    """``cos`` of the principal angle of a ground set, without the curvatures."""
    n, dim = ground.shape
    best = 0.0
    for size in range(1, _max_subset_size(n, K) + 1):
        for E in combinations(range(n), size):
            basis = build_basis([ground[i] for i in E], dim=dim, tol_rank=tol_rank)
            rest = [i for i in range(n) if i not in E]
            best = max(best, float(np.max(np.linalg.norm(ground[rest] @ basis.vectors.T, axis=1))))
    return min(best, 1.0)
