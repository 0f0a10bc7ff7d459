"""Greedy subset selection (forward regression, OMP) and the exhaustive optimum."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import matroid as mt
from .hilbert import TOL_RANK, build_basis, extend_basis, project_norm_sq

MAX_OPT_N = 25
MAX_OPT_RANK = 8

RANK_CAP_REACHED = "rank_cap_reached"
NO_FEASIBLE_EXTENSION = "no_feasible_extension"
ZERO_GAIN = "zero_gain"


class InstanceFormatError(ValueError):
    """Malformed instance description; the message names the offending field."""


@dataclass(frozen=True)
class Instance:
    """A ground set of unit vectors, a target ``eta`` and a matroid over indices."""

    ground: np.ndarray  # shape (n, dim), one element per row
    eta: np.ndarray
    matroid: object
    labels: Optional[tuple] = None

    def __post_init__(self):
        ground = np.atleast_2d(np.asarray(self.ground, dtype=float))
        eta = np.asarray(self.eta, dtype=float)
        if ground.size == 0:
            ground = ground.reshape(0, eta.shape[0])
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "eta", eta)
        if eta.ndim != 1 or ground.shape[1] != eta.shape[0]:
            raise ValueError("ground vectors and eta must share one dimension")
        if not (np.all(np.isfinite(ground)) and np.all(np.isfinite(eta))):
            raise ValueError("instance contains non-finite coordinates")
        norms = np.linalg.norm(ground, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ValueError("ground elements must be unit vectors")
        if self.matroid.ground_size != ground.shape[0]:
            raise ValueError("matroid ground size does not match the number of elements")
        if self.labels is not None and len(self.labels) != ground.shape[0]:
            raise ValueError("labels must have one entry per ground element")

    @property
    def n(self) -> int:
        return self.ground.shape[0]

    @property
    def dim(self) -> int:
        return self.eta.shape[0]

    def f(self, S) -> float:
        """Projection objective of the index set ``S``."""
        return project_norm_sq(self.eta, [self.ground[i] for i in S])

    def to_json(self) -> dict:
        out = {"dim": self.dim, "ground": self.ground.tolist(), "eta": self.eta.tolist(),
               "matroid": self.matroid.to_json()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        if not isinstance(obj, dict):
            raise InstanceFormatError("instance: expected a JSON object")
        for key in ("ground", "eta", "matroid"):
            if key not in obj:
                raise InstanceFormatError(f"{key}: missing")
        try:
            eta = np.asarray(obj["eta"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"eta: {exc}") from None
        if eta.ndim != 1:
            raise InstanceFormatError("eta: expected a flat list of numbers")
        if "dim" in obj and int(obj["dim"]) != eta.shape[0]:
            raise InstanceFormatError(f"dim: {obj['dim']} does not match len(eta)={eta.shape[0]}")
        rows = []
        for i, row in enumerate(obj["ground"]):
            try:
                v = np.asarray(row, dtype=float)
            except (TypeError, ValueError) as exc:
                raise InstanceFormatError(f"ground[{i}]: {exc}") from None
            if v.shape != eta.shape:
                raise InstanceFormatError(f"ground[{i}]: expected {eta.shape[0]} coordinates")
            nrm = np.linalg.norm(v)
            if not np.isfinite(nrm) or nrm <= TOL_RANK:
                raise InstanceFormatError(f"ground[{i}]: near-zero or non-finite vector")
            rows.append(v / nrm)
        ground = np.array(rows).reshape(len(rows), eta.shape[0])
        try:
            m = mt.from_json(obj["matroid"], ground_size=len(rows))
        except (ValueError, TypeError) as exc:
            msg = str(exc)
            raise InstanceFormatError(msg if msg.startswith("matroid") else f"matroid: {msg}") from None
        labels = obj.get("labels")
        if labels is not None and len(labels) != len(rows):
            raise InstanceFormatError("labels: expected one label per ground element")
        try:
            return cls(ground, eta, m, tuple(labels) if labels is not None else None)
        except ValueError as exc:
            raise InstanceFormatError(f"instance: {exc}") from None


@dataclass
class SelectionResult:
    chosen: List[int]
    step_values: List[float]
    step_gains: List[float]
    objective: float
    stopped_reason: str
    algorithm: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def steps_taken(self) -> int:
        return len(self.chosen)

    def to_json(self) -> dict:
        out = {"algorithm": self.algorithm, "chosen": list(self.chosen),
               "step_values": list(self.step_values), "step_gains": list(self.step_gains),
               "objective": self.objective, "steps_taken": self.steps_taken,
               "stopped_reason": self.stopped_reason}
        out.update(self.extra)
        return out


def _tie_tol(inst: Instance) -> float:
    return 1e-12 * max(1.0, float(inst.eta @ inst.eta))


def _argmax_first(scores: np.ndarray, candidates: Sequence[int], tol: float) -> int:
    """Smallest candidate index whose score is within ``tol`` of the maximum."""
    best = np.max(scores)
    for c, sc in zip(candidates, scores):
        if sc >= best - tol:
            return c
    raise AssertionError("unreachable")


def _feasible(inst: Instance, chosen: List[int]) -> List[int]:
    taken = set(chosen)
    return [x for x in range(inst.n) if x not in taken and inst.matroid._indep(taken | {x})]


def _gains(inst: Instance, basis, cands: List[int]) -> np.ndarray:
    """<eta, s_perp>^2 for each candidate against the current basis."""
    X = inst.ground[cands]
    if basis.rank:
        Q = basis.vectors
        X = X - (X @ Q.T) @ Q
        X = X - (X @ Q.T) @ Q
    norms = np.linalg.norm(X, axis=1)
    out = np.zeros(len(cands))
    ok = norms > basis.tol_rank
    out[ok] = ((X[ok] @ inst.eta) / norms[ok]) ** 2
    return out


def _finish(inst, algorithm, chosen, values, gains, reason, **extra):
    obj = values[-1] if values else 0.0
    return SelectionResult(chosen, values, gains, obj, reason, algorithm, extra)


def forward_regression(inst: Instance, stop_on_zero_gain: bool = False) -> SelectionResult:
    """Greedy: add the feasible element with the largest objective increase.

    Runs for ``rank_cap`` steps unless no feasible extension remains. Ties
    go to the smallest ground index.
    """
    tol = _tie_tol(inst)
    basis = build_basis([], dim=inst.dim)
    chosen, values, gains = [], [], []
    value = 0.0
    reason = RANK_CAP_REACHED
    for _ in range(inst.matroid.rank_cap):
        cands = _feasible(inst, chosen)
        if not cands:
            reason = NO_FEASIBLE_EXTENSION
            break
        g = _gains(inst, basis, cands)
        if stop_on_zero_gain and np.max(g) <= tol:
            reason = ZERO_GAIN
            break
        s = _argmax_first(g, cands, tol)
        basis, _ = extend_basis(basis, inst.ground[s], s)
        new_value = float(np.sum((basis.vectors @ inst.eta) ** 2))
        chosen.append(s)
        gains.append(new_value - value)
        values.append(new_value)
        value = new_value
    return _finish(inst, "fr", chosen, values, gains, reason)


def omp(inst: Instance, literal_residual: bool = False) -> SelectionResult:
    """Orthogonal matching pursuit.

    Each step adds the feasible element with the largest ``|<r, s>|`` and then
    resets the residual to ``eta - P(E)``. With ``literal_residual`` the
    residual is instead updated as ``r - P(E)``, which keeps subtracting the
    accumulated projection on every step.
    """
    tol = np.sqrt(_tie_tol(inst))
    basis = build_basis([], dim=inst.dim)
    r = inst.eta.copy()
    chosen, values, gains = [], [], []
    value = 0.0
    reason = RANK_CAP_REACHED
    for _ in range(inst.matroid.rank_cap):
        cands = _feasible(inst, chosen)
        if not cands:
            reason = NO_FEASIBLE_EXTENSION
            break
        scores = np.abs(inst.ground[cands] @ r)
        s = _argmax_first(scores, cands, tol)
        basis, _ = extend_basis(basis, inst.ground[s], s)
        proj = basis.project(inst.eta)
        r = r - proj if literal_residual else inst.eta - proj
        new_value = float(np.sum((basis.vectors @ inst.eta) ** 2))
        chosen.append(s)
        gains.append(new_value - value)
        values.append(new_value)
        value = new_value
    return _finish(inst, "omp", chosen, values, gains, reason,
                   literal_residual=literal_residual)


def brute_force_optimal(inst: Instance, max_n: int = MAX_OPT_N,
                        max_rank: int = MAX_OPT_RANK) -> SelectionResult:
    """Exhaustive maximizer over all independent sets.

    The first maximizer in size-then-lexicographic order wins; a later set
    must beat it by more than the tie tolerance to replace it.
    """
    m = inst.matroid
    if inst.n > max_n or m.rank_cap > max_rank:
        raise mt.GuardError(
            f"exhaustive search over n={inst.n}, rank {m.rank_cap} exceeds the "
            f"limits n<={max_n}, rank<={max_rank}")
    tol = _tie_tol(inst)
    best, best_val = (), 0.0
    # sets arrive level by level, so each basis extends its prefix's basis
    # from the previous level (rebuilt when a non-hereditary family lacks it)
    prev, cur, level = {(): build_basis([], dim=inst.dim)}, {}, 0
    for S in mt.enumerate_independent_sets(m):
        if len(S) != level:
            prev, cur, level = cur, {}, len(S)
        if not S:
            cur[S] = prev[()]
            continue
        base = prev.get(S[:-1])
        if base is None:
            base = build_basis(inst.ground[list(S[:-1])], dim=inst.dim)
        cur[S], _ = extend_basis(base, inst.ground[S[-1]], S[-1])
        val = float(np.sum((cur[S].vectors @ inst.eta) ** 2))
        if val > best_val + tol:
            best, best_val = S, val
    # report the optimum as a sequence of prefix values
    basis = build_basis([], dim=inst.dim)
    values, gains, value = [], [], 0.0
    for s in best:
        basis, _ = extend_basis(basis, inst.ground[s], s)
        new_value = float(np.sum((basis.vectors @ inst.eta) ** 2))
        gains.append(new_value - value)
        values.append(new_value)
        value = new_value
    res = _finish(inst, "opt", list(best), values, gains, RANK_CAP_REACHED)
    res.objective = best_val if best else 0.0
    return res


def run(inst: Instance, algorithm: str, **kwargs) -> SelectionResult:
    if algorithm == "fr":
        return forward_regression(inst, **kwargs)
    if algorithm == "omp":
        return omp(inst, **kwargs)
    if algorithm == "opt":
        return brute_force_optimal(inst)
    raise ValueError(f"unknown algorithm {algorithm!r}")
