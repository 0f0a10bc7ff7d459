"""Instance generators and the seeded batch runner.

Every instance gets its own random stream derived from ``(seed, index)``, so
a sweep is reproducible regardless of how rows are scheduled.
"""
import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import ortho_group

from . import matroid as mt
from .bounds import near_orthogonal_asymptote, verify_bounds
from .curvature import EXACT_MAX_K, EXACT_MAX_N, principal_cos
from .selectors import Instance

KINDS = ("orthogonal", "perturbed", "gaussian_dictionary", "paper_example")
ETA_MODES = ("random_unit", "in_span", "given")
PAPER_EXAMPLES = ("fr_counterexample", "nonuniform_counterexample")

WORKERS_ENV = "PROJSEL_WORKERS"


@dataclass
class GeneratorConfig:
    kind: str = "gaussian_dictionary"
    dim: int = 8
    n: int = 8
    K: int = 3
    seed: int = 0
    eta_mode: str = "random_unit"
    eta: Optional[list] = None
    delta: float = 0.0
    name: Optional[str] = None
    epsilon: float = 0.1
    # matroid description; None means Uniform(K). Partition may be given as
    # {"type": "partition", "n_blocks": B, "cap": c} for contiguous blocks.
    matroid: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind: unknown generator kind {self.kind!r}")
        if self.eta_mode not in ETA_MODES:
            raise ValueError(f"eta_mode: unknown mode {self.eta_mode!r}")
        if self.kind == "paper_example":
            if self.name not in PAPER_EXAMPLES:
                raise ValueError(f"name: paper_example must be one of {PAPER_EXAMPLES}")
            return
        if self.dim < 1 or self.n < 1 or self.K < 1:
            raise ValueError("dim, n and K must be positive")
        if self.kind in ("orthogonal", "perturbed") and self.n > self.dim:
            raise ValueError(f"n: {self.kind} ground sets need n <= dim ({self.n} > {self.dim})")
        if self.delta < 0:
            raise ValueError("delta: must be nonnegative")
        if self.eta_mode == "given" and (self.eta is None or len(self.eta) != self.dim):
            raise ValueError("eta: 'given' mode needs dim coordinates")

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorConfig":
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"{sorted(unknown)[0]}: unknown generator field")
        return cls(**obj)

    def to_json(self) -> dict:
        return asdict(self)


def instance_rng(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, int(index)]))


def fr_counterexample() -> Instance:
    r = np.sqrt(2) / 2
    ground = np.array([[r, r, 0, 0], [0, r, r, 0], [0, 0, r, r]])
    return Instance(ground, np.array([1.0, 2.0, 2.0, 1.0]), mt.Uniform(2, 3),
                    labels=("s1", "s2", "s3"))


def nonuniform_counterexample(epsilon: float = 0.1) -> Instance:
    family = frozenset(frozenset(S) for S in ([0], [1], [2], [3], [0, 1], [2, 3]))
    eta = np.array([np.sqrt(1 + epsilon), 0.0, 1.0, 1.0])
    return Instance(np.eye(4), eta, mt.Explicit(family, 4),
                    labels=("|0>", "|1>", "|2>", "|3>"))


def _matroid(cfg: GeneratorConfig, n: int):
    spec = cfg.matroid
    if spec is None:
        return mt.Uniform(cfg.K, n)
    if spec.get("type") == "partition" and "n_blocks" in spec:
        blocks = [tuple(int(i) for i in b) for b in np.array_split(np.arange(n), spec["n_blocks"])]
        caps = [int(spec.get("cap", 1))] * len(blocks)
        return mt.Partition(tuple(blocks), tuple(caps), n)
    return mt.from_json(spec, ground_size=n)


def _orthonormal_rows(rng, dim, n):
    if dim == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])[:n]
    return ortho_group.rvs(dim, random_state=rng)[:n]


def _tilt(rng, ground, max_angle):
    # per-row tilt angle in [0, max_angle] and a raw direction to tilt toward
    angles = rng.uniform(0.0, max_angle, size=ground.shape[0])
    dirs = rng.normal(size=ground.shape)
    return angles, dirs


def _apply_tilt(ground, angles, dirs):
    out = np.empty_like(ground)
    for i, (e, th, w) in enumerate(zip(ground, angles, dirs)):
        w = w - (w @ e) * e
        nw = np.linalg.norm(w)
        if nw == 0 or th == 0:
            out[i] = e
            continue
        x = np.cos(th) * e + np.sin(th) * (w / nw)
        out[i] = x / np.linalg.norm(x)
    return out


def _exact_angle_feasible(n, K):
    return n <= EXACT_MAX_N and K <= EXACT_MAX_K


def generate(cfg: GeneratorConfig, index: int = 0) -> Instance:
    """Build the instance for ``cfg`` and replicate number ``index``.

    The perturbed kind tilts a random orthonormal set by angles drawn from
    ``[0, delta]``. Tilts of several vectors can add up, so when the exact
    principal angle is cheap to compute all tilts are halved until the gap
    ``pi/2 - phi`` is at most ``delta``.
    """
    if cfg.kind == "paper_example":
        if cfg.name == "fr_counterexample":
            return fr_counterexample()
        return nonuniform_counterexample(cfg.epsilon)

    rng = instance_rng(cfg.seed, index)
    if cfg.kind == "gaussian_dictionary":
        ground = rng.normal(size=(cfg.n, cfg.dim))
        ground /= np.linalg.norm(ground, axis=1, keepdims=True)
    else:
        ground = _orthonormal_rows(rng, cfg.dim, cfg.n)
        if cfg.kind == "perturbed" and cfg.delta > 0:
            angles, dirs = _tilt(rng, ground, cfg.delta)
            base = ground
            ground = _apply_tilt(base, angles, dirs)
            if _exact_angle_feasible(cfg.n, cfg.K):
                for _ in range(60):
                    gap = np.pi / 2 - np.arccos(principal_cos(ground, cfg.K))
                    if gap <= cfg.delta:
                        break
                    angles = angles / 2
                    ground = _apply_tilt(base, angles, dirs)

    if cfg.eta_mode == "given":
        eta = np.asarray(cfg.eta, dtype=float)
    elif cfg.eta_mode == "in_span":
        eta = rng.normal(size=cfg.n) @ ground
        eta /= np.linalg.norm(eta)
    else:
        eta = rng.normal(size=cfg.dim)
        eta /= np.linalg.norm(eta)
    return Instance(ground, eta, _matroid(cfg, cfg.n))


CSV_COLUMNS = (
    "instance_id", "config_index", "rep", "kind", "seed", "delta", "n", "dim", "K",
    "kappa_fwd", "kappa_bwd", "kappa_omp", "phi",
    "f_fr", "f_omp", "f_opt", "ratio_fr", "ratio_omp",
    "bound_fr_uniform", "bound_omp_uniform", "bound_fr_nonuniform", "bound_omp_nonuniform",
    "asymptote", "uniform", "degenerate", "satisfied_fr", "satisfied_omp",
    "angle_bound_ok", "pairwise_ok", "error", "wall_time",
)


@dataclass
class SweepResult:
    rows: List[dict] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(r["error"] == "" and r["satisfied_fr"] is not False
                   and r["satisfied_omp"] is not False for r in self.rows)

    def to_csv(self, with_times: bool = True) -> str:
        cols = [c for c in CSV_COLUMNS if with_times or c != "wall_time"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.rows:
            w.writerow([_fmt(row.get(c)) for c in cols])
        return buf.getvalue()

    def to_json(self) -> list:
        return [dict(r) for r in self.rows]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _row(job):
    ci, rep, cfg = job
    row = {c: None for c in CSV_COLUMNS}
    row.update(instance_id=f"{ci}-{rep}", config_index=ci, rep=rep, kind=cfg.kind,
               seed=cfg.seed, delta=float(cfg.delta), error="")
    t0 = time.perf_counter()
    try:
        inst = generate(cfg, rep)
        rep_ = verify_bounds(inst)
    except (mt.GuardError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        row["wall_time"] = time.perf_counter() - t0
        return row
    sat = rep_.satisfied
    row.update(
        n=inst.n, dim=inst.dim, K=rep_.K,
        kappa_fwd=rep_.kappa_fwd, kappa_bwd=rep_.kappa_bwd, kappa_omp=rep_.kappa_omp,
        phi=rep_.phi, f_fr=rep_.f_fr, f_omp=rep_.f_omp, f_opt=rep_.f_opt,
        ratio_fr=rep_.empirical_ratio_fr, ratio_omp=rep_.empirical_ratio_omp,
        bound_fr_uniform=rep_.bound_fr_uniform, bound_omp_uniform=rep_.bound_omp_uniform,
        bound_fr_nonuniform=rep_.bound_fr_nonuniform,
        bound_omp_nonuniform=rep_.bound_omp_nonuniform,
        asymptote=near_orthogonal_asymptote(rep_.K, float(cfg.delta)),
        uniform=rep_.uniform, degenerate=rep_.degenerate,
        satisfied_fr=sat.get("fr_uniform", sat.get("fr_nonuniform")),
        satisfied_omp=sat.get("omp_uniform", sat.get("omp_nonuniform")),
        angle_bound_ok=rep_.angle_bound_ok, pairwise_ok=rep_.pairwise_ok,
        wall_time=time.perf_counter() - t0,
    )
    return row


def default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


def run_sweep(configs: Sequence[GeneratorConfig], reps: int = 1,
              workers: Optional[int] = None) -> SweepResult:
    """Generate ``reps`` instances per config and verify every bound on each.

    Guard violations and bad configs are recorded in the row's ``error``
    column instead of aborting the sweep. Rows come back in
    (config, replicate) order whatever the worker count.
    """
    jobs = [(ci, r, cfg) for ci, cfg in enumerate(configs) for r in range(reps)]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row, jobs))
    else:
        rows = [_row(j) for j in jobs]
    return SweepResult(rows)


def delta_sweep_configs(deltas: Sequence[float], K: int = 3, n: int = 8, dim: int = 8,
                        seed: int = 0, matroid: Optional[dict] = None) -> List[GeneratorConfig]:
    return [GeneratorConfig(kind="perturbed", dim=dim, n=n, K=K, seed=seed + i,
                            delta=float(d), matroid=matroid)
            for i, d in enumerate(deltas)]
