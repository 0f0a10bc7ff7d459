"""Inner-product-space primitives on real coordinate vectors.

Vectors are plain 1-D ``numpy`` arrays holding coordinates in an orthonormal
ambient basis. Everything here is a pure function of its inputs.
"""
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

TOL_RANK = 1e-9


def as_vec(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite coordinates")
    return arr


def _check_dims(u: np.ndarray, v: np.ndarray):
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")


def inner(u, v) -> float:
    u, v = as_vec(u), as_vec(v)
    _check_dims(u, v)
    return float(u @ v)


def normalize(v, tol: float = TOL_RANK) -> np.ndarray:
    v = as_vec(v)
    nrm = np.linalg.norm(v)
    if nrm <= tol:
        raise ValueError(f"cannot normalize a near-zero vector (norm {nrm:.3g})")
    return v / nrm


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal basis grown one source vector at a time.

    ``vectors`` has shape ``(rank, dim)``. ``source_indices`` lists the
    caller's labels for the vectors that were kept; ``dependent`` lists the
    labels that were found to lie in the span already.
    """

    dim: int
    vectors: np.ndarray = None
    source_indices: tuple = ()
    dependent: tuple = ()
    tol_rank: float = TOL_RANK

    def __post_init__(self):
        if self.vectors is None:
            object.__setattr__(self, "vectors", np.zeros((0, self.dim)))

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    def residual(self, v: np.ndarray) -> np.ndarray:
        """Component of ``v`` orthogonal to the span (two Gram-Schmidt passes)."""
        r = np.array(v, dtype=float)
        if self.rank == 0:
            return r
        Q = self.vectors
        r = r - Q.T @ (Q @ r)
        r = r - Q.T @ (Q @ r)
        return r

    def project(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if self.rank == 0:
            return np.zeros_like(v)
        return self.vectors.T @ (self.vectors @ v)


def empty_basis(dim: int, tol_rank: float = TOL_RANK) -> OrthoBasis:
    return OrthoBasis(dim=dim, tol_rank=tol_rank)


def extend_basis(basis: OrthoBasis, v, index=None):
    """Append the normalized residual of ``v`` to ``basis``.

    Returns ``(new_basis, residual_norm)``. When the residual norm does not
    exceed ``basis.tol_rank`` the vector is recorded as dependent and the
    spanning vectors are left unchanged.
    """
    v = as_vec(v)
    if v.shape[0] != basis.dim:
        raise ValueError(f"dimension mismatch: {v.shape[0]} vs {basis.dim}")
    r = basis.residual(v)
    rnorm = float(np.linalg.norm(r))
    if index is None:
        index = basis.rank + len(basis.dependent)
    if rnorm <= basis.tol_rank:
        return (
            OrthoBasis(basis.dim, basis.vectors, basis.source_indices,
                       basis.dependent + (index,), basis.tol_rank),
            rnorm,
        )
    q = r / rnorm
    return (
        OrthoBasis(basis.dim, np.vstack([basis.vectors, q]),
                   basis.source_indices + (index,), basis.dependent, basis.tol_rank),
        rnorm,
    )


def build_basis(elements: Iterable, dim: Optional[int] = None,
                indices: Optional[Sequence] = None, tol_rank: float = TOL_RANK) -> OrthoBasis:
    elements = [as_vec(e) for e in elements]
    if dim is None:
        if not elements:
            raise ValueError("dim is required for an empty element set")
        dim = elements[0].shape[0]
    if indices is None:
        indices = range(len(elements))
    basis = empty_basis(dim, tol_rank)
    for idx, e in zip(indices, elements):
        basis, _ = extend_basis(basis, e, idx)
    return basis


def project_norm_sq(eta, elements: Iterable, tol_rank: float = TOL_RANK) -> float:
    """Squared norm of the projection of ``eta`` onto span(elements)."""
    eta = as_vec(eta)
    basis = build_basis(elements, dim=eta.shape[0], tol_rank=tol_rank)
    if basis.rank == 0:
        return 0.0
    return float(np.sum((basis.vectors @ eta) ** 2))


@dataclass(frozen=True)
class Decomposition:
    """``t = orthogonal * sin(angle) + parallel * cos(angle)``.

    Either component is ``None`` when it vanishes.
    """

    parallel: Optional[np.ndarray]
    orthogonal: Optional[np.ndarray]
    angle: float
    residual_norm: float = field(default=0.0)

    def reconstruct(self) -> np.ndarray:
        parts = []
        if self.orthogonal is not None:
            parts.append(self.orthogonal * np.sin(self.angle))
        if self.parallel is not None:
            parts.append(self.parallel * np.cos(self.angle))
        return np.sum(parts, axis=0)


def decompose(t, elements: Iterable, tol_rank: float = TOL_RANK) -> Decomposition:
    t = as_vec(t)
    if abs(np.linalg.norm(t) - 1.0) > 1e-9:
        raise ValueError("decompose expects a unit vector")
    basis = build_basis(elements, dim=t.shape[0], tol_rank=tol_rank)
    r = basis.residual(t)
    rnorm = float(np.linalg.norm(r))
    # project directly rather than forming t - r, which cancels when t is
    # nearly orthogonal to the span; arctan2 stays accurate near both ends
    par = basis.project(t)
    pnorm = float(np.linalg.norm(par))
    angle = float(np.arctan2(rnorm, pnorm))
    orthogonal = r / rnorm if rnorm > tol_rank else None
    parallel = par / pnorm if pnorm > tol_rank else None
    if orthogonal is None:
        angle = 0.0
    elif parallel is None:
        angle = np.pi / 2
    return Decomposition(parallel, orthogonal, angle, rnorm)


def marginal_gain(eta, elements: Sequence, s, tol_rank: float = TOL_RANK) -> float:
    """f(E + s) - f(E), computed as <eta, s_perp>^2."""
    eta, s = as_vec(eta), as_vec(s)
    _check_dims(eta, s)
    basis = build_basis(elements, dim=eta.shape[0], tol_rank=tol_rank)
    r = basis.residual(s)
    rnorm = np.linalg.norm(r)
    if rnorm <= tol_rank:
        return 0.0
    return float((eta @ r / rnorm) ** 2)
