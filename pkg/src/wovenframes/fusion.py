"""Fusion frames: weighted subspaces, their operators and classifications."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotOrthonormal
from .frames import FRAME_TOL, bounds_from_spectrum
from .linalg import GRAM_TOL, orthonormalize, projector, sym_eig


@dataclass(frozen=True)
class Subspace:
    """Subspace of R^dim held as a (dim, k) matrix of orthonormal columns.

    k = 0 is allowed as a degenerate marker (trivial subspace with zero
    projector); it shows up for empty intersections and for member slots
    that contribute nothing.
    """

    dim: int
    basis: np.ndarray

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] != self.dim:
            raise DimensionMismatch(
                f"basis must be {self.dim} x k, got shape {b.shape}"
            )
        if b.shape[1] > self.dim:
            raise DimensionMismatch("subspace rank exceeds ambient dimension")
        if not np.isfinite(b).all():
            raise NonFinite("basis contains NaN or Inf")
        if b.shape[1]:
            gram = b.T @ b
            if float(np.abs(gram - np.eye(b.shape[1])).max()) > GRAM_TOL:
                raise NotOrthonormal("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)

    @classmethod
    def from_spanning(cls, dim: int, vectors, tol: float = 1e-10) -> "Subspace":
        """Orthonormalize a spanning set; an empty or all-zero set gives k = 0."""
        vecs = list(vectors)
        if not vecs:
            return cls(dim, np.zeros((dim, 0)))
        basis, _ = orthonormalize(vecs, tol=tol)
        if basis.shape[0] != dim:
            raise DimensionMismatch(
                f"spanning vectors live in R^{basis.shape[0]}, expected R^{dim}"
            )
        return cls(dim, basis)

    @property
    def rank(self) -> int:
        return int(self.basis.shape[1])

    def projector(self) -> np.ndarray:
        return projector(self.basis)

    def project(self, f: np.ndarray) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(self.dim)
        return self.basis @ (self.basis.T @ f)


@dataclass(frozen=True)
class FusionFrame:
    """Ordered family of (subspace, weight) members over a shared R^dim."""

    dim: int
    subspaces: tuple[Subspace, ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        subs = tuple(self.subspaces)
        w = np.asarray(self.weights, dtype=float).ravel()
        if len(subs) == 0:
            raise DimensionMismatch("a fusion frame needs at least one member")
        if w.size != len(subs):
            raise DimensionMismatch("one weight per subspace required")
        if not np.isfinite(w).all() or (w <= 0).any():
            raise NonFinite("weights must be finite and strictly positive")
        for s in subs:
            if s.dim != self.dim:
                raise DimensionMismatch("all subspaces must share the ambient dim")
        object.__setattr__(self, "subspaces", subs)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return len(self.subspaces)

    def restrict(self, indices) -> "FusionFrame":
        idx = list(indices)
        return FusionFrame(
            self.dim,
            tuple(self.subspaces[i] for i in idx),
            self.weights[idx],
        )


@dataclass(frozen=True)
class FusionBoundsReport:
    lower: float
    upper: float
    is_fusion_frame: bool
    witness_low: np.ndarray
    witness_high: np.ndarray


def fusion_frame_operator(ff: FusionFrame) -> np.ndarray:
    """S = sum over i of weight_i^2 * P_i, a symmetric PSD matrix."""
    out = np.zeros((ff.dim, ff.dim))
    for sub, w in zip(ff.subspaces, ff.weights):
        if sub.rank:
            out += (w * w) * (sub.basis @ sub.basis.T)
    return out


def fusion_bounds(ff: FusionFrame, frame_tol: float = FRAME_TOL) -> FusionBoundsReport:
    """Optimal bounds: extremal eigenvalues of the fusion frame operator."""
    rep = bounds_from_spectrum(sym_eig(fusion_frame_operator(ff)), frame_tol)
    return FusionBoundsReport(
        lower=rep.lower,
        upper=rep.upper,
        is_fusion_frame=rep.is_frame,
        witness_low=rep.witness_low,
        witness_high=rep.witness_high,
    )


def analysis_apply(ff: FusionFrame, f) -> list[np.ndarray]:
    """Weighted projections ``weight_i * P_i f``, one block per member."""
    vec = np.asarray(f, dtype=float).ravel()
    if vec.size != ff.dim:
        raise DimensionMismatch(
            f"vector has length {vec.size}, ambient dim is {ff.dim}"
        )
    return [w * sub.project(vec) for sub, w in zip(ff.subspaces, ff.weights)]


def _stacked_columns(ff: FusionFrame) -> np.ndarray:
    blocks = [
        w * sub.basis for sub, w in zip(ff.subspaces, ff.weights) if sub.rank
    ]
    if not blocks:
        return np.zeros((ff.dim, 0))
    return np.hstack(blocks)


def _stacked_rank(ff: FusionFrame) -> int:
    stacked = _stacked_columns(ff)
    if stacked.shape[1] == 0:
        return 0
    _, rank = orthonormalize(list(stacked.T))
    return rank


def synthesis_is_onto(ff: FusionFrame) -> bool:
    """Whether the synthesis map covers R^dim: the stacked weighted bases
    have full row rank."""
    return _stacked_rank(ff) == ff.dim


def is_riesz_decomposition(ff: FusionFrame) -> bool:
    """Every vector splits uniquely as a sum of per-member components:
    the member dimensions add up to dim and the stacked bases have rank dim."""
    total = sum(sub.rank for sub in ff.subspaces)
    return total == ff.dim and _stacked_rank(ff) == ff.dim


def is_orthonormal_fusion_basis(ff: FusionFrame) -> bool:
    """Riesz decomposition with mutually orthogonal members."""
    if not is_riesz_decomposition(ff):
        return False
    for i, a in enumerate(ff.subspaces):
        if a.rank == 0:
            continue
        for b in ff.subspaces[i + 1 :]:
            if b.rank == 0:
                continue
            if float(np.abs(a.basis.T @ b.basis).max()) > GRAM_TOL:
                return False
    return True
