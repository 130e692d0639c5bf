"""Discrete frames: operators, optimal bounds, duals, classification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, NonFinite, NotAFrame
from .linalg import SpectrumReport, sym_eig

FRAME_TOL = 1e-10


@dataclass(frozen=True)
class DiscreteFrame:
    """Finite family of vectors in R^dim, stored as rows of ``vectors``."""

    dim: int
    vectors: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.vectors, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionMismatch("vectors must form a 2-D array")
        if arr.shape[0] == 0:
            raise EmptyInput("a frame needs at least one vector")
        if arr.shape[1] != self.dim:
            raise DimensionMismatch(
                f"vectors have length {arr.shape[1]}, ambient dim is {self.dim}"
            )
        if not np.isfinite(arr).all():
            raise NonFinite("frame vectors contain NaN or Inf")
        object.__setattr__(self, "vectors", arr)

    @property
    def size(self) -> int:
        return int(self.vectors.shape[0])


@dataclass(frozen=True)
class BoundsReport:
    """Optimal lower/upper bounds with the unit vectors achieving them."""

    lower: float
    upper: float
    is_frame: bool
    witness_low: np.ndarray
    witness_high: np.ndarray


def frame_operator(frame: DiscreteFrame) -> np.ndarray:
    """S = sum over i of the outer product f_i f_i^T."""
    return frame.vectors.T @ frame.vectors


def analysis_matrix(frame: DiscreteFrame) -> np.ndarray:
    """n x dim matrix whose row i is f_i; satisfies S = U^T U."""
    return frame.vectors.copy()


def _is_frame(lower: float, upper: float, frame_tol: float) -> bool:
    return lower > frame_tol * max(1.0, upper)


def _clamp_small_negative(value: float, scale: float) -> float:
    if value < 0.0 and abs(value) <= 1e-12 * max(1.0, scale):
        return 0.0
    return value


def bounds_from_spectrum(spec: SpectrumReport, frame_tol: float) -> BoundsReport:
    lower = _clamp_small_negative(spec.smallest, spec.largest)
    upper = spec.largest
    return BoundsReport(
        lower=lower,
        upper=upper,
        is_frame=_is_frame(lower, upper, frame_tol),
        witness_low=spec.eigenvectors[:, 0].copy(),
        witness_high=spec.eigenvectors[:, -1].copy(),
    )


def optimal_bounds(frame: DiscreteFrame, frame_tol: float = FRAME_TOL) -> BoundsReport:
    """Optimal bounds: extremal eigenvalues of the frame operator.

    The witnesses are the corresponding unit eigenvectors, so
    sum_i <witness, f_i>^2 reproduces the reported bound.
    """
    return bounds_from_spectrum(sym_eig(frame_operator(frame)), frame_tol)


def bessel_bound(frame: DiscreteFrame) -> float:
    """Optimal upper bound, valid even for non-frames."""
    return sym_eig(frame_operator(frame)).largest


def dual_frame(frame: DiscreteFrame, frame_tol: float = FRAME_TOL) -> DiscreteFrame:
    """Standard dual {S^-1 f_i}, giving the reconstruction identity."""
    spec = sym_eig(frame_operator(frame))
    if not _is_frame(spec.smallest, spec.largest, frame_tol):
        raise NotAFrame("lower bound is numerically zero; no dual exists")
    inv = spec.eigenvectors @ np.diag(1.0 / spec.eigenvalues) @ spec.eigenvectors.T
    return DiscreteFrame(frame.dim, frame.vectors @ inv)


def is_riesz_basis(frame: DiscreteFrame, frame_tol: float = FRAME_TOL) -> bool:
    """Exactly dim vectors forming a frame: a linearly independent spanning set."""
    if frame.size != frame.dim:
        return False
    spec = sym_eig(frame_operator(frame))
    return _is_frame(spec.smallest, spec.largest, frame_tol)
