"""Dense real linear algebra kernels.

Orthonormalization with rank detection, a cyclic Jacobi eigensolver for
symmetric matrices, and orthogonal projectors. Everything is pure and
deterministic: identical input bytes produce identical output bytes,
which the report tooling depends on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    NonFinite,
    NotOrthonormal,
    NotSymmetric,
)

RANK_TOL = 1e-10
GRAM_TOL = 1e-9

_JACOBI_REL_OFF = 1e-12
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SpectrumReport:
    """Full spectrum of a symmetric matrix.

    eigenvalues are ascending; eigenvectors holds the matching unit
    eigenvectors as columns; residual is max_k ||A v_k - lambda_k v_k||.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float

    @property
    def smallest(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1])


def orthonormalize(spanning, tol: float = RANK_TOL) -> tuple[np.ndarray, int]:
    """Orthonormal basis for the span of the given vectors.

    Returns ``(basis, rank)`` where ``basis`` has shape (d, rank) with
    orthonormal columns spanning the same space as the input. A vector
    counts as dependent when its residual after projection onto the
    already accepted columns has norm at most ``tol * (1 + N)`` with N
    the largest input norm; zero vectors are skipped, not errors.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    vecs = [np.asarray(v, dtype=float).ravel() for v in spanning]
    if not vecs:
        raise EmptyInput("need at least one spanning vector")
    dim = vecs[0].size
    for v in vecs:
        if v.size != dim:
            raise DimensionMismatch(
                f"spanning vectors mix lengths {dim} and {v.size}"
            )
    arr = np.array(vecs, dtype=float)
    if not np.isfinite(arr).all():
        raise NonFinite("spanning set contains NaN or Inf")

    scale = 1.0 + float(np.sqrt((arr * arr).sum(axis=1)).max())
    cols: list[np.ndarray] = []
    for v in arr:
        w = v.copy()
        # two projection passes keep the basis orthonormal to ~1e-15
        for _ in range(2):
            for b in cols:
                w -= (b @ w) * b
        norm = float(np.linalg.norm(w))
        if norm <= tol * scale:
            continue
        cols.append(w / norm)
    if cols:
        basis = np.column_stack(cols)
    else:
        basis = np.zeros((dim, 0))
    return basis, len(cols)


def _jacobi(sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps; returns (diagonal, accumulated rotations)."""
    n = sym.shape[0]
    a = sym.copy()
    v = np.eye(n)
    fro = float(np.linalg.norm(a))
    if fro == 0.0 or n < 2:
        return np.diagonal(a).copy(), v

    for _ in range(_MAX_SWEEPS):
        # off-diagonal Frobenius mass, summed directly (subtracting the
        # diagonal mass from the total cancels catastrophically)
        strict = a.copy()
        np.fill_diagonal(strict, 0.0)
        off = float(np.linalg.norm(strict))
        if off <= _JACOBI_REL_OFF * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-16 * fro:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                v_p = v[:, p].copy()
                v_q = v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q
    else:  # pragma: no cover - sweeps cap is far beyond practical need
        raise RuntimeError("Jacobi iteration failed to converge")
    return np.diagonal(a).copy(), v


def sym_eig(matrix) -> SpectrumReport:
    """Eigendecomposition of a symmetric matrix via cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius mass drops below
    1e-12 times the Frobenius norm of the input. Output is deterministic:
    eigenvalues ascending (stable order for ties), each eigenvector
    scaled so its largest-magnitude entry is positive.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise NonFinite("matrix contains NaN or Inf")
    if m.size and float(np.abs(m - m.T).max()) > 1e-10:
        raise NotSymmetric("matrix is not symmetric within 1e-10")

    sym = 0.5 * (m + m.T)
    diag, vecs = _jacobi(sym)
    order = np.argsort(diag, kind="stable")
    values = diag[order]
    vectors = vecs[:, order].copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        if col[int(np.argmax(np.abs(col)))] < 0.0:
            vectors[:, k] = -col

    residual = 0.0
    if values.size:
        residual = float(
            np.linalg.norm(sym @ vectors - vectors * values, axis=0).max()
        )
    return SpectrumReport(values, vectors, residual)


def projector(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector B @ B.T onto the column span of ``basis``.

    The columns must be orthonormal: the Gram matrix may deviate from
    the identity by at most 1e-9 entrywise.
    """
    b = np.asarray(basis, dtype=float)
    if b.ndim != 2:
        raise DimensionMismatch("basis must be a 2-D matrix")
    dim, k = b.shape
    if k == 0:
        return np.zeros((dim, dim))
    gram = b.T @ b
    if float(np.abs(gram - np.eye(k)).max()) > GRAM_TOL:
        raise NotOrthonormal("basis columns are not orthonormal within 1e-9")
    return b @ b.T
