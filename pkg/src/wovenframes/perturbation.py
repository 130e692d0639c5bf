"""Perturbation checkers for pairs of fusion frames.

Each checker certifies, by seeded sampling, that two fusion frames are
close in the sense of one closeness condition, and emits the woven
interval that condition predicts. Certificates are sampled evidence,
never proofs: ``hypothesis_holds`` means no violation was found on the
examined batch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConstantOutOfRange, IndexMismatch, WeightMismatch
from .fusion import FusionFrame, fusion_frame_operator
from .linalg import sym_eig

_HOLD_SLACK = 1e-9
_SUBSET_CAP = 4096


@dataclass(frozen=True)
class PerturbationCertificate:
    """Sampled verdict for one closeness condition.

    ``gate_margin`` is the slack of the constant gate (non-positive when
    the gate holds, None for methods without a gate),
    ``inequality_violation`` the worst sampled slack of the defining
    inequality, and ``max_violation`` the larger of the two, so
    hypothesis_holds is equivalent to max_violation <= 1e-9.
    """

    method: str
    hypothesis_holds: bool
    constants: tuple[float, ...]
    predicted_lower: float
    predicted_upper: float
    sample_count: int
    seed: int
    max_violation: float
    gate_margin: float | None
    inequality_violation: float


def _check_pair(w: FusionFrame, v: FusionFrame) -> None:
    if w.dim != v.dim:
        raise IndexMismatch("families live in different ambient spaces")
    if w.size != v.size:
        raise IndexMismatch("families have different index sets")


def _check_unit_interval(**constants: float) -> None:
    for name, value in constants.items():
        if not np.isfinite(value) or value < 0.0 or value >= 1.0:
            raise ConstantOutOfRange(f"{name} must lie in [0, 1), got {value}")


def _extremal_bounds(ff: FusionFrame) -> tuple[float, float]:
    spec = sym_eig(fusion_frame_operator(ff))
    return spec.smallest, spec.largest


def _unit_rows(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _extremal_vectors(w: FusionFrame, v: FusionFrame) -> np.ndarray:
    """Extremal eigenvectors of S_W, S_V and S_W - S_V, as rows."""
    sw = fusion_frame_operator(w)
    sv = fusion_frame_operator(v)
    rows = []
    for op in (sw, sv, sw - sv):
        spec = sym_eig(op)
        rows.append(spec.eigenvectors[:, 0])
        rows.append(spec.eigenvectors[:, -1])
    return np.array(rows)


def _projectors(ff: FusionFrame) -> np.ndarray:
    out = np.zeros((ff.size, ff.dim, ff.dim))
    for i, sub in enumerate(ff.subspaces):
        if sub.rank:
            out[i] = sub.basis @ sub.basis.T
    return out


def _subset_masks(n: int, rng: np.random.Generator) -> np.ndarray:
    if 2**n <= _SUBSET_CAP:
        return np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    drawn = rng.integers(0, 2, size=(_SUBSET_CAP, n)).astype(float)
    drawn[0] = 0.0
    drawn[1] = 1.0
    return drawn


def pw_check(
    w: FusionFrame,
    v: FusionFrame,
    lam1: float,
    lam2: float,
    mu: float,
    samples: int = 1000,
    seed: int = 0,
) -> PerturbationCertificate:
    """Synthesis-operator closeness check.

    Both synthesis maps are evaluated on the shared product domain (one
    ambient copy per index) as c -> sum_i weight_i P_i c_i. The gate
    (2/A_W)(sqrt(B_W)+sqrt(B_V))(lam1 sqrt(B_W)+lam2 sqrt(B_V)+mu) <= 1
    uses the computed optimal bounds, and the sampled inequality is

        ||T_W c - T_V c|| <= lam1 ||T_W c|| + lam2 ||T_V c|| + mu ||c||

    with the additive term scaled by ||c|| so the condition is
    homogeneous. On success the predicted woven interval is
    [A_W / 2, B_W + B_V].
    """
    _check_unit_interval(lam1=lam1, lam2=lam2, mu=mu)
    _check_pair(w, v)
    a_w, b_w = _extremal_bounds(w)
    _, b_v = _extremal_bounds(v)

    if a_w > 0.0:
        gate_value = (
            (2.0 / a_w)
            * (np.sqrt(b_w) + np.sqrt(b_v))
            * (lam1 * np.sqrt(b_w) + lam2 * np.sqrt(b_v) + mu)
        )
        gate_margin = float(gate_value - 1.0)
    else:
        gate_margin = float("inf")

    n, d = w.size, w.dim
    rng = np.random.default_rng(seed)
    flat = _unit_rows(rng, samples, n * d)
    blocks = flat.reshape(samples, n, d)
    diag = _extremal_vectors(w, v) / np.sqrt(n)
    embedded = np.repeat(diag[:, None, :], n, axis=1)
    batch = np.concatenate([blocks, embedded], axis=0)

    pw_ = _projectors(w) * w.weights[:, None, None]
    pv_ = _projectors(v) * v.weights[:, None, None]
    t_w = np.einsum("snd,nde->se", batch, pw_)
    t_v = np.einsum("snd,nde->se", batch, pv_)
    norms_c = np.linalg.norm(batch.reshape(batch.shape[0], -1), axis=1)
    lhs = np.linalg.norm(t_w - t_v, axis=1)
    rhs = (
        lam1 * np.linalg.norm(t_w, axis=1)
        + lam2 * np.linalg.norm(t_v, axis=1)
        + mu * norms_c
    )
    inequality_violation = float((lhs - rhs).max())

    holds = gate_margin <= _HOLD_SLACK and inequality_violation <= _HOLD_SLACK
    return PerturbationCertificate(
        method="pw",
        hypothesis_holds=holds,
        constants=(lam1, lam2, mu),
        predicted_lower=a_w / 2.0,
        predicted_upper=b_w + b_v,
        sample_count=int(batch.shape[0]),
        seed=seed,
        max_violation=float(max(gate_margin, inequality_violation)),
        gate_margin=gate_margin,
        inequality_violation=inequality_violation,
    )


def op_perturbation_check(
    w: FusionFrame,
    v: FusionFrame,
    lam: float,
    mu: float,
    gamma: float,
    samples: int = 1000,
    seed: int = 0,
) -> PerturbationCertificate:
    """Partial-operator closeness check.

    With S_X^s the weighted projector sum over an index subset s, the
    gate lam*B_W + mu*B_V + gamma*sqrt(B_W) < A_W is combined with the
    sampled inequality, over unit f and every subset s,

        ||S_W^s f - S_V^s f||
            <= lam ||S_W^s f|| + mu ||S_V^s f|| + gamma ||U_W^s f||

    where ||U_W^s f||^2 sums the squared weighted projection norms over
    s. On success the predicted interval is A_W -/+ the gate sum.
    """
    _check_unit_interval(lam=lam, mu=mu, gamma=gamma)
    _check_pair(w, v)
    a_w, b_w = _extremal_bounds(w)
    _, b_v = _extremal_bounds(v)

    gate_value = lam * b_w + mu * b_v + gamma * np.sqrt(b_w)
    gate_margin = float(gate_value - a_w)

    n, d = w.size, w.dim
    rng = np.random.default_rng(seed)
    batch = np.concatenate(
        [_unit_rows(rng, samples, d), _extremal_vectors(w, v)], axis=0
    )

    pw_sq = _projectors(w) * (w.weights**2)[:, None, None]
    pv_sq = _projectors(v) * (v.weights**2)[:, None, None]
    w_parts = np.einsum("sd,nde->nse", batch, pw_sq)
    v_parts = np.einsum("sd,nde->nse", batch, pv_sq)
    w_normsq = np.einsum("sd,nde,se->ns", batch, pw_sq, batch)

    worst = -np.inf
    for mask in _subset_masks(n, rng):
        s_w = np.tensordot(mask, w_parts, axes=(0, 0))
        s_v = np.tensordot(mask, v_parts, axes=(0, 0))
        lhs = np.linalg.norm(s_w - s_v, axis=1)
        u_norm = np.sqrt(np.maximum(np.tensordot(mask, w_normsq, axes=(0, 0)), 0.0))
        rhs = (
            lam * np.linalg.norm(s_w, axis=1)
            + mu * np.linalg.norm(s_v, axis=1)
            + gamma * u_norm
        )
        worst = max(worst, float((lhs - rhs).max()))
    inequality_violation = worst

    holds = gate_margin <= _HOLD_SLACK and inequality_violation <= _HOLD_SLACK
    return PerturbationCertificate(
        method="op",
        hypothesis_holds=holds,
        constants=(lam, mu, gamma),
        predicted_lower=float(a_w - gate_value),
        predicted_upper=float(a_w + gate_value),
        sample_count=int(batch.shape[0]),
        seed=seed,
        max_violation=float(max(gate_margin, inequality_violation)),
        gate_margin=gate_margin,
        inequality_violation=inequality_violation,
    )


def proj_perturbation_check(
    w: FusionFrame,
    v: FusionFrame,
    kconst: float,
    samples: int = 1000,
    seed: int = 0,
    squared: bool = False,
) -> PerturbationCertificate:
    """Projection-difference closeness check for families sharing weights.

    Samples unit f and every index subset s, requiring

        sum_{i in s} w_i^2 ||P_{W_i} f - P_{V_i} f||
            <= K min( sum_{i in s} w_i^2 ||P_{W_i} f||,
                      sum_{i in s} w_i^2 ||P_{V_i} f|| ).

    Norms enter unsquared by default; ``squared=True`` switches every
    norm in the displayed inequality to its square. On success the
    predicted interval is [(A_W + A_V) / (2K + 1), B_W + B_V].
    """
    if not np.isfinite(kconst) or kconst <= 0.0:
        raise ConstantOutOfRange(f"K must be positive and finite, got {kconst}")
    _check_pair(w, v)
    if float(np.abs(w.weights - v.weights).max()) > 1e-12:
        raise WeightMismatch("families must share the same weights")

    a_w, b_w = _extremal_bounds(w)
    a_v, b_v = _extremal_bounds(v)

    n, d = w.size, w.dim
    rng = np.random.default_rng(seed)
    batch = np.concatenate(
        [_unit_rows(rng, samples, d), _extremal_vectors(w, v)], axis=0
    )

    proj_w = _projectors(w)
    proj_v = _projectors(v)
    wsq = (w.weights**2)[:, None]
    pw_f = np.einsum("sd,nde->nse", batch, proj_w)
    pv_f = np.einsum("sd,nde->nse", batch, proj_v)
    diff = np.linalg.norm(pw_f - pv_f, axis=2)
    wn = np.linalg.norm(pw_f, axis=2)
    vn = np.linalg.norm(pv_f, axis=2)
    if squared:
        diff, wn, vn = diff**2, wn**2, vn**2
    diff, wn, vn = diff * wsq, wn * wsq, vn * wsq

    worst = -np.inf
    for mask in _subset_masks(n, rng):
        lhs = np.tensordot(mask, diff, axes=(0, 0))
        rhs = kconst * np.minimum(
            np.tensordot(mask, wn, axes=(0, 0)),
            np.tensordot(mask, vn, axes=(0, 0)),
        )
        worst = max(worst, float((lhs - rhs).max()))
    inequality_violation = worst

    holds = inequality_violation <= _HOLD_SLACK
    return PerturbationCertificate(
        method="proj",
        hypothesis_holds=holds,
        constants=(kconst,),
        predicted_lower=float((a_w + a_v) / (2.0 * kconst + 1.0)),
        predicted_upper=float(b_w + b_v),
        sample_count=int(batch.shape[0]),
        seed=seed,
        max_violation=inequality_violation,
        gate_margin=None,
        inequality_violation=inequality_violation,
    )
