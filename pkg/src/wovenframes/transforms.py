"""Structural maps that carry woven systems to woven systems.

Covers images under bounded invertible operators, self-adjoint
conjugation of weaving operators, intersection with a closed subspace,
the equivalence between local vector systems and their induced fusion
families, and removal of a weakly contributing index subset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    EmptyIntersection,
    IndexMismatch,
    InvarianceViolated,
    NotSelfAdjoint,
    SingularOperator,
    WrongKind,
)
from .frames import FRAME_TOL, DiscreteFrame
from .fusion import (
    FusionFrame,
    Subspace,
    fusion_bounds,
    fusion_frame_operator,
)
from .linalg import orthonormalize, sym_eig
from .weaving import (
    FUSION,
    Partition,
    WovenFamily,
    WovenReport,
    contribution_stacks,
    weave,
    woven_bounds_exhaustive,
    woven_bounds_from_contributions,
)

_PIVOT_TOL = 1e-10
_INTERSECT_TOL = 1e-8


def invert_matrix(matrix: np.ndarray, pivot_tol: float = _PIVOT_TOL) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting.

    Raises SingularOperator when the best remaining pivot falls below
    ``pivot_tol`` relative to the largest input entry.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("only square matrices can be inverted")
    n = m.shape[0]
    scale = max(1.0, float(np.abs(m).max()))
    aug = np.hstack([m.copy(), np.eye(n)])
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[pivot_row, col]) <= pivot_tol * scale:
            raise SingularOperator(f"pivot below {pivot_tol} at column {col}")
        if pivot_row != col:
            aug[[col, pivot_row]] = aug[[pivot_row, col]]
        aug[col] /= aug[col, col]
        for row in range(n):
            if row != col and aug[row, col] != 0.0:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


@dataclass(frozen=True)
class InvertibleOperator:
    """Square operator with cached inverse and 2-norms of both."""

    matrix: np.ndarray
    inv: np.ndarray
    norm: float
    inv_norm: float

    @classmethod
    def from_matrix(cls, matrix, pivot_tol: float = _PIVOT_TOL) -> "InvertibleOperator":
        m = np.asarray(matrix, dtype=float)
        inv = invert_matrix(m, pivot_tol)
        norm = float(np.sqrt(sym_eig(m.T @ m).largest))
        inv_norm = float(np.sqrt(sym_eig(inv.T @ inv).largest))
        return cls(m, inv, norm, inv_norm)


def apply_operator_discrete(
    op: InvertibleOperator,
    family: WovenFamily,
    frame_tol: float = FRAME_TOL,
) -> tuple[WovenFamily, tuple[float, float]]:
    """Image family {E f_ij} plus its predicted universal interval.

    The prediction scales the family's exhaustive universal bounds by
    1/||E^-1||^2 below and ||E||^2 above; the image family's own
    exhaustive interval always lands inside it.
    """
    if family.kind != "discrete":
        raise WrongKind("operator images are defined for discrete families here")
    base = woven_bounds_exhaustive(family, frame_tol)
    image = WovenFamily.discrete(
        tuple(
            DiscreteFrame(s.dim, s.vectors @ op.matrix.T)
            for s in family.systems
        )
    )
    predicted = (
        base.universal_lower / (op.inv_norm**2),
        base.universal_upper * (op.norm**2),
    )
    return image, predicted


def conjugation_check(
    op: InvertibleOperator,
    family: WovenFamily,
    p: Partition,
    invariance_tol: float = 1e-8,
) -> float:
    """Residual ``max|S' - E S E^-1|`` for one weaving of a fusion pair.

    S is the weaving's fusion frame operator, S' the operator of the
    weaving built from the image subspaces {E W_i} with unchanged
    weights. Requires E symmetric and E^T E to map every member
    subspace into itself; the residual is reported, and is tiny on the
    class of diagonal positive operators with coordinate subspaces.
    """
    if family.kind != FUSION:
        raise WrongKind("conjugation check applies to fusion families")
    if family.m != 2:
        raise IndexMismatch("conjugation check requires exactly two systems")
    e = op.matrix
    if float(np.abs(e - e.T).max()) > 1e-9:
        raise NotSelfAdjoint("operator is not symmetric within 1e-9")
    ete = e.T @ e
    scale = 1.0 + float(np.abs(ete).max())
    for system in family.systems:
        for sub in system.subspaces:
            if sub.rank == 0:
                continue
            image = ete @ sub.basis
            resid = image - sub.basis @ (sub.basis.T @ image)
            if float(np.abs(resid).max()) > invariance_tol * scale:
                raise InvarianceViolated(
                    "E^T E does not keep every member subspace invariant"
                )

    original = weave(family, p)
    s_sigma = fusion_frame_operator(original)

    image_systems = []
    for system in family.systems:
        subs = []
        for sub in system.subspaces:
            if sub.rank == 0:
                subs.append(sub)
                continue
            basis, _ = orthonormalize(list((e @ sub.basis).T))
            subs.append(Subspace(family.dim, basis))
        image_systems.append(FusionFrame(family.dim, tuple(subs), system.weights))
    image_family = WovenFamily.fusion(tuple(image_systems))
    s_image = fusion_frame_operator(weave(image_family, p))

    conjugated = e @ s_sigma @ op.inv
    return float(np.abs(s_image - conjugated).max())


def subspace_intersection(
    w: Subspace, k: Subspace, tol: float = _INTERSECT_TOL
) -> Subspace:
    """Numerical intersection of two subspaces.

    Null directions of the stacked system [B_w | -B_k] (detected on its
    Gram matrix, singular values at most ``tol``) give the coefficients
    of shared vectors.
    """
    if w.dim != k.dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if w.rank == 0 or k.rank == 0:
        return Subspace(w.dim, np.zeros((w.dim, 0)))
    stacked = np.hstack([w.basis, -k.basis])
    gram = stacked.T @ stacked
    spec = sym_eig(gram)
    null_mask = spec.eigenvalues <= tol * tol
    if not null_mask.any():
        return Subspace(w.dim, np.zeros((w.dim, 0)))
    coeffs = spec.eigenvectors[:, null_mask]
    vectors = [w.basis @ coeffs[: w.rank, j] for j in range(coeffs.shape[1])]
    basis, _ = orthonormalize(vectors)
    return Subspace(w.dim, basis)


def intersect_family(
    family: WovenFamily, k: Subspace, tol: float = _INTERSECT_TOL
) -> WovenFamily:
    """Member-wise intersection with ``k``; trivial intersections stay as
    zero-dimensional markers so index bookkeeping survives."""
    if family.kind != FUSION:
        raise WrongKind("intersection applies to fusion families")
    if k.rank == 0:
        raise EmptyInput("intersection target is the zero subspace")
    new_systems = []
    any_nontrivial = False
    for system in family.systems:
        subs = tuple(
            subspace_intersection(sub, k, tol) for sub in system.subspaces
        )
        if any(s.rank for s in subs):
            any_nontrivial = True
        new_systems.append(FusionFrame(family.dim, subs, system.weights))
    if not any_nontrivial:
        raise EmptyIntersection("every member meets the target trivially")
    return WovenFamily.fusion(tuple(new_systems))


@dataclass(frozen=True)
class IntersectionReport:
    """Sampled check of weaving sums against the original universal bounds
    for inputs inside the intersection target."""

    projector_pattern_holds: bool
    max_lower_violation: float
    max_upper_violation: float
    samples: int
    seed: int


def intersection_weaving_report(
    family: WovenFamily,
    k: Subspace,
    samples: int = 200,
    seed: int = 0,
    tol: float = _INTERSECT_TOL,
) -> IntersectionReport:
    """Evaluate, for random unit vectors of ``k``, how the intersected
    family's weaving sums sit against the original universal interval.

    ``projector_pattern_holds`` records whether P_W P_K equals the
    projector of the computed intersection for every member (the
    commuting case). Violations are reported, never asserted.
    """
    base = woven_bounds_exhaustive(family)
    intersected = intersect_family(family, k, tol)

    pattern = True
    pk = k.projector()
    for orig_sys, new_sys in zip(family.systems, intersected.systems):
        for orig_sub, new_sub in zip(orig_sys.subspaces, new_sys.subspaces):
            composed = orig_sub.projector() @ pk
            if float(np.abs(composed - new_sub.projector()).max()) > 1e-8:
                pattern = False

    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal((samples, k.rank))
    coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
    vectors = coeffs @ k.basis.T

    stacks = contribution_stacks(intersected)
    n, m = intersected.n, intersected.m
    worst_low = -np.inf
    worst_high = -np.inf
    for assignment in itertools.product(range(m), repeat=n):
        op = stacks[np.arange(n), list(assignment)].sum(axis=0)
        sums = np.einsum("sd,de,se->s", vectors, op, vectors)
        worst_low = max(worst_low, float((base.universal_lower - sums).max()))
        worst_high = max(worst_high, float((sums - base.universal_upper).max()))
    return IntersectionReport(
        projector_pattern_holds=pattern,
        max_lower_violation=worst_low,
        max_upper_violation=worst_high,
        samples=samples,
        seed=seed,
    )


@dataclass(frozen=True)
class LocalSystem:
    """Per-index local vector systems spanning the member subspaces.

    ``blocks[i]`` holds the local vectors at index i as rows (possibly
    none), ``bases[i]`` an orthonormal basis of their span, and
    ``local_bounds[i]`` the optimal bounds of the local system as a
    frame for its span, or None for a trivial span.
    """

    dim: int
    blocks: tuple[np.ndarray, ...]
    weights: np.ndarray
    bases: tuple[np.ndarray, ...]
    local_bounds: tuple[tuple[float, float] | None, ...]

    @classmethod
    def build(cls, dim: int, vector_lists, weights) -> "LocalSystem":
        w = np.asarray(weights, dtype=float).ravel()
        lists = [np.array([np.asarray(v, float) for v in lst]) for lst in vector_lists]
        blocks = []
        bases = []
        bounds: list[tuple[float, float] | None] = []
        for arr in lists:
            if arr.size == 0:
                arr = arr.reshape(0, dim)
            if arr.ndim != 2 or arr.shape[1] != dim:
                raise DimensionMismatch("local vectors must have the ambient dim")
            blocks.append(arr)
            nonzero = arr[np.linalg.norm(arr, axis=1) > 0] if arr.shape[0] else arr
            if nonzero.shape[0] == 0:
                bases.append(np.zeros((dim, 0)))
                bounds.append(None)
                continue
            basis, rank = orthonormalize(list(nonzero))
            bases.append(basis)
            coords = arr @ basis
            spec = sym_eig(coords.T @ coords)
            bounds.append((spec.smallest, spec.largest))
        if w.size != len(blocks):
            raise DimensionMismatch("one weight per index required")
        return cls(dim, tuple(blocks), w, tuple(bases), tuple(bounds))

    @property
    def size(self) -> int:
        return len(self.blocks)

    def bound_floor(self) -> float:
        vals = [b[0] for b in self.local_bounds if b is not None]
        if not vals:
            raise EmptyInput("no nontrivial local system present")
        return min(vals)

    def bound_ceiling(self) -> float:
        vals = [b[1] for b in self.local_bounds if b is not None]
        if not vals:
            raise EmptyInput("no nontrivial local system present")
        return max(vals)

    def induced_fusion_frame(self) -> FusionFrame:
        subs = tuple(Subspace(self.dim, b) for b in self.bases)
        return FusionFrame(self.dim, subs, self.weights)


def flatten_local_system(
    system: LocalSystem,
) -> tuple[DiscreteFrame, tuple[tuple[int, int], ...]]:
    """Single weighted frame over the doubly indexed set, plus the map
    from (index, local position) to flat position."""
    rows = []
    index_map = []
    for i, (block, w) in enumerate(zip(system.blocks, system.weights)):
        for j in range(block.shape[0]):
            rows.append(w * block[j])
            index_map.append((i, j))
    if not rows:
        raise EmptyInput("local system has no vectors at all")
    return DiscreteFrame(system.dim, np.array(rows)), tuple(index_map)


def _blocked_vector_stacks(lf: LocalSystem, lg: LocalSystem) -> np.ndarray:
    n, d = lf.size, lf.dim
    stacks = np.zeros((n, 2, d, d))
    for i in range(n):
        fb = lf.blocks[i]
        gb = lg.blocks[i]
        wf = lf.weights[i]
        wg = lg.weights[i]
        if fb.shape[0]:
            stacks[i, 0] = (wf * wf) * (fb.T @ fb)
        if gb.shape[0]:
            stacks[i, 1] = (wg * wg) * (gb.T @ gb)
    return stacks


def _blocked_orthonormal_stacks(lf: LocalSystem, lg: LocalSystem) -> np.ndarray:
    n, d = lf.size, lf.dim
    stacks = np.zeros((n, 2, d, d))
    for i in range(n):
        wf = lf.weights[i]
        wg = lg.weights[i]
        if lf.bases[i].shape[1]:
            stacks[i, 0] = (wf * wf) * (lf.bases[i] @ lf.bases[i].T)
        if lg.bases[i].shape[1]:
            stacks[i, 1] = (wg * wg) * (lg.bases[i] @ lg.bases[i].T)
    return stacks


@dataclass(frozen=True)
class EquivalenceReport:
    """Three routes to the same woven verdict and the bound chain tying
    the vector-level and fusion-level universal lower bounds together."""

    vector_report: WovenReport
    fusion_report: WovenReport
    orthonormal_report: WovenReport
    verdicts: tuple[bool, bool, bool]
    verdicts_agree: bool
    lower_floor: float
    upper_ceiling: float
    chain_ok: bool


def local_global_equivalence_report(
    lf: LocalSystem, lg: LocalSystem, frame_tol: float = FRAME_TOL
) -> EquivalenceReport:
    """Compare the woven verdicts of (a) the flattened weighted vector
    systems, (b) the induced weighted fusion families, and (c) the
    orthonormalized local systems; partitions act on the shared outer
    index, dragging whole local blocks.

    The verdicts agree, and with A the smallest local lower bound and B
    the largest local upper bound across both systems, the universal
    lower bounds satisfy L_vec >= A * L_fus and L_fus >= L_vec / B.
    """
    if lf.size != lg.size or lf.dim != lg.dim:
        raise IndexMismatch("local systems must share index set and dim")

    vector_report = woven_bounds_from_contributions(
        _blocked_vector_stacks(lf, lg), frame_tol
    )
    fusion_family = WovenFamily.fusion(
        (lf.induced_fusion_frame(), lg.induced_fusion_frame())
    )
    fusion_report = woven_bounds_exhaustive(fusion_family, frame_tol)
    orthonormal_report = woven_bounds_from_contributions(
        _blocked_orthonormal_stacks(lf, lg), frame_tol
    )

    verdicts = (
        vector_report.is_woven,
        fusion_report.is_woven,
        orthonormal_report.is_woven,
    )
    floor = min(lf.bound_floor(), lg.bound_floor())
    ceiling = max(lf.bound_ceiling(), lg.bound_ceiling())
    l_vec = vector_report.universal_lower
    l_fus = fusion_report.universal_lower
    chain_ok = (
        l_vec >= floor * l_fus - 1e-9 and l_fus >= l_vec / ceiling - 1e-9
    )
    return EquivalenceReport(
        vector_report=vector_report,
        fusion_report=fusion_report,
        orthonormal_report=orthonormal_report,
        verdicts=verdicts,
        verdicts_agree=len(set(verdicts)) == 1,
        lower_floor=floor,
        upper_ceiling=ceiling,
        chain_ok=chain_ok,
    )


@dataclass(frozen=True)
class RemovalReport:
    """Outcome of removing an index subset from a two-system fusion family.

    When the removed indices contribute at most ``partial_upper`` to the
    first system and that stays below the family's universal lower bound,
    the restricted family keeps a woven interval inside
    [universal_lower - partial_upper, universal_upper].
    """

    removed: tuple[int, ...]
    partial_upper: float
    universal_lower: float
    universal_upper: float
    hypothesis_met: bool
    restricted_lower: float | None
    restricted_upper: float | None
    containment_ok: bool | None
    restricted_members_are_fusion_frames: bool | None


def remove_subset_check(
    family: WovenFamily, removed, frame_tol: float = FRAME_TOL
) -> RemovalReport:
    """Check the index-removal bound for a two-system fusion family."""
    if family.kind != FUSION:
        raise WrongKind("removal check applies to fusion families")
    if family.m != 2:
        raise IndexMismatch("removal check requires exactly two systems")
    rem = tuple(sorted(set(int(i) for i in removed)))
    for i in rem:
        if not 0 <= i < family.n:
            raise IndexMismatch(f"index {i} outside 0..{family.n - 1}")
    if len(rem) >= family.n:
        raise IndexMismatch("cannot remove every index")

    first = family.systems[0]
    partial = np.zeros((family.dim, family.dim))
    for i in rem:
        sub = first.subspaces[i]
        w = first.weights[i]
        if sub.rank:
            partial += (w * w) * (sub.basis @ sub.basis.T)
    partial_upper = sym_eig(partial).largest

    base = woven_bounds_exhaustive(family, frame_tol)
    hypothesis_met = partial_upper < base.universal_lower
    if not hypothesis_met:
        return RemovalReport(
            removed=rem,
            partial_upper=partial_upper,
            universal_lower=base.universal_lower,
            universal_upper=base.universal_upper,
            hypothesis_met=False,
            restricted_lower=None,
            restricted_upper=None,
            containment_ok=None,
            restricted_members_are_fusion_frames=None,
        )

    keep = [i for i in range(family.n) if i not in rem]
    restricted = family.restrict(keep)
    sub_report = woven_bounds_exhaustive(restricted, frame_tol)
    containment = (
        sub_report.universal_lower >= base.universal_lower - partial_upper - 1e-9
        and sub_report.universal_upper <= base.universal_upper + 1e-9
    )
    members_ok = all(
        fusion_bounds(system, frame_tol).is_fusion_frame
        for system in restricted.systems
    )
    return RemovalReport(
        removed=rem,
        partial_upper=partial_upper,
        universal_lower=base.universal_lower,
        universal_upper=base.universal_upper,
        hypothesis_met=True,
        restricted_lower=sub_report.universal_lower,
        restricted_upper=sub_report.universal_upper,
        containment_ok=containment,
        restricted_members_are_fusion_frames=members_ok,
    )
