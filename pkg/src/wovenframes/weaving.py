"""Weavings of indexed families and universal-bound searches.

A woven family holds m systems (all discrete frames or all fusion
frames) over a shared index set of size n. A partition assigns each
index to one system; the weaving takes element i from the assigned
system. Universal bounds are the min/max of the weaving operator
spectra over partitions, found exhaustively (lexicographic order over
base-m assignment strings) or by seeded sampling.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    PartitionLengthMismatch,
    TooManyPartitions,
    WrongKind,
)
from .frames import FRAME_TOL, DiscreteFrame, _is_frame
from .fusion import FusionFrame, fusion_frame_operator, is_riesz_decomposition
from .linalg import sym_eig

PARTITION_CAP = 2**22

DISCRETE = "discrete"
FUSION = "fusion"


def partition_cap() -> int:
    """Enumeration cap; WOVEN_MAX_PARTITIONS overrides the default 2^22."""
    raw = os.environ.get("WOVEN_MAX_PARTITIONS")
    if raw is None:
        return PARTITION_CAP
    return int(raw)


@dataclass(frozen=True)
class Partition:
    """Assignment of each index to one of the m systems (0-based)."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))

    @classmethod
    def pure(cls, n: int, system: int) -> "Partition":
        return cls(tuple([system] * n))

    @classmethod
    def from_subset(cls, n: int, second_indices) -> "Partition":
        """Two-system partition: listed indices go to system 1, rest to 0."""
        chosen = set(int(i) for i in second_indices)
        return cls(tuple(1 if i in chosen else 0 for i in range(n)))

    def blocks(self, m: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(m)]
        for i, a in enumerate(self.assignment):
            out[a].append(i)
        return out


@dataclass(frozen=True)
class WovenFamily:
    """m systems sharing an index set of size n and ambient dimension."""

    kind: str
    systems: tuple

    def __post_init__(self) -> None:
        systems = tuple(self.systems)
        if len(systems) < 2:
            raise DimensionMismatch("a woven family needs at least two systems")
        if self.kind not in (DISCRETE, FUSION):
            raise WrongKind(f"unknown family kind {self.kind!r}")
        sizes = {s.size for s in systems}
        dims = {s.dim for s in systems}
        if len(sizes) != 1 or len(dims) != 1:
            raise DimensionMismatch("systems must share index-set size and dim")
        object.__setattr__(self, "systems", systems)

    @classmethod
    def discrete(cls, frames) -> "WovenFamily":
        return cls(DISCRETE, tuple(frames))

    @classmethod
    def fusion(cls, fusion_frames) -> "WovenFamily":
        return cls(FUSION, tuple(fusion_frames))

    @property
    def m(self) -> int:
        return len(self.systems)

    @property
    def n(self) -> int:
        return int(self.systems[0].size)

    @property
    def dim(self) -> int:
        return int(self.systems[0].dim)

    def restrict(self, indices) -> "WovenFamily":
        idx = list(indices)
        if self.kind == DISCRETE:
            kept = tuple(
                DiscreteFrame(s.dim, s.vectors[idx]) for s in self.systems
            )
        else:
            kept = tuple(s.restrict(idx) for s in self.systems)
        return WovenFamily(self.kind, kept)


@dataclass(frozen=True)
class WovenReport:
    """Universal bounds over the examined partitions plus the extremal ones."""

    universal_lower: float
    universal_upper: float
    is_woven: bool
    worst_partition: Partition
    best_upper_partition: Partition
    method: str
    partitions_examined: int
    seed: int | None = None


def _check_partition(family: WovenFamily, p: Partition) -> None:
    if len(p.assignment) != family.n:
        raise PartitionLengthMismatch(
            f"partition length {len(p.assignment)} != index count {family.n}"
        )
    for a in p.assignment:
        if not 0 <= a < family.m:
            raise PartitionLengthMismatch(f"system index {a} out of range")


def weave(family: WovenFamily, p: Partition):
    """Mixed system taking element i from the system assigned to index i.

    Returns a DiscreteFrame or FusionFrame matching the family kind; for
    fusion families each weight travels with its subspace.
    """
    _check_partition(family, p)
    if family.kind == DISCRETE:
        rows = np.array(
            [family.systems[a].vectors[i] for i, a in enumerate(p.assignment)]
        )
        return DiscreteFrame(family.dim, rows)
    subs = tuple(
        family.systems[a].subspaces[i] for i, a in enumerate(p.assignment)
    )
    weights = np.array(
        [family.systems[a].weights[i] for i, a in enumerate(p.assignment)]
    )
    return FusionFrame(family.dim, subs, weights)


def contribution_stacks(family: WovenFamily) -> np.ndarray:
    """Per-(index, system) operator contributions, shape (n, m, d, d).

    The weaving operator of a partition is the sum over indices of the
    assigned contribution, so every bound search reduces to scans over
    these stacks.
    """
    n, m, d = family.n, family.m, family.dim
    stacks = np.zeros((n, m, d, d))
    for j, system in enumerate(family.systems):
        if family.kind == DISCRETE:
            for i in range(n):
                v = system.vectors[i]
                stacks[i, j] = np.outer(v, v)
        else:
            for i in range(n):
                sub = system.subspaces[i]
                w = system.weights[i]
                if sub.rank:
                    stacks[i, j] = (w * w) * (sub.basis @ sub.basis.T)
    return stacks


def _weaving_operator(stacks: np.ndarray, assignment) -> np.ndarray:
    n = stacks.shape[0]
    return stacks[np.arange(n), list(assignment)].sum(axis=0)


def _scan(stacks: np.ndarray, assignments):
    lo_val = np.inf
    hi_val = -np.inf
    lo_part: tuple[int, ...] | None = None
    hi_part: tuple[int, ...] | None = None
    count = 0
    for assignment in assignments:
        spec = sym_eig(_weaving_operator(stacks, assignment))
        count += 1
        if spec.smallest < lo_val:
            lo_val = spec.smallest
            lo_part = tuple(assignment)
        if spec.largest > hi_val:
            hi_val = spec.largest
            hi_part = tuple(assignment)
    if lo_val < 0.0 and abs(lo_val) <= 1e-12 * max(1.0, hi_val):
        lo_val = 0.0  # roundoff of a positive semidefinite spectrum
    return lo_val, hi_val, lo_part, hi_part, count


def woven_bounds_from_contributions(
    stacks: np.ndarray,
    frame_tol: float = FRAME_TOL,
    cap: int | None = None,
) -> WovenReport:
    """Exhaustive universal bounds for explicit contribution stacks."""
    n, m = stacks.shape[0], stacks.shape[1]
    cap = partition_cap() if cap is None else cap
    total = m**n
    if total > cap:
        raise TooManyPartitions(
            f"{m}^{n} = {total} partitions exceeds the cap {cap}; "
            "use the sampled search instead"
        )
    lower, upper, lo_part, hi_part, count = _scan(
        stacks, itertools.product(range(m), repeat=n)
    )
    return WovenReport(
        universal_lower=float(lower),
        universal_upper=float(upper),
        is_woven=_is_frame(lower, upper, frame_tol),
        worst_partition=Partition(lo_part),
        best_upper_partition=Partition(hi_part),
        method="exhaustive",
        partitions_examined=count,
    )


def woven_bounds_exhaustive(
    family: WovenFamily, frame_tol: float = FRAME_TOL
) -> WovenReport:
    """Universal bounds over all m^n partitions (lexicographic order)."""
    return woven_bounds_from_contributions(contribution_stacks(family), frame_tol)


def woven_bounds_sampled(
    family: WovenFamily,
    samples: int,
    seed: int,
    frame_tol: float = FRAME_TOL,
) -> WovenReport:
    """Universal-bound estimate from sampled partitions.

    Scans the m pure partitions plus ``samples`` partitions drawn
    uniformly (with replacement) from a generator seeded with ``seed``.
    The reported lower value is an upper estimate of the true universal
    lower bound (and the upper value a lower estimate of the true upper),
    since unexamined partitions may be more extreme. Deterministic for a
    fixed seed.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    stacks = contribution_stacks(family)
    n, m = family.n, family.m
    rng = np.random.default_rng(seed)
    drawn = rng.integers(0, m, size=(samples, n))
    assignments = itertools.chain(
        (tuple([j] * n) for j in range(m)),
        (tuple(int(a) for a in row) for row in drawn),
    )
    lower, upper, lo_part, hi_part, count = _scan(stacks, assignments)
    return WovenReport(
        universal_lower=float(lower),
        universal_upper=float(upper),
        is_woven=_is_frame(lower, upper, frame_tol),
        worst_partition=Partition(lo_part),
        best_upper_partition=Partition(hi_part),
        method="sampled",
        partitions_examined=count,
        seed=seed,
    )


def weaving_bessel_bound(family: WovenFamily, p: Partition) -> float:
    """Largest eigenvalue of the weaving's (fusion) frame operator."""
    _check_partition(family, p)
    stacks = contribution_stacks(family)
    return sym_eig(_weaving_operator(stacks, p.assignment)).largest


def find_nonwoven_witness(
    family: WovenFamily, eps: float = 1e-8
) -> tuple[Partition, np.ndarray, float] | None:
    """First partition (lexicographic) whose weaving has smallest
    eigenvalue below ``eps``, with the minimizing unit vector and the
    value. None when every weaving clears the threshold."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    n, m = family.n, family.m
    cap = partition_cap()
    if m**n > cap:
        raise TooManyPartitions(
            f"{m}^{n} partitions exceeds the cap {cap}; "
            "use the sampled search instead"
        )
    stacks = contribution_stacks(family)
    for assignment in itertools.product(range(m), repeat=n):
        spec = sym_eig(_weaving_operator(stacks, assignment))
        if spec.smallest < eps:
            return (
                Partition(assignment),
                spec.eigenvectors[:, 0].copy(),
                spec.smallest,
            )
    return None


@dataclass(frozen=True)
class RieszWeavingReport:
    all_pass: bool
    failing: tuple[Partition, ...]
    partitions_examined: int


def woven_riesz_decomposition_check(family: WovenFamily) -> RieszWeavingReport:
    """Whether every weaving splits the space as a direct sum of its members.

    Fusion families only; lists the failing partitions when the verdict
    is negative.
    """
    if family.kind != FUSION:
        raise WrongKind("Riesz weaving check applies to fusion families only")
    n, m = family.n, family.m
    cap = partition_cap()
    if m**n > cap:
        raise TooManyPartitions(
            f"{m}^{n} partitions exceeds the cap {cap}"
        )
    failing: list[Partition] = []
    count = 0
    for assignment in itertools.product(range(m), repeat=n):
        p = Partition(assignment)
        count += 1
        if not is_riesz_decomposition(weave(family, p)):
            failing.append(p)
    return RieszWeavingReport(
        all_pass=not failing,
        failing=tuple(failing),
        partitions_examined=count,
    )


def member_bessel_bounds(family: WovenFamily) -> list[float]:
    """Optimal upper bound of each member system."""
    out = []
    for system in family.systems:
        if family.kind == DISCRETE:
            op = system.vectors.T @ system.vectors
        else:
            op = fusion_frame_operator(system)
        out.append(sym_eig(op).largest)
    return out
