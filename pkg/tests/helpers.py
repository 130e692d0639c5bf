"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from wovenframes import DiscreteFrame, FusionFrame, Subspace, WovenFamily


def eig2(matrix) -> tuple[float, float]:
    """Closed-form eigenvalues of a symmetric 2x2 matrix (ascending)."""
    (a, b), (_, d) = np.asarray(matrix, dtype=float)
    half_trace = (a + d) / 2.0
    disc = math.sqrt(max(half_trace * half_trace - (a * d - b * b), 0.0))
    return half_trace - disc, half_trace + disc


def basis_vec(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim)
    v[i] = 1.0
    return v


def ex3_2_frames() -> tuple[DiscreteFrame, DiscreteFrame]:
    f = DiscreteFrame(2, np.array([[0.0, 2.0], [3.0, 0.0], [2.0, 3.0]]))
    g = DiscreteFrame(2, np.array([[1.0, 0.0], [0.0, 1.0], [3.0, 1.0]]))
    return f, g


def coordinate_planes(dim: int = 4) -> FusionFrame:
    """R^4 split into the (e1,e2) and (e3,e4) planes, unit weights."""
    p1 = Subspace.from_spanning(dim, [basis_vec(dim, 0), basis_vec(dim, 1)])
    p2 = Subspace.from_spanning(dim, [basis_vec(dim, 2), basis_vec(dim, 3)])
    return FusionFrame(dim, (p1, p2), np.ones(2))


def inplane_rotated_planes(theta: float, dim: int = 4) -> FusionFrame:
    """Same planes as coordinate_planes, bases rotated inside each plane."""
    c, s = math.cos(theta), math.sin(theta)
    r1 = Subspace.from_spanning(
        dim,
        [
            c * basis_vec(dim, 0) + s * basis_vec(dim, 1),
            -s * basis_vec(dim, 0) + c * basis_vec(dim, 1),
        ],
    )
    r2 = Subspace.from_spanning(
        dim,
        [
            c * basis_vec(dim, 2) + s * basis_vec(dim, 3),
            -s * basis_vec(dim, 2) + c * basis_vec(dim, 3),
        ],
    )
    return FusionFrame(dim, (r1, r2), np.ones(2))


def tilted_planes(theta: float, dim: int = 4) -> FusionFrame:
    """Coordinate planes moved by a global rotation mixing (e1,e3), (e2,e4)."""
    g = np.eye(dim)
    c, s = math.cos(theta), math.sin(theta)
    g[0, 0], g[0, 2], g[2, 0], g[2, 2] = c, -s, s, c
    g[1, 1], g[1, 3], g[3, 1], g[3, 3] = c, -s, s, c
    base = coordinate_planes(dim)
    subs = tuple(
        Subspace.from_spanning(dim, list((g @ sub.basis).T))
        for sub in base.subspaces
    )
    return FusionFrame(dim, subs, np.ones(2))


def complement_planes(dim: int = 4) -> FusionFrame:
    """Each member swapped with its orthogonal complement."""
    base = coordinate_planes(dim)
    return FusionFrame(dim, (base.subspaces[1], base.subspaces[0]), np.ones(2))


def random_subspace(rng: np.random.Generator, dim: int, k: int) -> Subspace:
    vecs = rng.standard_normal((k, dim))
    return Subspace.from_spanning(dim, list(vecs))


def random_fusion_frame(
    rng: np.random.Generator, dim: int, member_dims
) -> FusionFrame:
    subs = tuple(random_subspace(rng, dim, k) for k in member_dims)
    weights = rng.uniform(0.5, 2.0, size=len(subs))
    return FusionFrame(dim, subs, weights)


def rank_deficient_fusion_frame(
    rng: np.random.Generator, dim: int, member_dims
) -> FusionFrame:
    """All members orthogonal to one fixed direction, so never a fusion frame."""
    hole = rng.standard_normal(dim)
    hole /= np.linalg.norm(hole)
    subs = []
    for k in member_dims:
        vecs = rng.standard_normal((k, dim))
        vecs -= np.outer(vecs @ hole, hole)
        subs.append(Subspace.from_spanning(dim, list(vecs)))
    weights = rng.uniform(0.5, 2.0, size=len(subs))
    return FusionFrame(dim, subs, weights)


def onto_equivalence_instances(count: int = 100, deficient: int = 20):
    """Seeded mix of generic and deliberately rank-deficient fusion frames."""
    rng = np.random.default_rng(2026)
    out = []
    for i in range(count):
        dim = int(rng.integers(2, 7))
        members = int(rng.integers(1, 5))
        member_dims = [int(rng.integers(1, dim + 1)) for _ in range(members)]
        if i < deficient:
            out.append(rank_deficient_fusion_frame(rng, dim, member_dims))
        else:
            out.append(random_fusion_frame(rng, dim, member_dims))
    return out


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def woven_pair_random(rng: np.random.Generator, dim: int, members: int) -> WovenFamily:
    """Fusion pair built to be woven: every member contains a shared full
    coordinate split, so all weavings stay fusion frames."""
    systems = []
    for _ in range(2):
        subs = []
        for i in range(members):
            extra = rng.standard_normal((1, dim))
            block = [basis_vec(dim, i % dim), extra[0]]
            subs.append(Subspace.from_spanning(dim, block))
        # last member tops up the span so every weaving covers R^dim
        subs[-1] = Subspace(dim, np.eye(dim))
        systems.append(FusionFrame(dim, tuple(subs), np.ones(members)))
    return WovenFamily.fusion(tuple(systems))
