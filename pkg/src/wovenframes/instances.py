"""Canonical reference instances and their expected quantities.

Each builder returns a ReferenceInstance bundling the constructed family,
a map of named expected values, and notes about quirks of the
construction. Expected values are tagged ``reference`` (externally given
values the instance must reproduce; the reproduction command gates on
these) or ``computed`` (values the toolkit derives itself and the test
suite re-derives with independent oracles).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooSmall, OddDimension, ToolkitError
from .frames import DiscreteFrame, frame_operator, optimal_bounds
from .fusion import FusionFrame, Subspace, fusion_bounds
from .transforms import (
    LocalSystem,
    flatten_local_system,
    local_global_equivalence_report,
)
from .weaving import (
    Partition,
    WovenFamily,
    find_nonwoven_witness,
    weave,
    woven_bounds_exhaustive,
    woven_riesz_decomposition_check,
)

REFERENCE = "reference"
COMPUTED = "computed"

INSTANCE_IDS = ("ex3_2", "ex4_1", "ex4_2", "ex5_4")

NOTE_UPPER_IS_MAX = (
    "universal upper bound is the maximum weaving upper bound; "
    "a minimum over weavings would not dominate every weaving"
)
NOTE_SECOND_FAMILY_SCALING = (
    "scaling a spanning set does not change the subspace, so the scaled "
    "family normalizes to unit bounds; a tight bound equal to the scale "
    "factor would require the scale to enter as a weight"
)
NOTE_SHIFTED_INTERVAL = (
    "the shifted-copy system keeps every weaving sum between one and two "
    "times the squared norm; the reported interval is [1, 2]"
)


@dataclass(frozen=True)
class Expected:
    value: object
    source: str


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    source: str
    ok: bool
    expected: object
    actual: object


@dataclass(frozen=True)
class ReferenceInstance:
    id: str
    payload: WovenFamily
    truncation_dim: int | None
    expected: dict[str, Expected]
    local_systems: tuple[LocalSystem, LocalSystem] | None = None
    notes: tuple[str, ...] = field(default=())


def _basis_vector(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim)
    v[index] = 1.0
    return v


def build_ex3_2() -> ReferenceInstance:
    """Two three-vector frames in the plane whose weavings are all frames.

    The first system is {2e2, 3e1, 2e1+3e2}, the second {e1, e2, 3e1+e2}.
    Valid (not optimal) bounds are (4, 22) and (1, 19); mixing the first
    two vectors of one with the third of the other keeps valid bounds
    (4, 27), and all eight weavings stay frames.
    """
    f = DiscreteFrame(2, np.array([[0.0, 2.0], [3.0, 0.0], [2.0, 3.0]]))
    g = DiscreteFrame(2, np.array([[1.0, 0.0], [0.0, 1.0], [3.0, 1.0]]))
    family = WovenFamily.discrete((f, g))
    expected = {
        "first_valid_bounds": Expected((4.0, 22.0), REFERENCE),
        "second_valid_bounds": Expected((1.0, 19.0), REFERENCE),
        "mixed_12_weaving_valid_bounds": Expected((4.0, 27.0), REFERENCE),
        "woven": Expected(True, REFERENCE),
        "partition_count": Expected(8, REFERENCE),
        "first_optimal_bounds": Expected((7.0, 19.0), COMPUTED),
        "second_optimal_bounds": Expected((1.0, 11.0), COMPUTED),
        "first_frame_operator": Expected(
            ((13.0, 6.0), (6.0, 13.0)), COMPUTED
        ),
        "mixed_12_weaving_optimal_bounds": Expected(
            ((23.0 - math.sqrt(205.0)) / 2.0, (23.0 + math.sqrt(205.0)) / 2.0),
            COMPUTED,
        ),
    }
    return ReferenceInstance(
        id="ex3_2",
        payload=family,
        truncation_dim=None,
        expected=expected,
        notes=(NOTE_UPPER_IS_MAX,),
    )


def _shift_local_lists(dim: int) -> tuple[list, list]:
    firsts = [[_basis_vector(dim, i)] for i in range(dim)]
    seconds = []
    for i in range(dim):
        block = [_basis_vector(dim, i)]
        if i + 1 < dim:
            block.append(_basis_vector(dim, i + 1))
        seconds.append(block)
    return firsts, seconds


def build_ex4_1(dim: int = 6) -> ReferenceInstance:
    """Coordinate system against its one-step shifted enrichment.

    At index i the first local system holds e_i alone; the second holds
    e_i and e_{i+1} (the companion vector is dropped at the boundary).
    The flattened first system is the standard basis, the flattened
    second has bounds (1, 2), every weaving stays a frame with bounds
    inside [1, 2], and the induced weighted subspace families are woven.
    """
    if dim < 3:
        raise DimensionTooSmall("need dim >= 3")
    f_lists, g_lists = _shift_local_lists(dim)
    ones = np.ones(dim)
    lf = LocalSystem.build(dim, f_lists, ones)
    lg = LocalSystem.build(dim, g_lists, ones)
    family = WovenFamily.fusion(
        (lf.induced_fusion_frame(), lg.induced_fusion_frame())
    )
    expected = {
        "first_flat_bounds": Expected((1.0, 1.0), REFERENCE),
        "second_flat_bounds": Expected((1.0, 2.0), REFERENCE),
        "woven": Expected(True, REFERENCE),
        "universal_interval_within": Expected((1.0, 2.0), REFERENCE),
        "weighted_subspace_family_woven": Expected(True, REFERENCE),
        "second_flat_count": Expected(2 * dim - 1, COMPUTED),
    }
    return ReferenceInstance(
        id="ex4_1",
        payload=family,
        truncation_dim=dim,
        expected=expected,
        local_systems=(lf, lg),
        notes=(NOTE_SHIFTED_INTERVAL,),
    )


def build_ex4_2(dim: int = 6, first_block_absent: bool = False) -> ReferenceInstance:
    """Same pair as ex4_1 except the second system contributes nothing at
    the first index, which destroys wovenness.

    Sending every index except the first to the first system and the
    first index to the second leaves the first coordinate uncovered, so
    that weaving has smallest bound zero with witness e_1. By default the
    missing block is a zero contribution (one zero vector keeps the
    slot); ``first_block_absent=True`` drops the slot entirely.
    """
    if dim < 3:
        raise DimensionTooSmall("need dim >= 3")
    f_lists, g_lists = _shift_local_lists(dim)
    if first_block_absent:
        g_lists[0] = []
    else:
        g_lists[0] = [np.zeros(dim)]
    ones = np.ones(dim)
    lf = LocalSystem.build(dim, f_lists, ones)
    lg = LocalSystem.build(dim, g_lists, ones)
    family = WovenFamily.fusion(
        (lf.induced_fusion_frame(), lg.induced_fusion_frame())
    )
    witness_assignment = tuple([1] + [0] * (dim - 1))
    expected = {
        "nonwoven": Expected(True, REFERENCE),
        "witness_assignment": Expected(witness_assignment, REFERENCE),
        "witness_value_at_most": Expected(1e-12, REFERENCE),
        "witness_vector_first_coordinate": Expected(True, REFERENCE),
        "equivalence_verdicts": Expected((False, False, False), REFERENCE),
        "first_flat_bounds": Expected((1.0, 1.0), COMPUTED),
    }
    return ReferenceInstance(
        id="ex4_2",
        payload=family,
        truncation_dim=dim,
        expected=expected,
        local_systems=(lf, lg),
    )


def build_ex5_4(dim: int = 6, delta: float = 1.0) -> ReferenceInstance:
    """Even/odd coordinate split woven against its scaled copy.

    The first family splits the space into the spans of the even- and
    odd-position coordinate vectors; the second spans the same pair with
    every spanning vector scaled by ``delta``, which normalization
    absorbs. All four weavings are orthonormal splittings, so the pair
    is a woven Riesz decomposition.
    """
    if dim % 2 != 0:
        raise OddDimension("need an even dimension")
    if dim < 4:
        raise DimensionTooSmall("need dim >= 4")
    if delta <= 0:
        raise ToolkitError("delta must be positive")
    even = [_basis_vector(dim, i) for i in range(1, dim, 2)]
    odd = [_basis_vector(dim, i) for i in range(0, dim, 2)]
    w1 = Subspace.from_spanning(dim, even)
    w2 = Subspace.from_spanning(dim, odd)
    v1 = Subspace.from_spanning(dim, [delta * e for e in even])
    v2 = Subspace.from_spanning(dim, [delta * e for e in odd])
    first = FusionFrame(dim, (w1, w2), np.ones(2))
    second = FusionFrame(dim, (v1, v2), np.ones(2))
    family = WovenFamily.fusion((first, second))
    expected = {
        "first_bounds": Expected((1.0, 1.0), REFERENCE),
        "second_bounds": Expected((1.0, 1.0), REFERENCE),
        "woven_riesz_decomposition": Expected(True, REFERENCE),
        "partition_count": Expected(4, COMPUTED),
    }
    return ReferenceInstance(
        id="ex5_4",
        payload=family,
        truncation_dim=dim,
        expected=expected,
        notes=(NOTE_SECOND_FAMILY_SCALING,),
    )


def build_instance(instance_id: str, dim: int = 6, delta: float = 1.0) -> ReferenceInstance:
    if instance_id == "ex3_2":
        return build_ex3_2()
    if instance_id == "ex4_1":
        return build_ex4_1(dim)
    if instance_id == "ex4_2":
        return build_ex4_2(dim)
    if instance_id == "ex5_4":
        return build_ex5_4(dim, delta)
    raise ToolkitError(f"unknown instance id {instance_id!r}")


def _pair_close(actual, expected, tol: float = 1e-9) -> bool:
    return all(abs(a - e) <= tol for a, e in zip(actual, expected))


def _pair_inside(actual, stated, tol: float = 1e-9) -> bool:
    return actual[0] >= stated[0] - tol and actual[1] <= stated[1] + tol


def _outcome(name: str, exp: Expected, ok: bool, actual) -> CheckOutcome:
    return CheckOutcome(name=name, source=exp.source, ok=bool(ok), expected=exp.value, actual=actual)


def _verify_ex3_2(inst: ReferenceInstance) -> list[CheckOutcome]:
    family = inst.payload
    f, g = family.systems
    exp = inst.expected
    out = []

    fb = optimal_bounds(f)
    gb = optimal_bounds(g)
    out.append(
        _outcome(
            "first_valid_bounds",
            exp["first_valid_bounds"],
            _pair_inside((fb.lower, fb.upper), exp["first_valid_bounds"].value),
            (fb.lower, fb.upper),
        )
    )
    out.append(
        _outcome(
            "second_valid_bounds",
            exp["second_valid_bounds"],
            _pair_inside((gb.lower, gb.upper), exp["second_valid_bounds"].value),
            (gb.lower, gb.upper),
        )
    )
    out.append(
        _outcome(
            "first_optimal_bounds",
            exp["first_optimal_bounds"],
            _pair_close((fb.lower, fb.upper), exp["first_optimal_bounds"].value),
            (fb.lower, fb.upper),
        )
    )
    out.append(
        _outcome(
            "second_optimal_bounds",
            exp["second_optimal_bounds"],
            _pair_close((gb.lower, gb.upper), exp["second_optimal_bounds"].value),
            (gb.lower, gb.upper),
        )
    )

    op = frame_operator(f)
    expected_op = np.array(exp["first_frame_operator"].value)
    out.append(
        _outcome(
            "first_frame_operator",
            exp["first_frame_operator"],
            float(np.abs(op - expected_op).max()) <= 1e-12,
            tuple(tuple(row) for row in op.tolist()),
        )
    )

    mixed = optimal_bounds(weave(family, Partition((0, 0, 1))))
    out.append(
        _outcome(
            "mixed_12_weaving_valid_bounds",
            exp["mixed_12_weaving_valid_bounds"],
            _pair_inside(
                (mixed.lower, mixed.upper),
                exp["mixed_12_weaving_valid_bounds"].value,
            ),
            (mixed.lower, mixed.upper),
        )
    )
    out.append(
        _outcome(
            "mixed_12_weaving_optimal_bounds",
            exp["mixed_12_weaving_optimal_bounds"],
            _pair_close(
                (mixed.lower, mixed.upper),
                exp["mixed_12_weaving_optimal_bounds"].value,
            ),
            (mixed.lower, mixed.upper),
        )
    )

    report = woven_bounds_exhaustive(family)
    out.append(
        _outcome("woven", exp["woven"], report.is_woven == exp["woven"].value, report.is_woven)
    )
    out.append(
        _outcome(
            "partition_count",
            exp["partition_count"],
            report.partitions_examined == exp["partition_count"].value,
            report.partitions_examined,
        )
    )
    return out


def _verify_ex4_1(inst: ReferenceInstance) -> list[CheckOutcome]:
    lf, lg = inst.local_systems
    exp = inst.expected
    out = []

    flat_f, _ = flatten_local_system(lf)
    flat_g, _ = flatten_local_system(lg)
    fb = optimal_bounds(flat_f)
    gb = optimal_bounds(flat_g)
    out.append(
        _outcome(
            "first_flat_bounds",
            exp["first_flat_bounds"],
            _pair_close((fb.lower, fb.upper), exp["first_flat_bounds"].value),
            (fb.lower, fb.upper),
        )
    )
    out.append(
        _outcome(
            "second_flat_bounds",
            exp["second_flat_bounds"],
            _pair_inside((gb.lower, gb.upper), exp["second_flat_bounds"].value)
            and _pair_close((gb.lower, gb.upper), exp["second_flat_bounds"].value),
            (gb.lower, gb.upper),
        )
    )
    out.append(
        _outcome(
            "second_flat_count",
            exp["second_flat_count"],
            flat_g.size == exp["second_flat_count"].value,
            flat_g.size,
        )
    )

    report = local_global_equivalence_report(lf, lg)
    out.append(
        _outcome(
            "woven",
            exp["woven"],
            report.vector_report.is_woven == exp["woven"].value,
            report.vector_report.is_woven,
        )
    )
    interval = (
        report.vector_report.universal_lower,
        report.vector_report.universal_upper,
    )
    out.append(
        _outcome(
            "universal_interval_within",
            exp["universal_interval_within"],
            _pair_inside(interval, exp["universal_interval_within"].value),
            interval,
        )
    )
    out.append(
        _outcome(
            "weighted_subspace_family_woven",
            exp["weighted_subspace_family_woven"],
            report.fusion_report.is_woven
            == exp["weighted_subspace_family_woven"].value
            and report.verdicts_agree,
            report.verdicts,
        )
    )
    return out


def _verify_ex4_2(inst: ReferenceInstance) -> list[CheckOutcome]:
    lf, lg = inst.local_systems
    exp = inst.expected
    out = []

    witness = find_nonwoven_witness(inst.payload, eps=1e-8)
    out.append(
        _outcome("nonwoven", exp["nonwoven"], witness is not None, witness is not None)
    )
    if witness is not None:
        partition, vector, value = witness
        out.append(
            _outcome(
                "witness_assignment",
                exp["witness_assignment"],
                partition.assignment == tuple(exp["witness_assignment"].value),
                partition.assignment,
            )
        )
        out.append(
            _outcome(
                "witness_value_at_most",
                exp["witness_value_at_most"],
                abs(value) <= exp["witness_value_at_most"].value,
                value,
            )
        )
        aligned = abs(float(vector[0])) >= 1.0 - 1e-9
        out.append(
            _outcome(
                "witness_vector_first_coordinate",
                exp["witness_vector_first_coordinate"],
                aligned,
                tuple(vector.tolist()),
            )
        )

    report = local_global_equivalence_report(lf, lg)
    out.append(
        _outcome(
            "equivalence_verdicts",
            exp["equivalence_verdicts"],
            report.verdicts == tuple(exp["equivalence_verdicts"].value),
            report.verdicts,
        )
    )

    flat_f, _ = flatten_local_system(lf)
    fb = optimal_bounds(flat_f)
    out.append(
        _outcome(
            "first_flat_bounds",
            exp["first_flat_bounds"],
            _pair_close((fb.lower, fb.upper), exp["first_flat_bounds"].value),
            (fb.lower, fb.upper),
        )
    )
    return out


def _verify_ex5_4(inst: ReferenceInstance) -> list[CheckOutcome]:
    exp = inst.expected
    first, second = inst.payload.systems
    out = []

    b1 = fusion_bounds(first)
    b2 = fusion_bounds(second)
    out.append(
        _outcome(
            "first_bounds",
            exp["first_bounds"],
            _pair_close((b1.lower, b1.upper), exp["first_bounds"].value),
            (b1.lower, b1.upper),
        )
    )
    out.append(
        _outcome(
            "second_bounds",
            exp["second_bounds"],
            _pair_close((b2.lower, b2.upper), exp["second_bounds"].value),
            (b2.lower, b2.upper),
        )
    )

    report = woven_riesz_decomposition_check(inst.payload)
    out.append(
        _outcome(
            "woven_riesz_decomposition",
            exp["woven_riesz_decomposition"],
            report.all_pass == exp["woven_riesz_decomposition"].value,
            report.all_pass,
        )
    )
    out.append(
        _outcome(
            "partition_count",
            exp["partition_count"],
            report.partitions_examined == exp["partition_count"].value,
            report.partitions_examined,
        )
    )
    return out


def verify_instance(inst: ReferenceInstance) -> list[CheckOutcome]:
    """Run every expectation of an instance and report each outcome."""
    if inst.id == "ex3_2":
        return _verify_ex3_2(inst)
    if inst.id == "ex4_1":
        return _verify_ex4_1(inst)
    if inst.id == "ex4_2":
        return _verify_ex4_2(inst)
    if inst.id == "ex5_4":
        return _verify_ex5_4(inst)
    raise ToolkitError(f"unknown instance id {inst.id!r}")
