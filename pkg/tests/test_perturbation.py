import numpy as np
import pytest

from wovenframes import (
    FusionFrame,
    Subspace,
    fusion_bounds,
    op_perturbation_check,
    proj_perturbation_check,
    pw_check,
    woven_bounds_exhaustive,
)
from wovenframes.errors import ConstantOutOfRange, IndexMismatch, WeightMismatch
from wovenframes.weaving import WovenFamily

from helpers import (
    basis_vec,
    complement_planes,
    coordinate_planes,
    inplane_rotated_planes,
    tilted_planes,
)


def exhaustive_interval(w, v):
    report = woven_bounds_exhaustive(WovenFamily.fusion((w, v)))
    return report.universal_lower, report.universal_upper


def assert_prediction_contains(cert, w, v):
    lo, hi = exhaustive_interval(w, v)
    assert lo >= cert.predicted_lower - 1e-9
    assert hi <= cert.predicted_upper + 1e-9


class TestIdenticalFamilies:
    def test_pw(self):
        w = coordinate_planes()
        cert = pw_check(w, w, 0.01, 0.01, 0.005)
        assert cert.hypothesis_holds
        assert cert.inequality_violation <= 0.0
        assert cert.predicted_lower == pytest.approx(0.5)
        assert cert.predicted_upper == pytest.approx(2.0)
        assert_prediction_contains(cert, w, w)

    def test_op(self):
        w = coordinate_planes()
        cert = op_perturbation_check(w, w, 0.01, 0.01, 0.01)
        assert cert.hypothesis_holds
        a_w = fusion_bounds(w).lower
        b_w = fusion_bounds(w).upper
        expected_gate = 0.01 * b_w + 0.01 * b_w + 0.01 * np.sqrt(b_w)
        assert cert.predicted_lower == pytest.approx(a_w - expected_gate)
        assert cert.predicted_upper == pytest.approx(a_w + expected_gate)
        assert_prediction_contains(cert, w, w)

    def test_proj(self):
        w = coordinate_planes()
        cert = proj_perturbation_check(w, w, 0.5)
        assert cert.hypothesis_holds
        a_w = fusion_bounds(w).lower
        assert cert.predicted_lower == pytest.approx(2.0 * a_w / 2.0)
        assert_prediction_contains(cert, w, w)

    def test_proj_squared_variant(self):
        w = coordinate_planes()
        cert = proj_perturbation_check(w, w, 0.5, squared=True)
        assert cert.hypothesis_holds
        assert cert.inequality_violation <= 0.0


class TestRotatedPlanes:
    """Bases rotated inside each plane: the subspaces are unchanged, so
    every checker sees a genuine (if degenerate) perturbation."""

    def test_all_three_hold_with_containment(self):
        w = coordinate_planes()
        v = inplane_rotated_planes(1e-3)
        pw_cert = pw_check(w, v, 0.05, 0.05, 0.01)
        op_cert = op_perturbation_check(w, v, 0.05, 0.05, 0.05)
        proj_cert = proj_perturbation_check(w, v, 0.5)
        for cert in (pw_cert, op_cert, proj_cert):
            assert cert.hypothesis_holds
            assert_prediction_contains(cert, w, v)


class TestTiltedPlanes:
    """Planes moved by a principal angle of 1e-3: only the synthesis-level
    condition, with its additive slack term, genuinely survives."""

    def test_pw_holds_with_containment(self):
        w = coordinate_planes()
        v = tilted_planes(1e-3)
        cert = pw_check(w, v, 0.05, 0.05, 0.01)
        assert cert.hypothesis_holds
        assert_prediction_contains(cert, w, v)

    def test_op_detects_orthogonal_directions(self):
        # any vector orthogonal to a member of the first family but not to
        # its moved counterpart violates the subsetwise inequality
        w = coordinate_planes()
        v = tilted_planes(1e-3)
        cert = op_perturbation_check(w, v, 0.05, 0.05, 0.05)
        assert not cert.hypothesis_holds
        assert cert.inequality_violation > 0.0

    def test_proj_detects_orthogonal_directions(self):
        w = coordinate_planes()
        v = tilted_planes(1e-3)
        cert = proj_perturbation_check(w, v, 0.1)
        assert not cert.hypothesis_holds
        assert cert.inequality_violation > 0.0


class TestComplementFamilies:
    def test_all_three_fail(self):
        w = coordinate_planes()
        v = complement_planes()
        assert pw_check(w, v, 0.05, 0.05, 0.01).max_violation > 0.0
        assert op_perturbation_check(w, v, 0.05, 0.05, 0.05).max_violation > 0.0
        assert proj_perturbation_check(w, v, 0.01).max_violation > 0.0

    def test_failures_are_reported_not_raised(self):
        w = coordinate_planes()
        v = complement_planes()
        cert = pw_check(w, v, 0.05, 0.05, 0.01)
        assert not cert.hypothesis_holds
        assert cert.max_violation == pytest.approx(cert.inequality_violation)


class TestGates:
    def test_gate_failure_tight_frame(self):
        w = coordinate_planes()
        cert = op_perturbation_check(w, w, 0.01, 0.01, 0.99)
        assert cert.gate_margin > 0.0
        assert not cert.hypothesis_holds
        assert cert.inequality_violation <= 0.0

    def test_pw_gate_scales_with_lower_bound(self):
        # weights 0.1 shrink the lower bound, inflating the gate factor
        base = coordinate_planes()
        w = FusionFrame(4, base.subspaces, 0.1 * np.ones(2))
        cert = pw_check(w, w, 0.3, 0.3, 0.3)
        assert cert.gate_margin > 0.0
        assert not cert.hypothesis_holds


class TestSamplingBehavior:
    def test_monotone_in_constants(self):
        w = coordinate_planes()
        v = tilted_planes(1e-3)
        small = pw_check(w, v, 0.01, 0.01, 0.01)
        large = pw_check(w, v, 0.05, 0.05, 0.05)
        assert large.inequality_violation <= small.inequality_violation + 1e-12
        assert small.hypothesis_holds  # already holds, stays holding
        assert large.hypothesis_holds

    def test_stability_on_fresh_batches(self):
        pairs = [
            (coordinate_planes(), coordinate_planes()),
            (coordinate_planes(), inplane_rotated_planes(1e-3)),
            (coordinate_planes(), tilted_planes(1e-3)),
        ]
        for w, v in pairs:
            base = pw_check(w, v, 0.05, 0.05, 0.01, samples=1000, seed=0)
            if not base.hypothesis_holds:
                continue
            again = pw_check(w, v, 0.05, 0.05, 0.01, samples=10000, seed=99)
            assert again.max_violation <= 1e-7

    def test_deterministic_for_seed(self):
        w = coordinate_planes()
        v = tilted_planes(1e-3)
        a = pw_check(w, v, 0.05, 0.05, 0.01, samples=200, seed=5)
        b = pw_check(w, v, 0.05, 0.05, 0.01, samples=200, seed=5)
        assert a == b

    def test_subset_sampling_above_enumeration_cap(self):
        # 2^13 index subsets exceed the enumeration limit; the sampled
        # path must still accept an identical pair
        n, dim = 13, 3
        subs = tuple(
            Subspace.from_spanning(dim, [basis_vec(dim, i % dim)]) for i in range(n)
        )
        w = FusionFrame(dim, subs, np.ones(n))
        cert = op_perturbation_check(w, w, 0.01, 0.01, 0.01, samples=20, seed=2)
        assert cert.hypothesis_holds
        assert cert.inequality_violation <= 0.0


class TestValidation:
    def test_constant_ranges(self):
        w = coordinate_planes()
        with pytest.raises(ConstantOutOfRange):
            pw_check(w, w, 1.0, 0.0, 0.0)
        with pytest.raises(ConstantOutOfRange):
            op_perturbation_check(w, w, -0.1, 0.0, 0.0)
        with pytest.raises(ConstantOutOfRange):
            proj_perturbation_check(w, w, 0.0)

    def test_index_mismatch(self):
        w = coordinate_planes()
        sub = Subspace.from_spanning(4, [basis_vec(4, 0)])
        v = FusionFrame(4, (sub,), np.ones(1))
        with pytest.raises(IndexMismatch):
            pw_check(w, v, 0.01, 0.01, 0.01)

    def test_weight_mismatch(self):
        w = coordinate_planes()
        v = FusionFrame(4, w.subspaces, np.array([1.0, 2.0]))
        with pytest.raises(WeightMismatch):
            proj_perturbation_check(w, v, 0.5)
