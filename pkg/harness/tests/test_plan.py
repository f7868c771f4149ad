"""Plan validation and masked-batch construction."""

import numpy as np
import pytest

from ikit_harness import (
    MaskingPlan,
    PlanError,
    build_masked_batch,
    load_plan,
    plan_from_doc,
    plan_to_doc,
    save_plan,
)


def _plan(**overrides):
    kwargs = dict(
        x=np.array([0.5, -1.0, 2.0, 4.0]),
        baseline=np.array([0.0, 0.0, -9.0, 0.5]),
        variable_map=((0,), (1,), (2,)),
        scalarizer="identity",
    )
    kwargs.update(overrides)
    return MaskingPlan(**kwargs)


class TestValidation:
    def test_baseline_length_mismatch(self):
        with pytest.raises(PlanError, match="baseline length 3"):
            _plan(baseline=np.zeros(3))

    def test_position_out_of_range(self):
        with pytest.raises(PlanError, match="position 9"):
            _plan(variable_map=((0,), (9,)))

    def test_overlapping_groups(self):
        with pytest.raises(PlanError, match="claimed by more than one"):
            _plan(variable_map=((0, 1), (1,)))

    def test_empty_group(self):
        with pytest.raises(PlanError, match="controls no input positions"):
            _plan(variable_map=((0,), ()))

    def test_empty_scalarizer(self):
        with pytest.raises(PlanError, match="scalarizer"):
            _plan(scalarizer="")

    def test_non_flat_sample(self):
        with pytest.raises(PlanError, match="flat vector"):
            _plan(x=np.zeros((2, 2)), baseline=np.zeros((2, 2)))

    def test_fields_frozen(self):
        plan = _plan()
        assert plan.n == 3
        with pytest.raises(ValueError):
            plan.x[0] = 99.0


class TestMaskedBatch:
    def test_full_mask_is_the_sample(self):
        plan = _plan()
        np.testing.assert_array_equal(build_masked_batch(plan, [7])[0], plan.x)

    def test_empty_mask_baselines_mapped_positions_only(self):
        plan = _plan()
        row = build_masked_batch(plan, [0])[0]
        np.testing.assert_array_equal(row[:3], plan.baseline[:3])
        assert row[3] == plan.x[3]  # unmapped position is static context

    def test_single_player_kept(self):
        plan = _plan()
        row = build_masked_batch(plan, [0b001])[0]
        assert row[0] == plan.x[0]
        assert row[1] == plan.baseline[1]
        assert row[2] == plan.baseline[2]

    def test_grouped_positions_move_together(self):
        plan = MaskingPlan(
            x=np.arange(5.0),
            baseline=np.full(5, -1.0),
            variable_map=((0, 3), (1,)),
            scalarizer="sum",
        )
        row = build_masked_batch(plan, [0b10])[0]
        np.testing.assert_array_equal(row, [-1.0, 1.0, 2.0, -1.0, 4.0])

    def test_mask_out_of_range(self):
        with pytest.raises(PlanError, match="mask 8"):
            build_masked_batch(_plan(), [8])

    def test_batch_shape(self):
        batch = build_masked_batch(_plan(), range(8))
        assert batch.shape == (8, 4)
        assert batch.dtype == np.float64


class TestSerialization:
    def test_doc_roundtrip(self):
        plan = _plan()
        doc = plan_to_doc(plan)
        assert doc["format"] == "masking-plan"
        clone = plan_from_doc(doc)
        np.testing.assert_array_equal(clone.x, plan.x)
        np.testing.assert_array_equal(clone.baseline, plan.baseline)
        assert clone.variable_map == plan.variable_map
        assert clone.digest() == plan.digest()

    def test_file_roundtrip(self, tmp_path):
        plan = _plan(scalarizer="index:2")
        path = tmp_path / "plan.json"
        save_plan(plan, path)
        loaded = load_plan(path)
        assert loaded.digest() == plan.digest()
        assert loaded.scalarizer == "index:2"

    def test_wrong_format_rejected(self):
        with pytest.raises(PlanError, match="not a masking plan"):
            plan_from_doc({"format": "vtable"})

    def test_digest_tracks_content(self):
        assert _plan().digest() != _plan(scalarizer="sum").digest()
