"""AND/OR effect extraction, reconstruction laws, and record output."""

import numpy as np
import pytest

from ikit.interactions import (
    AND,
    OR,
    InteractionVector,
    and_interactions,
    and_reconstruct,
    faithfulness_error,
    interaction_records,
    interactions_to_doc,
    mixed_reconstruct,
    or_interactions,
    or_reconstruct,
    reconstruct_all,
)
from ikit.synthetic import brute_force_and, brute_force_or, random_game
from ikit.table import ValueTable


def _hand_game():
    return ValueTable(n=2, values=np.array([0.0, 1.0, 2.0, 5.0]))


class TestExtraction:
    def test_hand_checked_and(self):
        iv = and_interactions(_hand_game())
        assert iv.kind == AND
        np.testing.assert_allclose(iv.effects, [0, 1, 2, 2])

    def test_hand_checked_or(self):
        iv = or_interactions(_hand_game())
        assert iv.kind == OR
        np.testing.assert_allclose(iv.effects, [0, 3, 4, -2])

    def test_constant_game_all_mass_at_empty(self):
        vt = ValueTable(n=4, values=np.full(16, 2.5))
        for iv in (and_interactions(vt), or_interactions(vt)):
            assert iv.effects[0] == pytest.approx(2.5)
            np.testing.assert_allclose(iv.effects[1:], 0.0, atol=1e-12)

    @pytest.mark.parametrize("n", range(0, 7))
    def test_matches_brute_force(self, n):
        for seed in range(4):
            vt = random_game(n, 3.0, seed=1000 * n + seed)
            np.testing.assert_allclose(
                and_interactions(vt).effects, brute_force_and(vt).effects, atol=1e-12
            )
            np.testing.assert_allclose(
                or_interactions(vt).effects, brute_force_or(vt).effects, atol=1e-12
            )


class TestReconstruction:
    """Both extraction directions must rebuild the game they came from."""

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 5, 8])
    def test_faithfulness_both_kinds(self, n):
        vt = random_game(n, 5.0, seed=40 + n)
        for extract in (and_interactions, or_interactions):
            assert faithfulness_error(vt, extract(vt)) < 1e-9 * max(
                1.0, np.abs(vt.values).max(initial=0.0)
            )

    def test_single_subset_reconstruction(self):
        vt = random_game(4, 2.0, seed=9)
        ia = and_interactions(vt)
        io = or_interactions(vt)
        for t in range(16):
            assert and_reconstruct(ia, t) == pytest.approx(vt.values[t], abs=1e-10)
            assert or_reconstruct(io, t) == pytest.approx(vt.values[t], abs=1e-10)

    def test_reconstruct_all_equals_per_subset(self):
        vt = random_game(5, 2.0, seed=10)
        io = or_interactions(vt)
        full = reconstruct_all(io)
        each = [or_reconstruct(io, t) for t in range(32)]
        np.testing.assert_allclose(full, each, atol=1e-10)

    def test_mixed_reconstruction_of_split_game(self):
        """Any split of v into an AND part and an OR part rebuilds v."""
        rng = np.random.default_rng(11)
        vt = random_game(4, 2.0, seed=11)
        part = rng.normal(size=16)
        i_and = and_interactions(ValueTable(n=4, values=vt.values - part)).effects
        i_or = or_interactions(ValueTable(n=4, values=part)).effects
        np.testing.assert_allclose(mixed_reconstruct(i_and, i_or), vt.values, atol=1e-10)

    def test_empty_game(self):
        vt = ValueTable(n=0, values=np.array([3.25]))
        assert and_interactions(vt).effects[0] == 3.25
        assert or_interactions(vt).effects[0] == 3.25
        assert faithfulness_error(vt, and_interactions(vt)) == 0.0


class TestRecords:
    def test_sorted_by_magnitude_then_mask(self):
        eff = np.array([0.5, -2.0, 2.0, 0.0])
        recs = interaction_records(eff, AND, 2, ("a", "b"))
        assert [r["mask"] for r in recs] == [1, 2, 0, 3]
        assert recs[0]["effect"] == -2.0
        assert recs[0]["members"] == ["a"]

    def test_doc_header(self):
        vt = _hand_game()
        doc = interactions_to_doc(or_interactions(vt), vt)
        assert doc["format"] == "interactions"
        assert doc["kind"] == OR
        assert doc["n"] == 2
        assert doc["source_digest"] == vt.digest()
        assert len(doc["records"]) == 4

    def test_vector_validates_length(self):
        with pytest.raises(ValueError):
            InteractionVector(2, AND, np.zeros(3))
