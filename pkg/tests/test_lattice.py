"""Transform layer: fast paths against dense definition oracles."""

import numpy as np
import pytest

from ikit.lattice import (
    LatticeSizeError,
    apply_t_and,
    apply_t_and_transpose,
    apply_t_or,
    apply_t_or_inplace,
    apply_t_or_transpose,
    as_lattice,
    check_players,
    lattice_cap,
    mask_of,
    members_of,
    mobius_inplace,
    mobius_transform,
    players_of,
    reflect,
    superset_mobius_inplace,
    superset_zeta_inplace,
    zeta_transform,
)
from ikit.synthetic import dense_t_and, dense_t_or


class TestIndexing:
    def test_mask_roundtrip(self):
        assert mask_of([0, 2], 3) == 5
        assert members_of(5, 3) == [0, 2]
        assert mask_of([], 4) == 0
        assert members_of(0, 4) == []

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            mask_of([3], 3)
        with pytest.raises(ValueError):
            members_of(8, 3)

    def test_players_of_rejects_non_powers(self):
        for bad in (0, 3, 5, 6, 7, 12):
            with pytest.raises(ValueError):
                players_of(bad)
        assert players_of(1) == 0
        assert players_of(8) == 3

    def test_as_lattice_validation(self):
        v = as_lattice([1, 2, 3, 4])
        assert v.dtype == np.float64 and v.shape == (4,)
        with pytest.raises(ValueError):
            as_lattice([1, 2, 3])
        with pytest.raises(ValueError):
            as_lattice([1, 2], n=2)

    def test_cap_env_override(self, monkeypatch):
        monkeypatch.setenv("IKIT_N_CAP", "4")
        assert lattice_cap() == 4
        with pytest.raises(LatticeSizeError):
            check_players(5)
        monkeypatch.setenv("IKIT_N_CAP", "banana")
        with pytest.raises(LatticeSizeError):
            lattice_cap()


class TestAgainstDenseOracles:
    """Every fast operator must match its dense matrix on random vectors."""

    @pytest.mark.parametrize("n", range(0, 9))
    def test_forward_operators(self, n):
        rng = np.random.default_rng(100 + n)
        a = dense_t_and(n)
        b = dense_t_or(n)
        for _ in range(5):
            w = rng.normal(size=1 << n)
            np.testing.assert_allclose(apply_t_and(w), a @ w, atol=1e-11)
            np.testing.assert_allclose(apply_t_or(w), b @ w, atol=1e-11)

    @pytest.mark.parametrize("n", range(0, 9))
    def test_adjoint_operators(self, n):
        rng = np.random.default_rng(200 + n)
        a = dense_t_and(n)
        b = dense_t_or(n)
        for _ in range(5):
            g = rng.normal(size=1 << n)
            np.testing.assert_allclose(apply_t_and_transpose(g), a.T @ g, atol=1e-11)
            np.testing.assert_allclose(apply_t_or_transpose(g), b.T @ g, atol=1e-11)

    def test_adjoint_identity_inner_products(self):
        """<T w, g> == <w, T' g> for both operator pairs."""
        rng = np.random.default_rng(7)
        for n in (1, 3, 5, 7):
            w = rng.normal(size=1 << n)
            g = rng.normal(size=1 << n)
            lhs = float(apply_t_and(w) @ g)
            rhs = float(w @ apply_t_and_transpose(g))
            assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))
            lhs = float(apply_t_or(w) @ g)
            rhs = float(w @ apply_t_or_transpose(g))
            assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


class TestTransformAlgebra:
    def test_mobius_zeta_inverse(self):
        rng = np.random.default_rng(11)
        for n in range(0, 11):
            w = rng.normal(size=1 << n)
            np.testing.assert_allclose(zeta_transform(mobius_transform(w)), w, atol=1e-10)
            np.testing.assert_allclose(mobius_transform(zeta_transform(w)), w, atol=1e-10)

    def test_superset_pair_inverse(self):
        rng = np.random.default_rng(12)
        w = rng.normal(size=1 << 7)
        buf = w.copy()
        superset_mobius_inplace(buf)
        superset_zeta_inplace(buf)
        np.testing.assert_allclose(buf, w, atol=1e-10)

    def test_reflect_is_complement_reindexing(self):
        rng = np.random.default_rng(13)
        n = 5
        w = rng.normal(size=1 << n)
        r = reflect(w)
        full = (1 << n) - 1
        for mask in range(1 << n):
            assert r[mask] == w[full ^ mask]

    def test_mobius_known_example(self):
        # n=2 game 0,1,2,5: pair effect is 5-2-1+0
        np.testing.assert_allclose(mobius_transform([0, 1, 2, 5]), [0, 1, 2, 2])

    def test_copying_ops_leave_input_alone(self):
        w = np.arange(8, dtype=np.float64)
        before = w.copy()
        mobius_transform(w)
        zeta_transform(w)
        apply_t_or(w)
        apply_t_and_transpose(w)
        apply_t_or_transpose(w)
        reflect(w)
        np.testing.assert_array_equal(w, before)

    def test_inplace_or_matches_copying(self):
        rng = np.random.default_rng(14)
        w = rng.normal(size=1 << 6)
        buf = w.copy()
        scratch = np.empty_like(buf)
        apply_t_or_inplace(buf, scratch)
        np.testing.assert_array_equal(buf, apply_t_or(w))

    def test_mobius_inplace_mutates_and_returns(self):
        w = np.array([0.0, 1.0, 2.0, 5.0])
        out = mobius_inplace(w)
        assert out is w
        np.testing.assert_allclose(w, [0, 1, 2, 2])
