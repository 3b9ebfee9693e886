import numpy as np
import pytest

from gridtv.grid import (EdgeVector, GridShape, Signal, dense_incidence,
                         flat_to_multi, incidence_adjoint, incidence_apply,
                         laplacian_apply, multi_to_flat, sobolev_seminorm,
                         tv_seminorm)

from conftest import dense_laplacian


class TestGridShape:
    def test_counts(self):
        s = GridShape((3, 4, 5))
        assert s.n == 60 and s.d == 3 and s.d_max == 6
        assert s.m == 2 * 20 + 3 * 15 + 4 * 12

    def test_edge_count_matches_enumeration(self):
        for dims in [(2,), (5,), (2, 2), (3, 4), (2, 3, 4)]:
            s = GridShape(dims)
            assert dense_incidence(s).shape == (s.m, s.n)

    def test_cubic_predicate(self):
        assert GridShape((4, 4)).is_cubic
        assert not GridShape((4, 5)).is_cubic
        assert GridShape((7,)).is_cubic
        with pytest.raises(ValueError):
            GridShape((4, 5)).ell

    def test_validation(self):
        with pytest.raises(ValueError):
            GridShape(())
        with pytest.raises(ValueError):
            GridShape((3, 0))

    def test_signal_validation(self):
        s = GridShape((2, 2))
        with pytest.raises(ValueError):
            Signal(np.zeros(3), s)
        with pytest.raises(ValueError):
            Signal(np.array([0.0, 1.0, np.nan, 2.0]), s)


class TestIncidence:
    def test_1d_adjacent_differences(self):
        s = GridShape((3,))
        out = incidence_apply(Signal(np.array([0.0, 1.0, 3.0]), s))
        assert np.array_equal(out.values, [1.0, 2.0])

    def test_constant_in_null_space(self, rng):
        for dims in [(4,), (3, 3), (2, 3, 2)]:
            s = GridShape(dims)
            theta = Signal(np.full(s.n, rng.uniform(-3, 3)), s)
            assert np.all(incidence_apply(theta).values == 0)

    def test_matches_dense_on_2x2(self):
        s = GridShape((2, 2))
        theta = np.array([0.0, 1.0, 2.0, 3.0])
        expected = dense_incidence(s) @ theta
        assert np.allclose(incidence_apply(Signal(theta, s)).values, expected,
                           atol=1e-14)

    def test_adjoint_single_edge(self):
        s = GridShape((2,))
        out = incidence_adjoint(EdgeVector(np.array([1.0]), s))
        assert np.array_equal(out.values, [-1.0, 1.0])

    def test_adjoint_zero(self):
        s = GridShape((3, 2))
        assert np.all(incidence_adjoint(EdgeVector(np.zeros(s.m), s)).values == 0)

    def test_adjoint_matches_dense_3x3(self, rng):
        s = GridShape((3, 3))
        u = rng.standard_normal(s.m)
        expected = dense_incidence(s).T @ u
        assert np.allclose(incidence_adjoint(EdgeVector(u, s)).values, expected,
                           atol=1e-14)

    def test_adjointness_random_shapes(self, rng):
        # 200 random pairs across random shapes with n <= 4096
        count = 0
        while count < 200:
            d = int(rng.integers(1, 4))
            dims = tuple(int(rng.integers(1, 9)) for _ in range(d))
            s = GridShape(dims)
            if s.n > 4096:
                continue
            theta = Signal(rng.standard_normal(s.n), s)
            u = EdgeVector(rng.standard_normal(s.m), s)
            lhs = incidence_apply(theta).values @ u.values
            rhs = theta.values @ incidence_adjoint(u).values
            bound = 1e-10 * max(np.linalg.norm(theta.values)
                                * np.linalg.norm(u.values), 1e-12)
            assert abs(lhs - rhs) <= bound
            count += 1


class TestLaplacian:
    def test_constant_null(self):
        s = GridShape((3, 3))
        out = laplacian_apply(Signal(np.full(9, 2.5), s))
        assert np.max(np.abs(out.values)) <= 1e-12

    def test_1d_example(self):
        s = GridShape((3,))
        out = laplacian_apply(Signal(np.array([1.0, 0.0, 0.0]), s))
        expected = dense_laplacian(s) @ np.array([1.0, 0.0, 0.0])
        assert np.array_equal(expected, [1.0, -1.0, 0.0])
        assert np.allclose(out.values, expected, atol=1e-14)

    def test_2x2_example(self):
        s = GridShape((2, 2))
        theta = np.array([1.0, 0.0, 0.0, 0.0])
        out = laplacian_apply(Signal(theta, s))
        expected = dense_laplacian(s) @ theta
        assert np.array_equal(expected, [2.0, -1.0, -1.0, 0.0])
        assert np.allclose(out.values, expected, atol=1e-14)

    def test_psd_action(self, rng):
        s = GridShape((4, 3))
        for _ in range(20):
            theta = Signal(rng.standard_normal(s.n), s)
            assert theta.values @ laplacian_apply(theta).values >= -1e-12


class TestDenseIncidence:
    def test_tiny_paths(self):
        assert np.array_equal(dense_incidence(GridShape((2,))), [[-1.0, 1.0]])
        assert np.array_equal(dense_incidence(GridShape((3,))),
                              [[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]])

    def test_2x2_structure(self):
        s = GridShape((2, 2))
        d_mat = dense_incidence(s)
        assert d_mat.shape == (4, 4)
        assert np.all(d_mat.sum(axis=1) == 0)
        col_l1 = np.abs(d_mat).sum(axis=0)
        assert np.all(col_l1 <= s.d_max)

    def test_column_degree_bound(self):
        for dims in [(6,), (4, 4), (3, 3, 3)]:
            s = GridShape(dims)
            col_l1 = np.abs(dense_incidence(s)).sum(axis=0)
            assert np.all(col_l1 <= s.d_max)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            dense_incidence(GridShape((101, 101)))


class TestSeminorms:
    def test_trivial_values(self):
        s = GridShape((3,))
        const = Signal(np.full(3, 4.0), s)
        assert tv_seminorm(const) == 0
        assert sobolev_seminorm(const) == 0
        bump = Signal(np.array([0.0, 1.0, 0.0]), s)
        assert tv_seminorm(bump) == 2.0
        assert sobolev_seminorm(bump) == pytest.approx(np.sqrt(2), abs=1e-14)

    def test_2x2_tv(self):
        s = GridShape((2, 2))
        assert tv_seminorm(Signal(np.array([0.0, 1.0, 2.0, 3.0]), s)) == 8.0

    def test_sobolev_matches_quadratic_form(self, rng):
        s = GridShape((3, 3))
        lap = dense_laplacian(s)
        for _ in range(10):
            theta = rng.standard_normal(s.n)
            quad = theta @ lap @ theta
            val = sobolev_seminorm(Signal(theta, s)) ** 2
            assert abs(val - quad) <= 1e-10 * max(quad, 1.0)

    def test_cauchy_schwarz_between_seminorms(self, rng):
        for dims in [(8,), (5, 5), (3, 3, 3)]:
            s = GridShape(dims)
            for _ in range(10):
                theta = Signal(rng.standard_normal(s.n), s)
                assert tv_seminorm(theta) <= np.sqrt(s.m) \
                    * sobolev_seminorm(theta) + 1e-10


class TestIndexing:
    def test_corners_3x3(self):
        s = GridShape((3, 3))
        assert flat_to_multi(0, s) == (1, 1)
        assert flat_to_multi(8, s) == (3, 3)
        assert multi_to_flat((3, 3), s) == 8

    def test_row_major_last_axis_fastest(self):
        s = GridShape((3, 3))
        assert flat_to_multi(1, s) == (1, 2)

    def test_round_trip_4x5x6(self):
        s = GridShape((4, 5, 6))
        for i in range(s.n):
            assert multi_to_flat(flat_to_multi(i, s), s) == i

    def test_out_of_range(self):
        s = GridShape((3, 3))
        with pytest.raises(IndexError):
            flat_to_multi(9, s)
        with pytest.raises(IndexError):
            multi_to_flat((0, 1), s)
        with pytest.raises(IndexError):
            multi_to_flat((4, 1), s)
