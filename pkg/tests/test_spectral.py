import numpy as np
import pytest

from gridtv.grid import GridShape, NonCubicGridError, Signal, laplacian_apply
from gridtv.spectral import (grid_eigenvalues, spectral_filter,
                             spectral_forward, spectral_inverse)

from conftest import dense_laplacian


class TestGridEigenvalues:
    def test_path_of_two(self):
        rho = np.sort(grid_eigenvalues(GridShape((2,))).eigenvalues)
        assert np.allclose(rho, [0.0, 2.0], atol=1e-12)

    def test_path_of_three(self):
        rho = np.sort(grid_eigenvalues(GridShape((3,))).eigenvalues)
        assert np.allclose(rho, [0.0, 1.0, 3.0], atol=1e-12)

    def test_2d_kronecker_sum(self):
        rho = np.sort(grid_eigenvalues(GridShape((2, 2))).eigenvalues)
        assert np.allclose(rho, [0.0, 2.0, 2.0, 4.0], atol=1e-12)

    @pytest.mark.parametrize("dims", [(6,), (4, 4), (3, 3, 3)])
    def test_multiset_matches_dense(self, dims):
        s = GridShape(dims)
        dense = np.sort(np.linalg.eigvalsh(dense_laplacian(s)))
        ours = np.sort(grid_eigenvalues(s).eigenvalues)
        assert np.max(np.abs(dense - ours)) <= 1e-9

    def test_view_invariants(self):
        for dims in [(5,), (4, 4), (3, 3, 3)]:
            s = GridShape(dims)
            view = grid_eigenvalues(s)
            rho = view.eigenvalues
            assert rho[0] == 0.0
            assert np.count_nonzero(np.abs(rho) < 1e-12) == 1
            assert np.all(rho >= 0) and np.all(rho <= 4 * s.d + 1e-12)
            assert sorted(view.order) == list(range(s.n))
            assert np.all(np.diff(rho[view.order]) >= -1e-15)

    def test_tie_break_by_flat_index(self):
        view = grid_eigenvalues(GridShape((3, 3)))
        rho = view.eigenvalues
        for a, b in zip(view.order, view.order[1:]):
            if rho[a] == rho[b]:
                assert a < b

    def test_non_cubic_rejected(self):
        with pytest.raises(NonCubicGridError):
            grid_eigenvalues(GridShape((3, 4)))


class TestTransforms:
    def test_constant_concentrates_at_zero_frequency(self):
        s = GridShape((4, 4))
        gamma = spectral_forward(Signal(np.full(16, 3.0), s)).values
        assert gamma[0] == pytest.approx(3.0 * 4.0, abs=1e-12)
        assert np.max(np.abs(gamma[1:])) <= 1e-12

    def test_zero_slot_is_scaled_mean(self, rng):
        for dims in [(8,), (4, 4)]:
            s = GridShape(dims)
            theta = Signal(rng.standard_normal(s.n), s)
            gamma = spectral_forward(theta)
            assert gamma.values[0] == pytest.approx(
                np.sqrt(s.n) * theta.values.mean(), rel=1e-12, abs=1e-12)

    def test_round_trip(self, rng):
        for dims in [(9,), (5, 5), (3, 3, 3)]:
            s = GridShape(dims)
            theta = Signal(rng.standard_normal(s.n), s)
            back = spectral_inverse(spectral_forward(theta))
            assert np.max(np.abs(back.values - theta.values)) \
                <= 1e-10 * max(1.0, np.abs(theta.values).max())

    @pytest.mark.parametrize("dims", [(8,), (16,), (8, 8), (4, 4, 4)])
    def test_parseval_100_draws(self, dims, rng):
        s = GridShape(dims)
        for _ in range(100):
            theta = Signal(rng.standard_normal(s.n), s)
            a = np.linalg.norm(spectral_forward(theta).values)
            b = np.linalg.norm(theta.values)
            assert abs(a - b) <= 1e-10 * b

    def test_inverse_of_zero(self):
        s = GridShape((4, 4))
        assert np.all(spectral_inverse(Signal(np.zeros(16), s)).values == 0)

    def test_unit_coefficient_gives_unit_vector(self):
        s = GridShape((3, 3))
        for slot in range(s.n):
            gamma = np.zeros(s.n)
            gamma[slot] = 1.0
            vec = spectral_inverse(Signal(gamma, s)).values
            assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)

    def test_matches_dense_eigenbasis_1d(self, rng):
        # path eigenvalues are distinct, so eigenvectors match up to sign
        for n in range(2, 9):
            s = GridShape((n,))
            vals, vecs = np.linalg.eigh(dense_laplacian(s))
            order = np.argsort(vals)
            vecs = vecs[:, order]
            basis = np.column_stack([
                spectral_inverse(Signal(np.eye(n)[k], s)).values
                for k in np.argsort(grid_eigenvalues(s).eigenvalues, kind="stable")
            ])
            signs = np.sign(np.sum(vecs * basis, axis=0))
            assert np.allclose(vecs * signs, basis, atol=1e-9)
            gamma = rng.standard_normal(n)
            aligned = (vecs * signs) @ gamma
            ours_order = np.argsort(grid_eigenvalues(s).eigenvalues, kind="stable")
            full = np.zeros(n)
            full[ours_order] = gamma
            assert np.allclose(spectral_inverse(Signal(full, s)).values, aligned,
                               atol=1e-9)

    def test_diagonalizes_laplacian(self, rng):
        for dims in [(8,), (6, 6), (4, 4, 4)]:
            s = GridShape(dims)
            rho = grid_eigenvalues(s).eigenvalues
            for _ in range(5):
                theta = Signal(rng.standard_normal(s.n), s)
                via = spectral_filter(theta, rho).values
                ref = laplacian_apply(theta).values
                assert np.linalg.norm(via - ref) \
                    <= 1e-9 * max(np.linalg.norm(ref), 1.0)


class TestSpectralFilter:
    def test_unit_gain_is_identity(self, rng):
        s = GridShape((5, 5))
        y = Signal(rng.standard_normal(25), s)
        out = spectral_filter(y, np.ones(25))
        assert np.max(np.abs(out.values - y.values)) <= 1e-10

    def test_zero_gain_is_zero(self, rng):
        s = GridShape((4, 4))
        y = Signal(rng.standard_normal(16), s)
        assert np.max(np.abs(spectral_filter(y, np.zeros(16)).values)) <= 1e-12

    def test_linear_in_input(self, rng):
        s = GridShape((4, 4))
        gain = rng.uniform(0, 1, 16)
        a = Signal(rng.standard_normal(16), s)
        b = Signal(rng.standard_normal(16), s)
        lhs = spectral_filter(Signal(2.0 * a.values - 3.0 * b.values, s), gain)
        rhs = 2.0 * spectral_filter(a, gain).values \
            - 3.0 * spectral_filter(b, gain).values
        assert np.allclose(lhs.values, rhs, atol=1e-10)

    def test_gain_length_mismatch(self, rng):
        s = GridShape((4, 4))
        y = Signal(rng.standard_normal(16), s)
        with pytest.raises(ValueError):
            spectral_filter(y, np.ones(15))

    def test_non_cubic_rejected(self, rng):
        s = GridShape((3, 4))
        y = Signal(rng.standard_normal(12), s)
        with pytest.raises(NonCubicGridError):
            spectral_forward(y)
        with pytest.raises(NonCubicGridError):
            spectral_filter(y, np.ones(12))


class TestPartialSums:
    def test_block_sums_obey_packing_bound(self):
        # independent brute-force block sums straight from the eigenvalues
        for dims in [(4,), (8,), (16,), (4, 4), (8, 8), (16, 16)]:
            s = GridShape(dims)
            ell, d = s.ell, s.d
            rho = grid_eigenvalues(s).eigenvalues.reshape(s.side_lengths)
            for tau in range(1, ell + 1):
                block = rho[tuple(slice(0, tau) for _ in range(d))].sum()
                assert block <= np.pi ** 2 * d * tau ** (d + 2) / ell ** 2 + 1e-9
