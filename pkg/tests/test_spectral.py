"""Grid layout, spectral calculus, and quadrature oracles."""

import numpy as np
import pytest

from smagbox.errors import GridMismatchError, ShapeError
from smagbox.fields import (
    ScalarField,
    TensorField,
    VectorField,
    dealias,
    divergence,
    gradient,
    inner_product,
    l2_norm_sq,
    l2_norm_sq_spectral,
    l3_norm_cubed,
    leray_project,
    linf_norm,
    zero_mean,
)
from smagbox.grid import Grid

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="module")
def grid():
    return Grid(32)


def _fill(grid, profile):
    return np.broadcast_to(profile, grid.real_shape).copy()


class TestGrid:
    @pytest.mark.parametrize("n", [3, 5, 2, 0, -4, 7])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            Grid(n)

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError):
            Grid(16, 0.0)

    def test_geometry(self):
        g = Grid(16, 3.0)
        assert g.spacing * g.n == pytest.approx(g.length, rel=1e-15)
        assert g.volume == pytest.approx(27.0)
        assert g.dealias_cutoff == 5

    def test_wavenumbers_scale_with_box(self):
        g = Grid(16, 4.0)
        # mode m along x has wavenumber 2 pi m / length
        assert g.kx[1, 0, 0] == pytest.approx(2.0 * np.pi / 4.0)
        assert g.kx[-1, 0, 0] == pytest.approx(-2.0 * np.pi / 4.0)

    def test_equality(self):
        assert Grid(16) == Grid(16)
        assert Grid(16) != Grid(32)
        assert Grid(16, 1.0) != Grid(16, 2.0)


class TestFieldRepresentation:
    def test_round_trip(self, grid):
        rng = np.random.default_rng(0)
        values = rng.standard_normal((3,) + grid.real_shape)
        u = VectorField.from_real(grid, values)
        back = VectorField.from_spectral(grid, u.spectral).real
        tol = 10 * np.finfo(float).eps * np.max(np.abs(values))
        assert np.max(np.abs(back - values)) <= tol

    def test_shape_validation(self, grid):
        with pytest.raises(ShapeError):
            VectorField.from_real(grid, np.zeros(grid.real_shape))
        with pytest.raises(ShapeError):
            ScalarField.from_spectral(grid, np.zeros(grid.real_shape))

    def test_needs_some_representation(self, grid):
        with pytest.raises(ValueError):
            VectorField(grid)


class TestGradient:
    def test_single_mode(self, grid):
        x, y, z = grid.coords()
        data = np.zeros((3,) + grid.real_shape)
        data[0] = _fill(grid, np.sin(y))
        t = gradient(VectorField.from_real(grid, data))
        got = t.real
        expect = _fill(grid, np.cos(y))
        assert np.max(np.abs(got[0, 1] - expect)) <= 1e-12
        rest = got.copy()
        rest[0, 1] = 0.0
        assert np.max(np.abs(rest)) <= 1e-12

    def test_two_harmonics(self, grid):
        x, y, z = grid.coords()
        data = np.zeros((3,) + grid.real_shape)
        data[1] = _fill(grid, np.sin(z) + 0.5 * np.sin(2.0 * z))
        t = gradient(VectorField.from_real(grid, data))
        expect = _fill(grid, np.cos(z) + np.cos(2.0 * z))
        assert np.max(np.abs(t.real[1, 2] - expect)) <= 1e-12 * np.max(np.abs(expect))

    def test_zero_field(self, grid):
        t = gradient(VectorField.zeros(grid))
        assert np.max(np.abs(t.real)) == 0.0

    def test_scalar_gradient_and_divergence_chain(self, grid):
        x, _, _ = grid.coords()
        phi = ScalarField.from_real(grid, _fill(grid, np.cos(x)))
        grad_phi = gradient(phi)
        lap = divergence(grad_phi)
        assert np.max(np.abs(lap.real + phi.real)) <= 1e-12


class TestLerayProjection:
    def test_divergence_free_unchanged(self, grid):
        _, y, _ = grid.coords()
        data = np.zeros((3,) + grid.real_shape)
        data[0] = _fill(grid, np.sin(y))
        u = VectorField.from_real(grid, data)
        w = leray_project(u)
        assert np.max(np.abs(w.real - u.real)) <= 1e-13 * np.max(np.abs(u.real))

    def test_annihilates_gradients(self, grid):
        x, _, _ = grid.coords()
        phi = ScalarField.from_real(grid, _fill(grid, np.cos(x)))
        v = gradient(phi)
        w = leray_project(v)
        assert np.max(np.abs(w.real)) <= 1e-13

    def test_recovers_constructed_decomposition(self, grid):
        x, y, z = grid.coords()
        sol = np.zeros((3,) + grid.real_shape)
        sol[0] = _fill(grid, np.sin(2.0 * y))
        sol[2] = _fill(grid, np.cos(x))
        phi = ScalarField.from_real(grid, _fill(grid, np.sin(x) * np.cos(3.0 * z)))
        mixed = VectorField.from_real(grid, sol + gradient(phi).real)
        w = leray_project(mixed)
        assert np.max(np.abs(w.real - sol)) <= 1e-12 * np.max(np.abs(sol))

    def test_idempotent(self, grid):
        rng = np.random.default_rng(1)
        v = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        p1 = leray_project(v)
        p2 = leray_project(p1)
        scale = np.max(np.abs(p1.spectral))
        assert np.max(np.abs(p2.spectral - p1.spectral)) <= 1e-12 * scale

    def test_self_adjoint(self, grid):
        rng = np.random.default_rng(2)
        a = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        b = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        lhs = inner_product(leray_project(a), b)
        rhs = inner_product(a, leray_project(b))
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_result_divergence_free(self, grid):
        rng = np.random.default_rng(3)
        v = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        w = leray_project(v)
        div = divergence(w)
        assert np.sqrt(l2_norm_sq(div)) <= 1e-12 * np.sqrt(l2_norm_sq(v))


class TestDealias:
    def _single_mode(self, grid, m):
        s = np.zeros((3,) + grid.spectral_shape, dtype=complex)
        s[0][m, 0, 0] = 1.0
        return VectorField.from_spectral(grid, s)

    def test_mode_below_cutoff_unchanged(self, grid):
        u = self._single_mode(grid, 1)
        d = dealias(u)
        np.testing.assert_array_equal(d.spectral, u.spectral)

    def test_mode_above_cutoff_zeroed(self, grid):
        assert grid.dealias_cutoff == 10
        u = self._single_mode(grid, 12)
        d = dealias(u)
        assert np.max(np.abs(d.spectral)) == 0.0

    def test_mode_at_cutoff_kept(self, grid):
        u = self._single_mode(grid, 10)
        d = dealias(u)
        np.testing.assert_array_equal(d.spectral, u.spectral)

    def test_zero_field(self, grid):
        d = dealias(VectorField.zeros(grid))
        assert np.max(np.abs(d.spectral)) == 0.0


class TestNorms:
    def test_l2_closed_form(self, grid):
        x, _, _ = grid.coords()
        s = ScalarField.from_real(grid, _fill(grid, 2.0 * np.sin(x)))
        assert l2_norm_sq(s) == pytest.approx(TWO_PI**3 * 2.0, rel=1e-12)

    def test_l3_closed_form(self, grid):
        x, _, _ = grid.coords()
        s = ScalarField.from_real(grid, _fill(grid, np.cos(x)))
        expect = TWO_PI**3 * 4.0 / (3.0 * np.pi)
        assert l3_norm_cubed(s) == pytest.approx(expect, rel=1e-3)

    def test_zero_field_norms(self, grid):
        v = VectorField.zeros(grid)
        assert l2_norm_sq(v) == 0.0
        assert l3_norm_cubed(v) == 0.0
        assert linf_norm(v) == 0.0

    def test_linf(self, grid):
        x, _, _ = grid.coords()
        s = ScalarField.from_real(grid, _fill(grid, 3.0 * np.cos(x)))
        assert linf_norm(s) == pytest.approx(3.0, rel=1e-12)

    def test_inner_product_is_l2(self, grid):
        rng = np.random.default_rng(4)
        v = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        assert inner_product(v, v) == pytest.approx(l2_norm_sq(v), rel=1e-14)

    def test_inner_product_symmetric_bilinear(self, grid):
        rng = np.random.default_rng(5)
        a = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        b = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        c = VectorField.from_real(grid, 2.5 * a.real + b.real)
        assert inner_product(a, b) == pytest.approx(inner_product(b, a), rel=1e-13)
        assert inner_product(c, b) == pytest.approx(
            2.5 * inner_product(a, b) + inner_product(b, b), rel=1e-12
        )

    def test_parseval(self, grid):
        rng = np.random.default_rng(6)
        v = VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape))
        assert l2_norm_sq_spectral(v) == pytest.approx(l2_norm_sq(v), rel=1e-10)

    def test_grid_mismatch_rejected(self):
        a = VectorField.zeros(Grid(16))
        b = VectorField.zeros(Grid(32))
        with pytest.raises(GridMismatchError):
            inner_product(a, b)

    def test_mixed_kind_rejected(self, grid):
        with pytest.raises(ShapeError):
            inner_product(VectorField.zeros(grid), ScalarField.zeros(grid))


class TestZeroMeanPreservation:
    def _mode0_ratio(self, f):
        scale = max(np.max(np.abs(f.spectral)), 1e-300)
        return np.max(np.abs(f.spectral[..., 0, 0, 0])) / scale

    def test_operations_preserve_zero_mean(self, grid):
        rng = np.random.default_rng(7)
        v = zero_mean(VectorField.from_real(grid, rng.standard_normal((3,) + grid.real_shape)))
        assert self._mode0_ratio(v) <= 1e-14
        for out in (gradient(v), leray_project(v), dealias(v), divergence(gradient(v))):
            assert self._mode0_ratio(out) <= 1e-14

    def test_zero_mean_subtracts_mode0(self, grid):
        v = VectorField.from_real(grid, np.ones((3,) + grid.real_shape))
        w = zero_mean(v)
        assert np.max(np.abs(w.real)) <= 1e-13
