"""Tests for the body-force families and their derived scales."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from smagbox.fields import VectorField, dealias, divergence, l2_norm_sq
from smagbox.forcing import FAMILIES, force_scale_report, force_scales, make_force
from smagbox.grid import Grid

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="module")
def grid():
    return Grid(32)


class TestFamilies:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_divergence_free(self, grid, family):
        f = make_force(family, 1.3, 1, grid)
        div = divergence(f.field)
        scale = np.sqrt(l2_norm_sq(f.field) / grid.volume)
        assert np.sqrt(l2_norm_sq(div) / grid.volume) <= 1e-12 * scale

    @pytest.mark.parametrize("family", FAMILIES)
    def test_zero_mean(self, grid, family):
        f = make_force(family, 2.0, 1, grid)
        means = f.field.real.mean(axis=(-3, -2, -1))
        assert np.max(np.abs(means)) <= 1e-13

    @pytest.mark.parametrize("family", FAMILIES)
    def test_survives_dealiasing(self, grid, family):
        # every family is a single-mode trig polynomial, so the 2/3-rule
        # mask must leave it untouched
        f = make_force(family, 1.0, 1, grid)
        masked = dealias(f.field)
        assert np.max(np.abs(masked.real - f.field.real)) <= 1e-13

    def test_unknown_family_rejected(self, grid):
        with pytest.raises(ValueError, match="family"):
            make_force("colliding_jets", 1.0, 1, grid)


class TestShearScales:
    """Closed forms for f = (A sin(k z), 0, 0) with k = 2 pi m / L."""

    def test_amplitude_scale(self, grid):
        amp = 0.75
        f = make_force("single_mode_shear", amp, 1, grid)
        assert_allclose(f.F, amp / np.sqrt(2.0), rtol=1e-12)

    def test_candidate_list(self, grid):
        f = make_force("single_mode_shear", 1.0, 1, grid)
        box, from_inf, from_rms, from_l3 = f.candidates
        assert_allclose(box, TWO_PI, rtol=1e-12)
        assert_allclose(from_inf, TWO_PI / (2.0 * np.sqrt(2.0) * np.pi), rtol=1e-12)
        assert_allclose(from_rms, 1.0, rtol=1e-12)
        # the cubed-norm ratio carries the mean of |cos|^3, which is
        # 4 / (3 pi); its grid quadrature is spectrally accurate but not
        # exact, hence the looser tolerance
        expected_l3 = (3.0 * np.pi / 4.0) ** (1.0 / 3.0) * from_inf
        assert_allclose(from_l3, expected_l3, rtol=1e-4)

    def test_length_scale_is_min_candidate(self, grid):
        f = make_force("single_mode_shear", 1.0, 1, grid)
        assert f.L == min(f.candidates)
        assert_allclose(f.L, TWO_PI / (2.0 * np.pi * np.sqrt(2.0)), rtol=1e-12)

    def test_mode_doubling_halves_gradient_candidates(self, grid):
        f1 = make_force("single_mode_shear", 1.0, 1, grid)
        f2 = make_force("single_mode_shear", 1.0, 2, grid)
        assert_allclose(f2.F, f1.F, rtol=1e-12)
        assert_allclose(f2.candidates[0], f1.candidates[0], rtol=1e-12)
        assert_allclose(f2.candidates[1], 0.5 * f1.candidates[1], rtol=1e-12)
        assert_allclose(f2.candidates[2], 0.5 * f1.candidates[2], rtol=1e-12)
        # the cubed-norm quadrature error depends on where the |cos| kinks
        # fall relative to the grid, so that candidate only halves loosely
        assert_allclose(f2.candidates[3], 0.5 * f1.candidates[3], rtol=1e-3)
        assert_allclose(f2.L, 0.5 * f1.L, rtol=1e-12)


class TestTaylorGreenScales:
    def test_amplitude_scale(self, grid):
        amp = 1.4
        f = make_force("taylor_green", amp, 1, grid)
        assert_allclose(f.F, amp / 2.0, rtol=1e-12)

    def test_length_scale(self, grid):
        # the max-gradient candidate wins: |grad f| peaks at sqrt(2) A k
        f = make_force("taylor_green", 1.0, 1, grid)
        assert_allclose(f.L, 1.0 / (2.0 * np.sqrt(2.0)), rtol=1e-12)

    def test_abc_amplitude_scale(self, grid):
        f = make_force("abc_like", 0.5, 1, grid)
        assert_allclose(f.F, 0.5 * np.sqrt(3.0), rtol=1e-12)


class TestScaleInvariances:
    @pytest.mark.parametrize("family", FAMILIES)
    def test_amplitude_homogeneity(self, grid, family):
        lam = 3.7
        f1 = make_force(family, 1.0, 1, grid)
        f2 = make_force(family, lam, 1, grid)
        assert_allclose(f2.F, lam * f1.F, rtol=1e-12)
        assert_allclose(f2.L, f1.L, rtol=1e-12)
        assert_allclose(f2.candidates, f1.candidates, rtol=1e-12)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_box_rescaling(self, family):
        # stretching the box by lam at fixed mode number stretches every
        # length candidate by lam and leaves F alone
        lam = 2.5
        g1 = Grid(16)
        g2 = Grid(16, length=lam * TWO_PI)
        f1 = make_force(family, 1.0, 1, g1)
        f2 = make_force(family, 1.0, 1, g2)
        assert_allclose(f2.F, f1.F, rtol=1e-12)
        assert_allclose(f2.L, lam * f1.L, rtol=1e-12)
        assert_allclose(np.asarray(f2.candidates), lam * np.asarray(f1.candidates), rtol=1e-10)


class TestGradientInequalities:
    """L is defined so that F / L dominates every gradient norm of f."""

    @pytest.mark.parametrize("family", FAMILIES)
    @pytest.mark.parametrize("mode", [1, 3])
    def test_all_bounds_hold(self, grid, family, mode):
        from smagbox.fields import gradient, l3_norm_cubed, linf_norm

        f = make_force(family, 1.1, mode, grid)
        ratio = f.F / f.L
        slack = 1.0 + 1e-9
        grad = gradient(f.field)
        assert linf_norm(grad) <= ratio * slack
        assert np.sqrt(l2_norm_sq(grad) / grid.volume) <= ratio * slack
        assert (l3_norm_cubed(grad) / grid.volume) ** (1.0 / 3.0) <= ratio * slack
        assert f.L <= grid.volume ** (1.0 / 3.0) * slack

    def test_length_never_exceeds_candidates(self, grid):
        f = make_force("abc_like", 1.0, 2, grid)
        for c in f.candidates:
            assert f.L <= c


class TestValidation:
    def test_zero_force_has_no_scale(self, grid):
        zero = VectorField.from_real(grid, np.zeros((3,) + grid.real_shape))
        with pytest.raises(ValueError, match="zero"):
            force_scale_report(zero)

    @pytest.mark.parametrize("amplitude", [0.0, -1.0])
    def test_bad_amplitude(self, grid, amplitude):
        with pytest.raises(ValueError, match="amplitude"):
            make_force("taylor_green", amplitude, 1, grid)

    @pytest.mark.parametrize("mode", [0, -1, 11, 200])
    def test_mode_outside_retained_spectrum(self, grid, mode):
        assert grid.dealias_cutoff == 10
        with pytest.raises(ValueError, match="mode"):
            make_force("taylor_green", 1.0, mode, grid)

    def test_force_scales_matches_report(self, grid):
        f = make_force("taylor_green", 1.0, 1, grid)
        F, L = force_scales(f.field)
        assert F == f.F
        assert L == f.L
