"""Unit tests for the spherical Fourier transform and Plancherel density."""

import math

import numpy as np
import pytest

from hyperheat import kernels, spectral
from hyperheat.errors import DecayViolation, TruncationWarning
from hyperheat.spectral import (SpectralProfile, calibrate_plancherel,
                                default_lambda_grid, direct_l2_norm,
                                forward_transform, gauss_legendre_grid,
                                heat_multiplier, inverse_transform,
                                make_density, plancherel_norm,
                                profile_from_csv, profile_from_fhat,
                                profile_to_csv, sobolev_norm,
                                standard_test_family)


def test_calibration_known_constants():
    assert calibrate_plancherel(0) == pytest.approx(1 / (2 * math.pi),
                                                    rel=1e-12)
    assert calibrate_plancherel(1) == pytest.approx((2 * math.pi) ** -2,
                                                    rel=1e-12)


def test_calibration_consistent_across_t():
    # would raise InconsistentCalibration otherwise
    for n in (2, 3):
        c = calibrate_plancherel(n, (0.5, 1.0, 2.0), rtol=1e-8)
        assert c > 0


def test_density_shape():
    d = make_density(1)
    lam = np.array([0.0, 1.0, 2.0])
    np.testing.assert_allclose(d(lam), d.constant * lam ** 2)
    assert np.all(make_density(2)(lam) >= 0)
    np.testing.assert_allclose(make_density(2)(lam), make_density(2)(-lam))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("t", [0.5, 1.0])
def test_forward_of_heat_kernel_is_multiplier(n, t):
    g = kernels.hyperbolic_heat_kernel(n, t)
    grid, w = gauss_legendre_grid(8.0, 120)
    p = forward_transform(g, n, grid, w)
    expect = np.exp(-0.5 * t * (grid ** 2 + n ** 2))
    assert np.max(np.abs(p.values - expect)) < 1e-7


def test_forward_zero_function():
    p = forward_transform(lambda r: np.zeros_like(np.asarray(r)), 1)
    assert np.max(np.abs(p.values)) == 0.0


def test_decay_violation():
    with pytest.raises(DecayViolation):
        forward_transform(lambda r: np.exp(-0.5 * np.asarray(r)), 1,
                          decay_bound=(1.0, 0.5))
    with pytest.raises(DecayViolation):
        # bound itself ok (alpha > n) but function violates it
        forward_transform(lambda r: 10 * np.exp(-2.0 * np.asarray(r)), 1,
                          decay_bound=(1.0, 2.0))


def test_inverse_at_zero_recovers_gamma():
    n, t = 1, 1.0
    g = kernels.hyperbolic_heat_kernel(n, t)
    p = forward_transform(g, n)
    assert inverse_transform(p, 0.0) == pytest.approx(
        complex(g.evaluate(0.0)), rel=1e-10)


def test_inverse_matches_dense_trapezoid_oracle():
    n, r0 = 1, 1.0
    fhat = lambda lam: np.exp(-lam ** 2 / 4)
    p = profile_from_fhat(fhat, n)
    got = inverse_transform(p, r0)
    # independent dense-grid trapezoid oracle
    lam = np.linspace(0.0, p.lam_max, 2000)
    from hyperheat.spherical import phi_real
    integrand = fhat(lam) * p.density(lam) * np.array(
        [phi_real(l, n, r0) for l in lam])
    oracle = 2.0 * np.trapezoid(integrand, lam)
    assert np.real(got) == pytest.approx(oracle, abs=1e-8)


def test_inverse_zero_profile():
    p = profile_from_fhat(lambda lam: np.zeros_like(lam), 1)
    assert inverse_transform(p, 0.7) == 0.0


def test_truncation_warning():
    # slowly decaying f-hat leaves visible mass at the grid edge
    p = profile_from_fhat(lambda lam: 1.0 / (1.0 + lam ** 2), 1)
    with pytest.warns(TruncationWarning):
        inverse_transform(p, 0.0)


def test_heat_multiplier_semigroup_and_identity():
    p = profile_from_fhat(lambda lam: np.exp(-lam ** 2 / 4), 1)
    q0 = heat_multiplier(p, 0.0)
    np.testing.assert_allclose(q0.values, p.values)
    once = heat_multiplier(p, 1.0)
    twice = heat_multiplier(heat_multiplier(p, 0.5), 0.5)
    np.testing.assert_allclose(once.values, twice.values, rtol=1e-14)
    with pytest.raises(ValueError):
        heat_multiplier(p, -1.0)


def test_multiplier_pointwise_value():
    grid = np.array([0.5, 1.0])
    p = SpectralProfile(1, grid, np.ones(2, dtype=complex),
                        np.ones(2), make_density(1))
    q = heat_multiplier(p, 1.0)
    assert q.values[1] == pytest.approx(math.exp(-1.0))


@pytest.mark.parametrize("t", [0.5, 1.0])
@pytest.mark.parametrize("n", [1, 2])
def test_plancherel_norm_is_gamma_2t(n, t):
    g = kernels.hyperbolic_heat_kernel(n, t)
    p = forward_transform(g, n)
    expect = float(np.real(kernels.hyperbolic_heat_kernel(n, 2 * t)
                           .evaluate(0.0)))
    assert plancherel_norm(p) == pytest.approx(expect, rel=1e-9)


def test_plancherel_matches_direct_radial_norm():
    n = 1
    p = profile_from_fhat(lambda lam: np.exp(-lam ** 2 / 4), n)
    f = lambda r: np.array([inverse_transform(p, ri)
                            for ri in np.atleast_1d(r)])
    direct = direct_l2_norm(f, n)
    assert direct == pytest.approx(plancherel_norm(p), rel=1e-6)


def test_sobolev_s0_equals_plancherel():
    p = profile_from_fhat(lambda lam: np.exp(-lam ** 2 / 2), 2)
    assert sobolev_norm(p, 0.0) == pytest.approx(plancherel_norm(p),
                                                 rel=1e-14)
    assert sobolev_norm(p, 2.0) > plancherel_norm(p)


def test_zero_norms():
    p = profile_from_fhat(lambda lam: np.zeros_like(lam), 1)
    assert plancherel_norm(p) == 0.0
    assert sobolev_norm(p, 3.0) == 0.0


@pytest.mark.parametrize("name,fhat", standard_test_family())
def test_round_trip_family(name, fhat):
    # inverse then forward recovers f-hat (band-limited synthetic data)
    n = 1
    grid, w = gauss_legendre_grid(8.0, 150)
    p = profile_from_fhat(fhat, n, grid, w)
    f = lambda r: inverse_transform(p, np.atleast_1d(r))
    # wider radial window: the band-limited members decay slowly beyond
    # the e^{-n r} envelope, so the sinh^{2n}-weighted tail needs room
    q = forward_transform(f, n, grid, w, r_max=36.0, num_r=1600)
    assert np.max(np.abs(q.values - p.values)) < 1e-6


def test_default_grid_size():
    grid, w = default_lambda_grid()
    assert len(grid) == 400
    assert grid[-1] < 8.0 / math.sqrt(0.5) <= grid[-1] + 0.5


def test_csv_round_trip(tmp_path):
    p = profile_from_fhat(lambda lam: np.exp(-lam ** 2 / 4), 2,
                          *gauss_legendre_grid(8.0, 50))
    path = str(tmp_path / "prof.csv")
    profile_to_csv(p, path)
    q = profile_from_csv(path)
    assert q.n == p.n
    np.testing.assert_allclose(q.grid, p.grid)
    np.testing.assert_allclose(q.values, p.values)
    np.testing.assert_allclose(q.weights, p.weights, atol=1e-12)


def test_profile_grid_validation():
    with pytest.raises(ValueError):
        SpectralProfile(1, np.array([1.0, 0.5]), np.zeros(2, complex),
                        np.ones(2), make_density(1))
