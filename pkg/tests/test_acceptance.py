"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the per-criterion
lines.  Tolerances are pinned here and nowhere else.
"""

import math
from functools import lru_cache

import numpy as np
import pytest

from hyperheat import kernels, limits, spectral, spherical, trigexpr
from hyperheat.spherical import CONTINUED, REAL
from hyperheat.trigexpr import CIRCULAR, HYPERBOLIC

STANDARD_NS = (1, 2, 3)
STANDARD_TS = (0.5, 1.0)


def _report(num: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num} {name}: {status} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@lru_cache(maxsize=None)
def _family_profile(key: str, n: int):
    fhat = dict(spectral.standard_test_family())[key]
    grid, w = spectral.gauss_legendre_grid(8.0 / math.sqrt(0.5), 400)
    return spectral.profile_from_fhat(fhat, n, grid, w)


def _family_keys():
    return [name for name, _ in spectral.standard_test_family()]


def test_criterion_1_symbolic_identities():
    worst = 0.0
    for n in STANDARD_NS:
        for flavor in (CIRCULAR, HYPERBOLIC):
            f = kernels.gaussian_expr(1.0, flavor)
            for op in ("adjoint", "forward"):
                worst = max(worst, kernels.verify_intertwining(n, flavor,
                                                               f, op))
    ok = worst <= 1e-9

    exact = all(
        kernels.apply_adjoint_shift(kernels.flat_weight(n, t), n)
        == kernels.unwrapped_heat_kernel(n, 2 * t)
        for n in STANDARD_NS for t in STANDARD_TS)

    rng = np.random.default_rng(20240817)
    pts = rng.uniform(0.2, 2.7, 30) + 1j * rng.uniform(-0.6, 0.6, 30)
    shift_err = 0.0
    for n in STANDARD_NS:
        for lam in (0.0, 1.0, 2.5):
            dt = spherical.apply_Dtilde_to_phi(lam, n, pts)
            shift_err = max(shift_err,
                            float(np.max(np.abs(dt - np.cosh(lam * pts)))))
            dr = spherical.apply_D_to_phi(lam, n, np.real(pts))
            shift_err = max(shift_err,
                            float(np.max(np.abs(dr - np.cos(lam
                                                            * np.real(pts))))))
    origin_err = max(abs(spherical.apply_D_to_phi(1.3, n, 0.0) - 1.0)
                     for n in STANDARD_NS)
    ok = ok and exact and shift_err <= 1e-10 and origin_err <= 1e-10
    _report(1, "symbolic identities", ok,
            f"intertwine={worst:.1e} exact={exact} shift={shift_err:.1e} "
            f"origin={origin_err:.1e}")


def test_criterion_2_kernel_normalizations():
    r, w = spectral.gauss_legendre_grid(16.0, 800)
    worst_gamma = 0.0
    worst_rho = 0.0
    worst_per = 0.0
    for n in STANDARD_NS:
        for t in STANDARD_TS:
            g = kernels.hyperbolic_heat_kernel(n, t)
            mass = kernels.surface_constant(n) * np.sum(
                w * np.real(g.evaluate(r)) * np.sinh(r) ** (2 * n))
            worst_gamma = max(worst_gamma, abs(mass - 1.0))

            ks = kernels.build_kernels(kernels.ModelParams(n, t))
            N = 512
            rm = (np.arange(N) + 0.5) * (2 * math.pi / N)
            rho_mass = kernels.surface_constant(n) * 0.5 * np.sum(
                np.real(ks.rho_t(rm)) * np.sin(rm) ** (2 * n)) * (2 * math.pi
                                                                  / N)
            worst_rho = max(worst_rho, abs(rho_mass - 1.0))

            # independent periodization with a larger wrap count
            pts = np.array([0.4, 1.0, 2.2, 4.0])
            big = kernels.PeriodizedKernel(ks.nu_t, t, ks.wrap_K + 4)
            worst_per = max(worst_per,
                            float(np.max(np.abs(ks.rho_t(pts) - big(pts)))))
    ok = worst_gamma <= 1e-8 and worst_rho <= 1e-6 and worst_per <= 1e-8
    _report(2, "kernel normalizations", ok,
            f"gamma={worst_gamma:.1e} rho={worst_rho:.1e} "
            f"periodization={worst_per:.1e}")


def test_criterion_3_pole_structure():
    ok = True
    detail = []
    for n in STANDARD_NS:
        nu = kernels.unwrapped_heat_kernel(n, 1.0)
        for m in (1, 2):
            order = trigexpr.pole_order_at(nu, m)
            ok = ok and order == 2 * n - 1
            detail.append(f"n{n}m{m}={order}")
    # n=1: I(R) finite at R = pi, 2pi (direct real-axis quadrature)
    p = _family_profile("gauss_quarter", 1)
    finite = True
    for R in (math.pi, 2 * math.pi):
        v = limits.isometry_direct_real(p, 1.0, R, num=220)
        finite = finite and bool(np.isfinite(v.real)) and abs(v) < 100.0
    ok = ok and finite
    _report(3, "pole structure", ok,
            " ".join(detail) + f" I(m*pi) finite={finite}")


def test_criterion_4_spherical_heat_limit():
    worst = 0.0
    for n in STANDARD_NS:
        for lam in (0.0, 1.0, 2.5):
            for t in STANDARD_TS:
                rep = limits.spher_heat_limit_check(lam, t, n)
                worst = max(worst, rep.residual / abs(rep.target))
    R = 3.5 * math.pi + 0.3j
    v1 = limits.spher_heat_integral(
        1.0, 0.5, limits.build_contour(R, detour_radius=0.4), 2)
    v2 = limits.spher_heat_integral(
        1.0, 0.5, limits.build_contour(R, detour_radius=0.7), 2)
    path_err = abs(v1 - v2)
    ok = worst <= 1e-5 and path_err <= 1e-9
    _report(4, "spherical-heat limit", ok,
            f"rel_resid={worst:.1e} path_indep={path_err:.1e}")


def test_criterion_5_isometry():
    worst = 0.0
    for key in _family_keys():
        for n in STANDARD_NS:
            for t in STANDARD_TS:
                p = _family_profile(key, n)
                rep = limits.isometry_limit_check(p, t)
                worst = max(worst, rep.residual)
    p1 = _family_profile("gauss_quarter", 1)
    direct = limits.isometry_direct_real(p1, 1.0, 1.0)
    spectral_val = limits.isometry_I(p1, 1.0, limits.build_contour(1.0))
    small_R = abs(direct - spectral_val)
    ok = worst <= 1e-4 and small_R <= 1e-6
    _report(5, "isometry", ok,
            f"worst_rel_resid={worst:.1e} small_R={small_R:.1e}")


def test_criterion_6_ibp_and_boundary_decay():
    recon = 0.0
    p = _family_profile("gauss_quarter", 2)
    t = 1.0
    for R in (2.0, 5.0, 2.5 * math.pi + 0.3j):
        total = limits.isometry_I(p, t, limits.build_contour(R))
        bulk, bd = limits.isometry_ibp(p, t, R)
        recon = max(recon, abs(total - (bulk + sum(bd))))

    def fit_C(nlam):
        C = 0.0
        for lam in np.linspace(1.2, 5.0, nlam):
            for R in limits.default_R_sequence(1, 6):
                B = limits.boundary_pointwise(lam, 2, t, R)
                C = max(C, max(abs(b) for b in B) * abs(R)
                        / math.exp(t * lam * lam))
        return C

    C1, C2 = fit_C(8), fit_C(15)
    stable = np.isfinite(C2) and abs(C2 - C1) <= 0.05 * C1 + 1e-12

    maxima = []
    for R in limits.default_R_sequence(1, 6):
        _, bd = limits.isometry_ibp(p, t, R)
        maxima.append(max(abs(b) for b in bd))
    decays = all(m2 < m1 for m1, m2 in zip(maxima, maxima[1:]))
    ok = recon <= 1e-8 and stable and decays
    _report(6, "IBP reconstruction and boundary decay", ok,
            f"recon={recon:.1e} C={C1:.2f}->{C2:.2f} decays={decays}")


def test_criterion_7_inversion():
    worst = 0.0
    agree = 0.0
    for key in _family_keys():
        for n in STANDARD_NS:
            for t in STANDARD_TS:
                p = _family_profile(key, n)
                rep = limits.inversion_limit_check(p, t)
                worst = max(worst, rep.residual)
                gi = limits.general_inversion_rank1(p, t)
                agree = max(agree, abs(gi - np.real(rep.extrapolated))
                            / max(abs(gi), 1e-300))
    # time-halving identity: same code path, identical arrays
    p = _family_profile("gauss_quarter", 1)
    path = limits.build_contour(2.5 * math.pi + 0.3j)
    same = np.array_equal(
        limits.inner_integral_matrix(p.grid[:50], 0.5, path, 1),
        limits.inner_integral_matrix(p.grid[:50], 1.0 / 2, path, 1))
    ok = worst <= 1e-4 and agree <= 1e-5 and same
    _report(7, "inversion", ok,
            f"worst_rel_resid={worst:.1e} general_agree={agree:.1e} "
            f"halving={same}")


def test_criterion_8_surjectivity():
    t = 1.0
    p = _family_profile("gauss_quarter", 1)
    F = spectral.heat_multiplier(p, t)
    rep = limits.surjectivity_diagnostic(F, t)
    rec = float(np.max(np.abs(rep.recovered.values - p.values)))
    good = rep.verdict == "finite" and rec <= 1e-6

    grid, w = spectral.gauss_legendre_grid(8.0 / math.sqrt(0.5), 400)
    bad_p = spectral.profile_from_fhat(
        lambda lam: np.exp(-t * (lam ** 2 + 1) / 4), 1, grid, w)
    bad = limits.surjectivity_diagnostic(bad_p, t).verdict == "divergent"
    ok = good and bad
    _report(8, "surjectivity diagnostic", ok,
            f"finite_recovery={rec:.1e} divergent_detected={bad}")


def test_criterion_9_estimates():
    def fit_phi_C(nlam, nr):
        C = 0.0
        for n in STANDARD_NS:
            for lvl in range(0, n + 1):
                for lam in np.linspace(0.0, 6.0, nlam):
                    r = np.linspace(0.05, 2.5, nr)
                    vals = np.abs(spherical.phi_i_derivative(lam, n, r,
                                                             l=lvl))
                    rhs = np.array([spherical.estimate_rhs(lam, ri, lvl, n,
                                                           1.0) for ri in r])
                    C = max(C, float(np.max(vals / rhs)))
        return C

    C1, C2 = fit_phi_C(7, 15), fit_phi_C(13, 29)
    phi_stable = np.isfinite(C2) and abs(C2 - C1) <= 0.05 * C1 + 1e-12
    g_passed, gC, gC2 = limits.gauss_sup_bound_check(1.0, 2,
                                                     np.arange(1, 11))
    ok = phi_stable and g_passed
    _report(9, "spherical and Gaussian estimates", ok,
            f"phi_C={C1:.3g}->{C2:.3g} gauss_C={gC:.3g}->{gC2:.3g}")
