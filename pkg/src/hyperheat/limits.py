"""Contours avoiding the poles at m*pi, and the meromorphic limits I(R), J(R).

The unwrapped heat kernel nu_{2t} has poles at nonzero multiples of pi, so
the radial integrals behind the isometry and inversion identities are taken
along paths that detour around each pole inside the strip

    S_{eps,A} = { Re R > 0, |Im R| < A, |R - m*pi| > eps for all m >= 1 }.

Limits as Re R -> +infinity are extracted from a canonical mid-gap sequence
R_j = (j + 1/2) pi + 0.3i by fitting a + c/R (the boundary terms of the
integration by parts decay like 1/R, so a one-term Richardson model is the
right asymptotic form).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import (DivergenceDetected, InvalidTarget, NonConvergence,
                     PoleError, ToleranceNotMet)
from .kernels import adjoint_decompose, flat_weight, surface_constant, \
    unwrapped_heat_kernel
from .spectral import SpectralProfile, gauss_legendre_grid
from .spherical import CONTINUED, phi_expr

DEFAULT_EPSILON = 0.3
DEFAULT_A = 1.0
DEFAULT_DETOUR = 0.5
DEFAULT_SEGMENT_ORDER = 60


# ---------------------------------------------------------------------------
# pole region and contours


@dataclass(frozen=True)
class PoleRegion:
    epsilon: float = DEFAULT_EPSILON
    A: float = DEFAULT_A

    def __post_init__(self):
        if not (0 < self.epsilon < self.A < math.pi):
            raise ValueError("need 0 < epsilon < A < pi")

    def membership(self, R: complex) -> bool:
        R = complex(R)
        if R.real <= 0 or abs(R.imag) >= self.A:
            return False
        m = max(1, round(R.real / math.pi))
        for mm in (m - 1, m, m + 1):
            if mm >= 1 and abs(R - mm * math.pi) <= self.epsilon:
                return False
        return True

    def __contains__(self, R) -> bool:
        return self.membership(R)


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, s):
        return self.start + (self.end - self.start) * s

    def deriv(self, s):
        return (self.end - self.start) * np.ones_like(np.asarray(s))


@dataclass(frozen=True)
class Arc:
    """Circular arc z = center + radius * exp(i theta), theta0 -> theta1."""
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(s)
        return self.center + self.radius * np.exp(1j * th)

    def deriv(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(s)
        return 1j * (self.theta1 - self.theta0) * self.radius * np.exp(1j * th)


@dataclass(frozen=True)
class ContourPath:
    segments: tuple

    @property
    def start(self) -> complex:
        return complex(self.segments[0].point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.segments[-1].point(1.0))

    def nodes(self, order: int = DEFAULT_SEGMENT_ORDER):
        """Gauss-Legendre nodes z and weights (including dz) over the path."""
        x, w = np.polynomial.legendre.leggauss(order)
        s = 0.5 * (x + 1.0)
        zs, ws = [], []
        for seg in self.segments:
            zs.append(seg.point(s))
            ws.append(0.5 * w * seg.deriv(s))
        return np.concatenate(zs), np.concatenate(ws)


def build_contour(R_target: complex, region: PoleRegion | None = None,
                  detour_radius: float = DEFAULT_DETOUR) -> ContourPath:
    """Real-axis segments joined by upper semicircles over each m*pi passed."""
    if region is None:
        region = PoleRegion()
    R_target = complex(R_target)
    if not region.membership(R_target):
        raise InvalidTarget(f"target {R_target} outside the pole-free region")
    if not (region.epsilon < detour_radius < region.A):
        raise ValueError("need epsilon < detour_radius < A")
    segs = []
    pos = 0.0 + 0.0j
    m = 1
    while m * math.pi + detour_radius < R_target.real:
        pole = m * math.pi
        if pole - detour_radius > pos.real:
            segs.append(Line(pos, pole - detour_radius))
        segs.append(Arc(pole, detour_radius, math.pi, 0.0))
        pos = pole + detour_radius + 0.0j
        m += 1
    if m * math.pi < R_target.real:
        raise InvalidTarget(
            f"target {R_target} lies within the detour radius of {m}*pi")
    if R_target != pos:
        segs.append(Line(pos, R_target))
    return ContourPath(tuple(segs))


def contour_quad(integrand: Callable, path: ContourPath,
                 tol: float = 1e-10) -> complex:
    """Adaptive quadrature segment by segment (Gauss-Kronrod via QUADPACK)."""
    total = 0.0 + 0.0j
    err = 0.0
    for seg in path.segments:
        def re_part(s):
            return np.real(integrand(seg.point(s)) * seg.deriv(s))

        def im_part(s):
            return np.imag(integrand(seg.point(s)) * seg.deriv(s))

        vr, er = integrate.quad(re_part, 0.0, 1.0, epsabs=tol, epsrel=tol,
                                limit=200)
        vi, ei = integrate.quad(im_part, 0.0, 1.0, epsabs=tol, epsrel=tol,
                                limit=200)
        total += vr + 1j * vi
        err += er + ei
    if err > 10 * tol * max(1.0, len(path.segments)):
        raise ToleranceNotMet(f"achieved error estimate {err:.2e} > tol {tol}")
    return total


# ---------------------------------------------------------------------------
# spherical-heat integral and its limit


def spher_heat_integral(lam: float, t: float, path: ContourPath, n: int,
                        tol: float = 1e-10) -> complex:
    """c_n int_path phi_{lam,n}(ir) nu_{2t}(r) sin^{2n} r dr (adaptive)."""
    nu = unwrapped_heat_kernel(n, 2.0 * t)
    phi = phi_expr(float(lam), n, CONTINUED)
    c_n = surface_constant(n)

    def integrand(z):
        return (c_n * phi.evaluate(z, pole_guard=0.0)
                * nu.evaluate(z, pole_guard=0.0) * np.sin(z) ** (2 * n))

    return contour_quad(integrand, path, tol=tol)


def inner_integral_matrix(lams, t: float, path: ContourPath, n: int,
                          order: int = DEFAULT_SEGMENT_ORDER) -> np.ndarray:
    """spher_heat_integral for every lam at once, fixed-order quadrature."""
    z, w = path.nodes(order)
    nu = unwrapped_heat_kernel(n, 2.0 * t)
    base = surface_constant(n) * w * nu.evaluate(z, pole_guard=0.0) \
        * np.sin(z) ** (2 * n)
    out = np.empty(len(lams), dtype=complex)
    for i, lam in enumerate(np.asarray(lams, dtype=float)):
        phi = phi_expr(float(lam), n, CONTINUED).evaluate(z, pole_guard=0.0)
        out[i] = np.sum(base * phi)
    return out


def default_R_sequence(j_start: int = 2, j_end: int = 8,
                       imag_offset: float = 0.3) -> list[complex]:
    """Mid-gap targets R_j = (j + 1/2) pi + i*imag_offset."""
    return [(j + 0.5) * math.pi + 1j * imag_offset
            for j in range(j_start, j_end + 1)]


def extrapolate_limit(R_values: Sequence[complex],
                      values: Sequence[complex],
                      tail: int = 4) -> complex:
    """Weighted least-squares fit of values ~ a + c/R; returns a.

    Only the last ``tail`` targets enter the fit (1/R is an upper bound on
    the boundary decay; the actual approach is usually much faster, so the
    early targets would only bias the constant term).  Weights |R| favor the
    far targets within the tail.
    """
    R = np.asarray(R_values, dtype=complex)[-tail:]
    v = np.asarray(values, dtype=complex)[-tail:]
    wt = np.abs(R)
    design = np.stack([np.ones_like(R), 1.0 / R], axis=1)
    sol, *_ = np.linalg.lstsq(design * wt[:, None], v * wt, rcond=None)
    return complex(sol[0])


@dataclass(frozen=True)
class LimitReport:
    params: dict
    R_sequence: tuple
    values: tuple
    extrapolated: complex
    target: complex
    residual: float
    boundary_max: float
    quad_error: float
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "R_sequence": [[R.real, R.imag] for R in self.R_sequence],
            "values": [[v.real, v.imag] for v in self.values],
            "extrapolated": [self.extrapolated.real, self.extrapolated.imag],
            "target": [self.target.real, self.target.imag],
            "residual": self.residual,
            "boundary_max": self.boundary_max,
            "quad_error": self.quad_error,
            "tolerance": self.tolerance,
        }


def _check_convergence(residuals: Sequence[float], scale: float = 1.0):
    """Residuals must decrease over the last 3 targets, unless they already
    sit at the quadrature noise floor (relative 1e-9 of the target scale)."""
    if len(residuals) >= 3:
        tail = residuals[-3:]
        floor = 1e-9 * max(abs(scale), 1e-300)
        if not (tail[-1] < tail[0] * 1.001 + floor):
            raise NonConvergence(
                f"residuals {tail} fail to decrease along the last 3 targets")


def spher_heat_limit_check(lam: float, t: float, n: int,
                           region: PoleRegion | None = None,
                           R_sequence: Sequence[complex] | None = None,
                           detour_radius: float = DEFAULT_DETOUR,
                           order: int = DEFAULT_SEGMENT_ORDER,
                           tolerance: float = 1e-6) -> LimitReport:
    """Runs the spherical-heat integral along increasing targets; the limit
    must be e^{t(lam^2 + n^2)}."""
    if region is None:
        region = PoleRegion()
    if R_sequence is None:
        R_sequence = default_R_sequence()
    values = []
    for R in R_sequence:
        path = build_contour(R, region, detour_radius)
        values.append(complex(
            inner_integral_matrix([lam], t, path, n, order=order)[0]))
    target = complex(math.exp(t * (lam * lam + n * n)))
    resids = [abs(v - target) for v in values]
    _check_convergence(resids, abs(target))
    extrap = extrapolate_limit(R_sequence, values)
    return LimitReport(
        params={"lam": lam, "t": t, "n": n, "epsilon": region.epsilon,
                "A": region.A, "detour_radius": detour_radius},
        R_sequence=tuple(R_sequence), values=tuple(values),
        extrapolated=extrap, target=target,
        residual=abs(extrap - target), boundary_max=float("nan"),
        quad_error=resids[-1], tolerance=tolerance)


# ---------------------------------------------------------------------------
# orbital integral, isometry, inversion


def _spectral_weight(p: SpectralProfile, t: float, power: float = 1.0):
    """w * |or plain| measure factors shared by the integrals below."""
    return p.weights * p.density(p.grid) * np.exp(
        -power * t * (p.grid ** 2 + p.n ** 2))


def orbital_integral(p: SpectralProfile, t: float, r) -> complex:
    """int |f-hat|^2 e^{-t(lam^2+n^2)} phi_lam(ir) dmu (spectral side)."""
    phi = np.array([phi_expr(float(lam), p.n, CONTINUED).evaluate(r)
                    for lam in p.grid])
    return complex(2.0 * np.sum(_spectral_weight(p, t)
                                * np.abs(p.values) ** 2 * phi))


def isometry_I(p: SpectralProfile, t: float, path: ContourPath,
               order: int = DEFAULT_SEGMENT_ORDER) -> complex:
    """I(R) = int |f-hat|^2 e^{-t(lam^2+n^2)} (inner contour integral) dmu."""
    inner = inner_integral_matrix(p.grid, t, path, p.n, order=order)
    return complex(2.0 * np.sum(_spectral_weight(p, t)
                                * np.abs(p.values) ** 2 * inner))


def inversion_J(p: SpectralProfile, t: float, path: ContourPath,
                order: int = DEFAULT_SEGMENT_ORDER) -> complex:
    """J(R) = int f-hat e^{-t(lam^2+n^2)/2} (inner integral at t/2) dmu.

    The inner bracket is the same routine as the isometry inner integral with
    t replaced by t/2, which is the factor-of-two duality between the two
    identities.
    """
    inner = inner_integral_matrix(p.grid, 0.5 * t, path, p.n, order=order)
    return complex(2.0 * np.sum(_spectral_weight(p, t, power=0.5)
                                * p.values * inner))


def isometry_direct_real(p: SpectralProfile, t: float, R: float,
                         num: int = 200) -> complex:
    """Direct polar form of I(R) for real R: the nested-quadrature oracle

        c_n int_0^R O(ir) nu_{2t}(r) sin^{2n} r dr

    with O the spectral orbital integral.  Independent of the contour code
    path (no Fubini swap, no detours); valid wherever the real segment stays
    off the poles or the integrand is regular (n = 1)."""
    r, w = gauss_legendre_grid(float(R), num)
    nu = unwrapped_heat_kernel(p.n, 2.0 * t)
    orb = np.array([orbital_integral(p, t, ri) for ri in r])
    vals = nu.evaluate(r, pole_guard=0.0) * np.sin(r) ** (2 * p.n)
    return complex(surface_constant(p.n) * np.sum(w * orb * vals))


def isometry_ibp(p: SpectralProfile, t: float, R: complex,
                 order: int = 120):
    """Split I(R) into an entire bulk plus boundary terms.

    Returns (bulk, boundary) with bulk + sum(boundary) = isometry_I to
    quadrature tolerance.  bulk integrates 2 cosh(lam r) w_t(r) along the
    straight segment [0, R] (entire integrand, no detours); boundary[j] is
    the lam-integrated j-th integration-by-parts endpoint term.
    """
    n = p.n
    w_t = flat_weight(n, t)
    R = complex(R)
    # straight-line nodes for the entire bulk integrand
    x, gw = np.polynomial.legendre.leggauss(order)
    z = 0.5 * R * (x + 1.0)
    zw = 0.5 * R * gw
    wt_vals = w_t.evaluate(z, pole_guard=0.0)
    spec = _spectral_weight(p, t) * np.abs(p.values) ** 2
    bulk = 0.0 + 0.0j
    boundary = np.zeros(n, dtype=complex)
    for i, lam in enumerate(np.asarray(p.grid, dtype=float)):
        phi = phi_expr(float(lam), n, CONTINUED)
        bterms, _ = adjoint_decompose(phi, w_t, R, n)
        boundary += 2.0 * spec[i] * np.asarray(bterms)
        lam_bulk = np.sum(zw * 2.0 * np.cosh(lam * z) * wt_vals)
        bulk += 2.0 * spec[i] * lam_bulk
    return complex(bulk), [complex(b) for b in boundary]


def boundary_pointwise(lam: float, n: int, t: float, R: complex) -> np.ndarray:
    """The raw lam-pointwise boundary terms of the decomposition at R."""
    bterms, _ = adjoint_decompose(phi_expr(float(lam), n, CONTINUED),
                                  flat_weight(n, t), complex(R), n)
    return np.asarray(bterms)


def isometry_limit_check(p: SpectralProfile, t: float,
                         region: PoleRegion | None = None,
                         R_sequence: Sequence[complex] | None = None,
                         detour_radius: float = DEFAULT_DETOUR,
                         order: int = DEFAULT_SEGMENT_ORDER,
                         tolerance: float = 1e-4) -> LimitReport:
    """lim I(R) against the Plancherel norm of f."""
    from .spectral import plancherel_norm
    if region is None:
        region = PoleRegion()
    if R_sequence is None:
        R_sequence = default_R_sequence()
    values, boundary_max = [], 0.0
    for R in R_sequence:
        path = build_contour(R, region, detour_radius)
        values.append(isometry_I(p, t, path, order=order))
        _, bterms = isometry_ibp(p, t, R, order=order)
        boundary_max = max(boundary_max, max((abs(b) for b in bterms),
                                             default=0.0))
    target = complex(plancherel_norm(p))
    resids = [abs(v - target) for v in values]
    _check_convergence(resids, abs(target))
    extrap = extrapolate_limit(R_sequence, values)
    return LimitReport(
        params={"t": t, "n": p.n, "epsilon": region.epsilon, "A": region.A,
                "detour_radius": detour_radius, "kind": "isometry"},
        R_sequence=tuple(R_sequence), values=tuple(values),
        extrapolated=extrap, target=target,
        residual=abs(extrap - target) / max(abs(target), 1e-300),
        boundary_max=boundary_max, quad_error=resids[-1],
        tolerance=tolerance)


def inversion_limit_check(p: SpectralProfile, t: float,
                          region: PoleRegion | None = None,
                          R_sequence: Sequence[complex] | None = None,
                          detour_radius: float = DEFAULT_DETOUR,
                          order: int = DEFAULT_SEGMENT_ORDER,
                          tolerance: float = 1e-4) -> LimitReport:
    """lim J(R) against f(0) = inverse_transform(p, 0)."""
    from .spectral import inverse_transform
    if region is None:
        region = PoleRegion()
    if R_sequence is None:
        R_sequence = default_R_sequence()
    values = []
    for R in R_sequence:
        path = build_contour(R, region, detour_radius)
        values.append(inversion_J(p, t, path, order=order))
    target = inverse_transform(p, 0.0)
    resids = [abs(v - target) for v in values]
    _check_convergence(resids, abs(target))
    extrap = extrapolate_limit(R_sequence, values)
    return LimitReport(
        params={"t": t, "n": p.n, "epsilon": region.epsilon, "A": region.A,
                "detour_radius": detour_radius, "kind": "inversion"},
        R_sequence=tuple(R_sequence), values=tuple(values),
        extrapolated=extrap, target=target,
        residual=abs(extrap - target) / max(abs(target), 1e-300),
        boundary_max=float("nan"), quad_error=resids[-1],
        tolerance=tolerance)


def general_inversion_rank1(p: SpectralProfile, t: float,
                            num_y: int = 400) -> float:
    """Contour-free inversion: the flat Gaussian average of the cosh-smoothed
    spectral integral,

        e^{t n^2/2} int_R [int cosh(lam y) e^{-t(lam^2+n^2)/2} f-hat dmu]
                        e^{-y^2/(2t)} / (2 pi t)^{1/2} dy = f(0).

    The integrand is entire, so no pole detours arise (rank one: psi_lam(ir)
    = cosh(lam r), |W| = 2).
    """
    if len(p.grid) == 0:
        return 0.0
    y_max = p.lam_max * t + 8.0 * math.sqrt(t)
    y, wy = gauss_legendre_grid(y_max, num_y)
    spec = _spectral_weight(p, t, power=0.5) * p.values
    inner = np.empty(len(y), dtype=complex)
    lam = p.grid[None, :]
    inner = 2.0 * np.sum(spec[None, :] * np.cosh(lam * y[:, None]), axis=1)
    gauss = np.exp(-y * y / (2.0 * t)) / math.sqrt(2.0 * math.pi * t)
    # integrand even in y: fold the line onto [0, y_max]
    total = 2.0 * np.sum(wy * gauss * inner)
    return float(np.real(math.exp(0.5 * t * p.n ** 2) * total))


# ---------------------------------------------------------------------------
# surjectivity diagnostic


@dataclass(frozen=True)
class SurjectivityReport:
    verdict: str                      # "finite" | "divergent"
    cutoffs: tuple
    partials: tuple
    recovered: SpectralProfile = field(compare=False)


def surjectivity_diagnostic(q: SpectralProfile, t: float,
                            cutoffs: Sequence[float] | None = None,
                            cap: float = 1e30,
                            rtol: float = 1e-6) -> SurjectivityReport:
    """Monotone cutoff test of whether F is the heat evolution of an L^2 f.

    For each cutoff eps the truncated profile F_eps (spectrum below 1/eps)
    has lim_R I(R; F_eps) = int_{lam < 1/eps} |F-hat|^2 e^{t(lam^2+n^2)} dmu,
    evaluated here by the direct spectral formula.  The partials increase
    monotonically; the verdict is finite when they stabilize, divergent when
    they keep growing.  On success the recovered profile is
    f-hat = F-hat e^{t(lam^2+n^2)/2}.
    """
    if cutoffs is None:
        # cutoffs chosen so 1/eps sweeps up to the profile's own lam_max;
        # beyond the grid no divergence could be observed anyway
        top = max(q.lam_max, 1.0)
        cutoffs = [1.0 / (frac * top) for frac in np.linspace(0.3, 1.0, 8)]
    growth = np.exp(t * (q.grid ** 2 + q.n ** 2))
    base = 2.0 * q.weights * q.density(q.grid) * np.abs(q.values) ** 2 * growth
    partials = []
    for eps in cutoffs:
        mask = q.grid < 1.0 / eps
        partials.append(float(np.sum(base[mask])))
    if partials and partials[-1] > cap:
        increments = np.diff(partials)
        if len(increments) == 0 or increments[-1] > 0:
            raise DivergenceDetected(
                f"partial integrals exceed cap {cap:.1e} with positive trend")
    if len(partials) >= 2 and partials[-1] > 0:
        rel = (partials[-1] - partials[-2]) / partials[-1]
        verdict = "finite" if rel < rtol else "divergent"
    else:
        verdict = "finite"
    recovered = q.with_values(
        q.values * np.exp(0.5 * t * (q.grid ** 2 + q.n ** 2)))
    return SurjectivityReport(verdict, tuple(cutoffs), tuple(partials),
                              recovered)


# ---------------------------------------------------------------------------
# Gaussian sup estimate


def gauss_sup_bound_check(a: float, m: int, lam_grid,
                          region: PoleRegion | None = None,
                          num_R: int = 2000, R_max: float = 40.0):
    """Fit C with sup_R |e^{lam R} R^m e^{-a R^2/2}| <= C (1+lam^m) e^{lam^2/(2a)}.

    The sup runs over real R in the region; returns (passed, C, C_refined)
    where refinement doubles the R grid and must not move C by more than 1%.
    """
    if a <= 0 or m < 0:
        raise ValueError("need a > 0 and m >= 0")
    if region is None:
        region = PoleRegion()

    def fitted_C(nR: int) -> float:
        R = np.linspace(1e-3, R_max, nR)
        keep = np.array([region.membership(complex(r)) for r in R])
        R = R[keep]
        C = 0.0
        for lam in np.asarray(lam_grid, dtype=float):
            sup = np.max(np.exp(lam * R - 0.5 * a * R * R) * R ** m)
            bound = (1.0 + lam ** m) * math.exp(lam * lam / (2.0 * a))
            C = max(C, sup / bound)
        return C

    C = fitted_C(num_R)
    C2 = fitted_C(2 * num_R)
    passed = math.isfinite(C2) and abs(C2 - C) <= 0.01 * max(C, 1e-300)
    return passed, C, C2
