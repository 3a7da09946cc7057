"""Heat kernels of R, H^{2n+1}, S^{2n+1} and the four shift operators.

All four heat objects are built symbolically, so they evaluate anywhere on a
complex contour:

    nu_t    = L^n [ e^{t n^2/2} (2 pi t)^{-1/2} e^{-r^2/(2t)} ]   (circular)
    gamma_t = L^n [ e^{-t n^2/2} (2 pi t)^{-1/2} e^{-r^2/(2t)} ]  (hyperbolic)
    w_t     = e^{t n^2} (4 pi t)^{-1/2} e^{-r^2/(4t)}
    rho_t   = 2 pi periodization of nu_t (truncated at wrap count K)

with L = -(1/(2 pi)) (1/s(r)) d/dr.  The adjoint identity relating the
forward operators (D, D-tilde) to L^n is realized by adjoint_decompose, which
returns the explicit boundary terms of the repeated integration by parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._series import factorial2
from .errors import DifferentiationFailure
from .trigexpr import (CIRCULAR, HYPERBOLIC, SymExpr, SymTerm, expr)

TWO_PI = 2.0 * math.pi


def surface_constant(n: int) -> float:
    """c_n = 2 (2 pi)^n / (2n-1)!!, the area of the unit sphere in R^{2n+1}."""
    return 2.0 * TWO_PI ** n / factorial2(2 * n - 1)


@dataclass(frozen=True)
class ModelParams:
    n: int
    t: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.t <= 0:
            raise ValueError("t must be positive")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def delta(self) -> float:
        return float(self.n)

    @property
    def flat_dim(self) -> int:
        return 1

    @property
    def c_n(self) -> float:
        return surface_constant(self.n)


def gaussian_expr(variance: float, flavor: str = CIRCULAR) -> SymExpr:
    """(2 pi v)^{-1/2} exp(-r^2/(2 v)) with an exact dyadic Gaussian rate."""
    rate = Fraction(1, 2) / Fraction(variance)
    coeff = float(variance) ** -0.5
    return expr(flavor, [SymTerm(coeff, Fraction(-1, 2), rate, 0, 0, 0)])


def apply_adjoint_shift(e: SymExpr, n: int) -> SymExpr:
    """L^n in the flavor of e (D* for hyperbolic, D-tilde* for circular)."""
    for _ in range(n):
        e = e.apply_L()
    return e


def apply_forward_shift(e, n: int):
    """(1/(2n-1)!!) prod_{k=1}^n (s(r) d/dr + (2k-1) c(r)), larger k applied
    first.  Duck-typed: works on SymExpr and on spherical closed forms."""
    for k in range(n, 0, -1):
        e = e.differentiate().mul_s() + e.mul_c().scale(float(2 * k - 1))
    return e.scale(1.0 / factorial2(2 * n - 1))


def unwrapped_heat_kernel(n: int, t: float) -> SymExpr:
    return apply_adjoint_shift(
        gaussian_expr(t, CIRCULAR).scale(math.exp(0.5 * t * n * n)), n)


def hyperbolic_heat_kernel(n: int, t: float) -> SymExpr:
    return apply_adjoint_shift(
        gaussian_expr(t, HYPERBOLIC).scale(math.exp(-0.5 * t * n * n)), n)


def flat_weight(n: int, t: float) -> SymExpr:
    """w_t: the Gaussian weight whose L^n image is nu_{2t}."""
    return gaussian_expr(2 * t, CIRCULAR).scale(math.exp(0.5 * (2 * t) * n * n))


class PeriodizedKernel:
    """2 pi periodization of nu_t, truncated at |j| <= K."""

    def __init__(self, nu: SymExpr, t: float, wrap_K: int):
        self.nu = nu
        self.wrap_K = wrap_K
        # Gaussian tail of the first discarded translate
        self.tail_bound = math.exp(-(2 * math.pi * wrap_K - math.pi) ** 2
                                   / (2 * t))

    def __call__(self, r, pole_guard: float = 1e-8):
        acc = None
        for j in range(-self.wrap_K, self.wrap_K + 1):
            v = self.nu.evaluate(np.asarray(r, dtype=complex) - TWO_PI * j,
                                 pole_guard=pole_guard)
            acc = v if acc is None else acc + v
        return acc


@dataclass(frozen=True)
class KernelSet:
    params: ModelParams
    wrap_K: int
    euclid: SymExpr
    nu_t: SymExpr
    gamma_t: SymExpr
    w_t: SymExpr
    rho_t: PeriodizedKernel = field(compare=False)


def build_kernels(p: ModelParams, wrap_K: int = 8) -> KernelSet:
    if wrap_K < 3:
        raise ValueError("wrap_K must be at least 3")
    nu = unwrapped_heat_kernel(p.n, p.t)
    return KernelSet(
        params=p,
        wrap_K=wrap_K,
        euclid=gaussian_expr(p.t, CIRCULAR),
        nu_t=nu,
        gamma_t=hyperbolic_heat_kernel(p.n, p.t),
        w_t=flat_weight(p.n, p.t),
        rho_t=PeriodizedKernel(nu, p.t, wrap_K),
    )


# ---------------------------------------------------------------------------
# numeric fallback derivatives for plain callables


def complex_step_derivative(f: Callable, x: float, h: float = 1e-20) -> float:
    """First derivative of a real-analytic f at real x; exact to roundoff."""
    return float(np.imag(f(x + 1j * h)) / h)


def _numeric_derivative(f: Callable, r, h: float = 1e-2):
    # 4th-order central difference; adequate for the callable fallback only
    v = (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)
    if np.any(np.isnan(np.asarray(v, dtype=complex))):
        raise DifferentiationFailure("finite differences returned NaN")
    return v


class _NumericRadial:
    """Wrap a plain callable in the expression protocol (numeric derivatives)."""

    def __init__(self, f: Callable, flavor: str, order: int = 0):
        self.f = f
        self.flavor = flavor
        self.order = order

    def differentiate(self):
        g = self.f
        return _NumericRadial(lambda r: _numeric_derivative(g, r),
                              self.flavor, self.order + 1)

    def _wrap(self, op):
        g = self.f
        return _NumericRadial(lambda r: op(r) * g(r), self.flavor, self.order)

    def mul_s(self):
        return self._wrap(np.sin if self.flavor == CIRCULAR else np.sinh)

    def mul_c(self):
        return self._wrap(np.cos if self.flavor == CIRCULAR else np.cosh)

    def scale(self, c):
        g = self.f
        return _NumericRadial(lambda r: c * g(r), self.flavor, self.order)

    def __add__(self, other):
        g, h = self.f, other.f
        return _NumericRadial(lambda r: g(r) + h(r), self.flavor, self.order)

    def evaluate(self, r, pole_guard: float = 0.0):
        return self.f(r)


def apply_shift_D(f, n: int, r, flavor: str = HYPERBOLIC):
    """Apply D (hyperbolic) or D-tilde (circular) to f and evaluate at r.

    f may be an expression object (symbolic, exact) or a plain callable, in
    which case derivatives fall back to finite differences.
    """
    if not hasattr(f, "differentiate"):
        f = _NumericRadial(f, flavor)
    out = apply_forward_shift(f, n)
    return out.evaluate(r)


# ---------------------------------------------------------------------------
# adjoint identity with explicit boundary terms


def adjoint_decompose(f, g: SymExpr, R, n: int):
    """Integration by parts of c_n int_0^R f (L^n g) s^{2n} dr.

    Returns (boundary_terms, bulk_integrand) with the contract

        c_n int_0^R f (L^n g) s^{2n} dr
            = sum(boundary_terms) + int_0^R bulk_integrand(r) dr,

    bulk_integrand(r) = 2 (Df)(r) g(r).  Each boundary term is evaluated at R
    only; the endpoint contribution at 0 vanishes for even f, g.
    """
    flavor = g.flavor
    s_at_R = np.sin(R) if flavor == CIRCULAR else np.sinh(R)
    g_powers = [g]
    for _ in range(n):
        g_powers.append(g_powers[-1].apply_L())
    boundary = []
    fj = f
    for j in range(n):
        k = n - j - 1
        c_next = surface_constant(k + 1)
        b = (-(c_next / TWO_PI) * s_at_R ** (2 * k + 1)
             * fj.evaluate(R) * g_powers[k].evaluate(R))
        boundary.append(complex(b))
        fj = (fj.differentiate().mul_s()
              + fj.mul_c().scale(float(2 * k + 1))).scale(1.0 / (2 * k + 1))
    fn = fj

    def bulk_integrand(r):
        return 2.0 * fn.evaluate(r) * g.evaluate(r)

    return boundary, bulk_integrand


# ---------------------------------------------------------------------------
# intertwining diagnostics


def radial_laplacian(e, n: int):
    """e'' + 2n (c(r)/s(r)) e' in the flavor of e."""
    d = e.differentiate()
    return d.differentiate() + d.mul_c().div_s().scale(float(2 * n))


def verify_intertwining(n: int, flavor: str, f, operator: str = "adjoint",
                        grid: Sequence[float] | None = None) -> float:
    """Max-residual check of the four intertwining identities.

    operator="adjoint" checks L^n (D* or D-tilde*); operator="forward" checks
    D or D-tilde.  flavor picks hyperbolic (sign -n^2) vs circular (+n^2).
    """
    if grid is None:
        grid = np.linspace(0.2, 2.9, 30)
    grid = np.asarray(grid, dtype=float)
    sign = -1.0 if flavor == HYPERBOLIC else 1.0

    def flat_shift(e):
        d2 = e.differentiate().differentiate()
        return d2 + e.scale(sign * n * n)

    if operator == "adjoint":
        lhs = radial_laplacian(apply_adjoint_shift_like(f, n), n)
        rhs = apply_adjoint_shift_like(flat_shift(f), n)
    elif operator == "forward":
        lhs = apply_forward_shift(radial_laplacian(f, n), n)
        rhs = flat_shift(apply_forward_shift(f, n))
    else:
        raise ValueError("operator must be 'adjoint' or 'forward'")
    res = np.abs(lhs.evaluate(grid) - rhs.evaluate(grid))
    return float(np.max(res))


def apply_adjoint_shift_like(e, n: int):
    """L^n for any expression object exposing apply_L."""
    for _ in range(n):
        e = e.apply_L()
    return e


def heat_equation_residual(n: int, t: float, r_grid, dt: float = 1e-4) -> float:
    """Pointwise residual of d gamma/dt = (1/2)(d^2/dr^2 + 2n coth r d/dr) gamma."""
    r = np.asarray(r_grid, dtype=float)
    gm = hyperbolic_heat_kernel(n, t - dt)
    gp = hyperbolic_heat_kernel(n, t + dt)
    g0 = hyperbolic_heat_kernel(n, t)
    ddt = (gp.evaluate(r) - gm.evaluate(r)) / (2 * dt)
    spatial = 0.5 * radial_laplacian(g0, n).evaluate(r)
    return float(np.max(np.abs(ddt - spatial)))
