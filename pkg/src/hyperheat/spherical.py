"""Spherical functions of H^{2k+1} and their analytic continuations.

The continued function phi_{lam,k}(ir) is generated from cosh(lam*r) by the
ladder

    (1/sin r) d/dr phi_{lam,k}(ir) = d(lam,k) phi_{lam,k+1}(ir),
    d(lam,k) = (lam**2 + k**2) / (2k + 1),

so every phi_{lam,k}(ir) is a finite combination of cosh(lam*r) and
sinh(lam*r)/lam times trig-rational factors.  Closed forms evaluate at any
complex r, which is what contour integration needs.  The real-axis function
phi_{lam,k}(r) is the same ladder run in the hyperbolic flavor (basis
cos(lam*r), sin(lam*r)/lam against sinh/cosh rational factors).

The sinh(lam*r)/lam basis keeps every coefficient finite at lam = 0, so the
degenerate spectral parameter needs no special casing beyond the basis limit.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _series
from .errors import PoleError
from .trigexpr import SERIES_RADIUS

CONTINUED = "continued"   # phi(ir): trig-rational in sin/cos, basis cosh/sinh
REAL = "real"             # phi(r): rational in sinh/cosh, basis cos/sin

_SERIES_ORDER = 48


@dataclass(frozen=True)
class _CSTerm:
    coeff: float
    cs: int                # 0 -> C basis, 1 -> S basis
    r_power: int
    s_power: int
    c_power: int

    def key(self):
        return (self.cs, self.r_power, self.s_power, self.c_power)


@dataclass(frozen=True)
class CSExpr:
    """coeff * {C,S}(r) * r**a * s(r)**p * c(r)**q sums.

    CONTINUED flavor: C = cosh(lam r), S = sinh(lam r)/lam, s = sin, c = cos.
    REAL flavor:      C = cos(lam r),  S = sin(lam r)/lam,  s = sinh, c = cosh.
    """
    lam: float
    flavor: str
    terms: tuple[_CSTerm, ...]

    def _build(self, terms) -> "CSExpr":
        groups: dict[tuple, float] = {}
        for t in terms:
            groups[t.key()] = groups.get(t.key(), 0.0) + t.coeff
        out = tuple(_CSTerm(c, *k) for k, c in sorted(groups.items()) if c != 0.0)
        return CSExpr(self.lam, self.flavor, out)

    def scale(self, c: float) -> "CSExpr":
        return self._build(_CSTerm(t.coeff * c, t.cs, t.r_power, t.s_power,
                                   t.c_power) for t in self.terms)

    def __add__(self, other: "CSExpr") -> "CSExpr":
        assert self.flavor == other.flavor and self.lam == other.lam
        return self._build(self.terms + other.terms)

    def mul_s(self) -> "CSExpr":
        return self._build(_CSTerm(t.coeff, t.cs, t.r_power, t.s_power + 1,
                                   t.c_power) for t in self.terms)

    def mul_c(self) -> "CSExpr":
        return self._build(_CSTerm(t.coeff, t.cs, t.r_power, t.s_power,
                                   t.c_power + 1) for t in self.terms)

    def div_s(self) -> "CSExpr":
        return self._build(_CSTerm(t.coeff, t.cs, t.r_power, t.s_power - 1,
                                   t.c_power) for t in self.terms)

    def differentiate(self) -> "CSExpr":
        u = self.lam ** 2 if self.flavor == CONTINUED else -self.lam ** 2
        out = []
        for t in self.terms:
            # C' = u S,  S' = C  (both flavors, with the signed u above)
            if t.cs == 0:
                if u != 0.0:
                    out.append(_CSTerm(t.coeff * u, 1, t.r_power, t.s_power,
                                       t.c_power))
            else:
                out.append(_CSTerm(t.coeff, 0, t.r_power, t.s_power, t.c_power))
            if t.r_power > 0:
                out.append(_CSTerm(t.coeff * t.r_power, t.cs, t.r_power - 1,
                                   t.s_power, t.c_power))
            if t.s_power != 0:
                out.append(_CSTerm(t.coeff * t.s_power, t.cs, t.r_power,
                                   t.s_power - 1, t.c_power + 1))
            if t.c_power > 0:
                sgn = -1.0 if self.flavor == CONTINUED else 1.0
                out.append(_CSTerm(t.coeff * sgn * t.c_power, t.cs, t.r_power,
                                   t.s_power + 1, t.c_power - 1))
        return self._build(out)

    def apply_L(self) -> "CSExpr":
        return self.differentiate().div_s().scale(-1.0 / (2.0 * math.pi))

    def min_s_power(self) -> int:
        return min((t.s_power for t in self.terms), default=0)

    # -- evaluation --

    def _pole_distance(self, rr: np.ndarray) -> np.ndarray:
        if self.flavor == CONTINUED:        # sin zeros on the real axis
            m = np.round(np.real(rr) / np.pi)
            m = np.where(m == 0, np.where(np.real(rr) >= 0, 1, -1), m)
            return np.abs(rr - m * np.pi)
        m = np.round(np.imag(rr) / np.pi)   # sinh zeros on the imaginary axis
        m = np.where(m == 0, np.where(np.imag(rr) >= 0, 1, -1), m)
        return np.abs(rr - 1j * m * np.pi)

    def _laurent(self) -> dict[int, float]:
        order = _SERIES_ORDER
        hyp = self.flavor == REAL
        u = self.lam ** 2 if self.flavor == CONTINUED else -self.lam ** 2
        sr = _series.sin_over_r_series(order, hyperbolic=hyp)
        cs = _series.cos_series(order, hyperbolic=hyp)
        base = {
            0: _series.cosh_lam_series(u, order),
            1: _series.sinh_over_lam_series(u, order),
        }
        acc: dict[int, float] = {}
        for t in self.terms:
            poly = base[t.cs]
            poly = _series.ps_mul(poly, _series.ps_int_pow(sr, t.s_power, order),
                                  order)
            if t.c_power:
                poly = _series.ps_mul(poly, _series.ps_int_pow(cs, t.c_power,
                                                               order), order)
            offset = t.r_power + t.s_power
            for i, v in enumerate(poly):
                if v != 0.0:
                    acc[offset + i] = acc.get(offset + i, 0.0) + t.coeff * v
        return acc

    def evaluate(self, r, pole_guard: float = 1e-8):
        scalar = np.isscalar(r) or (isinstance(r, np.ndarray) and r.ndim == 0)
        rr = np.atleast_1d(np.asarray(r, dtype=complex))
        out = np.zeros(rr.shape, dtype=complex)
        neg = self.min_s_power() < 0
        if neg and pole_guard > 0 and np.any(self._pole_distance(rr) < pole_guard):
            raise PoleError("evaluation point within guard distance of a pole")
        near = np.abs(rr) < SERIES_RADIUS if neg else np.zeros(rr.shape, bool)
        far = ~near
        if np.any(far):
            rf = rr[far]
            lam = self.lam
            # below ~1e-150 the quotient sin(lam r)/lam over/underflows;
            # its limit r is accurate to O(lam^2 r^3) there
            tiny = abs(lam) < 1e-150
            if self.flavor == CONTINUED:
                C = np.cosh(lam * rf)
                S = rf if tiny else np.sinh(lam * rf) / lam
                s, c = np.sin(rf), np.cos(rf)
            else:
                C = np.cos(lam * rf)
                S = rf if tiny else np.sin(lam * rf) / lam
                s, c = np.sinh(rf), np.cosh(rf)
            acc = np.zeros(rf.shape, dtype=complex)
            for t in self.terms:
                v = t.coeff * (C if t.cs == 0 else S)
                if t.r_power:
                    v = v * rf ** t.r_power
                if t.s_power:
                    v = v * s ** t.s_power
                if t.c_power:
                    v = v * c ** t.c_power
                acc += v
            out[far] = acc
        if np.any(near):
            coeffs = self._laurent()
            rn = rr[near]
            zero = rn == 0
            vals = np.zeros(rn.shape, dtype=complex)
            if np.any(~zero):
                vals[~zero] = _series.eval_laurent(coeffs, rn[~zero])
            if np.any(zero):
                m = max((abs(v) for v in coeffs.values()), default=1.0)
                if any(k < 0 and abs(v) > 1e-10 * m for k, v in coeffs.items()):
                    raise PoleError("pole at r = 0")
                vals[zero] = coeffs.get(0, 0.0)
            out[near] = vals
        return out[()] if not scalar else out[0]


# ---------------------------------------------------------------------------
# ladder constants and closed forms


def ladder_d(lam: float, k: int) -> float:
    return (lam ** 2 + k ** 2) / (2 * k + 1)


def ladder_c(lam: float, n: int) -> float:
    prod = 1.0
    for k in range(n):
        prod *= ladder_d(lam, k)
    return prod / (-2.0 * math.pi) ** n


@functools.lru_cache(maxsize=4096)
def phi_expr(lam: float, k: int, kind: str = CONTINUED) -> CSExpr:
    """Closed form of phi_{lam,k}(ir) (CONTINUED) or phi_{lam,k}(r) (REAL)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return CSExpr(lam, kind, (_CSTerm(1.0, 0, 0, 0, 0),))
    # lam**2 cancels exactly in the first ladder step, so start at k = 1
    e = CSExpr(lam, kind, (_CSTerm(1.0, 1, 0, -1, 0),))
    for j in range(1, k):
        step = e.differentiate().div_s()
        sgn = 1.0 if kind == CONTINUED else -1.0
        e = step.scale(sgn / ladder_d(lam, j))
    return e


def phi_i(lam: float, k: int, r, pole_guard: float = 1e-8):
    """phi_{lam,k}(ir) at complex r."""
    return phi_expr(float(lam), k, CONTINUED).evaluate(r, pole_guard=pole_guard)


def phi_real(lam: float, k: int, r):
    """phi_{lam,k}(r) at real r >= 0 (real-valued, |phi| <= 1)."""
    v = phi_expr(float(lam), k, REAL).evaluate(r, pole_guard=0.0)
    return np.real(v)


def phi_i_derivative(lam: float, n: int, r, l: int = 0,
                     pole_guard: float = 1e-8):
    """(d/dr)^l phi_{lam,n}(ir)."""
    e = phi_expr(float(lam), n, CONTINUED)
    for _ in range(l):
        e = e.differentiate()
    return e.evaluate(r, pole_guard=pole_guard)


@dataclass(frozen=True)
class SphericalEval:
    """Bound (k, lam) evaluator caching the closed forms."""
    k: int
    lam: float

    def continued(self) -> CSExpr:
        return phi_expr(self.lam, self.k, CONTINUED)

    def real(self) -> CSExpr:
        return phi_expr(self.lam, self.k, REAL)

    def phi_i(self, r, pole_guard: float = 1e-8):
        return self.continued().evaluate(r, pole_guard=pole_guard)

    def phi_real(self, r):
        return np.real(self.real().evaluate(r, pole_guard=0.0))


# ---------------------------------------------------------------------------
# shift-operator actions on spherical functions


def _forward_shift(e: CSExpr, n: int) -> CSExpr:
    """(1/(2n-1)!!) prod_{k=1}^{n} (s(r) d/dr + (2k-1) c(r)), larger k first."""
    for k in range(n, 0, -1):
        e = e.differentiate().mul_s() + e.mul_c().scale(float(2 * k - 1))
    return e.scale(1.0 / _series.factorial2(2 * n - 1))


def apply_Dtilde_to_phi(lam: float, n: int, r, pole_guard: float = 1e-8):
    """D-tilde applied to phi_{lam,n}(i .); equals cosh(lam*r)."""
    e = _forward_shift(phi_expr(float(lam), n, CONTINUED), n)
    return e.evaluate(r, pole_guard=pole_guard)


def apply_D_to_phi(lam: float, n: int, r):
    """D applied to phi_{lam,n}; equals cos(lam*r)."""
    e = _forward_shift(phi_expr(float(lam), n, REAL), n)
    return e.evaluate(r, pole_guard=0.0)


def apply_Dtilde_star_to_cosh(lam: float, n: int, r,
                              pole_guard: float = 1e-8):
    """L^n cosh(lam*r); equals ladder_c(lam, n) * phi_{lam,n}(ir)."""
    e = phi_expr(float(lam), 0, CONTINUED)
    for _ in range(n):
        e = e.apply_L()
    return e.evaluate(r, pole_guard=pole_guard)


def estimate_rhs(lam: float, r, l: int, n: int, constant: float) -> float:
    """Right side of the spherical derivative bound, used only as a test bound."""
    x = abs(lam * abs(r))
    growth = 1.0 if x == 0.0 else (math.exp(x) - 1.0) / x
    return constant * (1.0 + abs(r)) / (1.0 + abs(lam)) ** (n - l - 1) * growth
