"""Exact calculus on the class Gaussian x r-power x trig(or hyp)-rational.

Every kernel, spectral density factor, and boundary term handled by this
package is a finite sum of terms

    coeff * (2*pi)**p * exp(-a r**2) * r**j * s(r)**k * c(r)**l

with s, c = (sin, cos) in the circular flavor or (sinh, cosh) in the
hyperbolic flavor.  Only the s-exponent may be negative.  The class is closed
under d/dr and under the ladder operator L = -(1/(2*pi)) (1/s(r)) d/dr, which
is what makes repeated shift-operator applications exactly representable.

Coefficients stay exact (Fraction times an exact power of 2*pi) whenever the
inputs are rational; irrational prefactors such as t**(-1/2) degrade the
affected coefficient to a float, which is still good to ~1e-15 relative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from . import _series
from .errors import AmbiguousOrder, FlavorMismatch, PoleError

CIRCULAR = "circular"
HYPERBOLIC = "hyperbolic"

TWO_PI = 2.0 * math.pi

#: evaluation switches to a Taylor/Laurent expansion inside this radius
SERIES_RADIUS = 0.25
SERIES_ORDER = 48
DEFAULT_POLE_GUARD = 1e-8

Scalar = Union[Fraction, int, float]


@dataclass(frozen=True)
class SymTerm:
    coeff: Scalar
    twopi_pow: Fraction
    gauss_rate: Scalar       # a in exp(-a r**2); 0 allowed
    r_power: int
    s_power: int             # may be negative
    c_power: int

    def __post_init__(self):
        if self.r_power < 0 or self.c_power < 0:
            raise ValueError("r_power and c_power must be nonnegative")

    @property
    def numeric_coeff(self) -> float:
        return float(self.coeff) * TWO_PI ** float(self.twopi_pow)

    def monomial_key(self):
        return (self.gauss_rate, self.r_power, self.s_power, self.c_power)


@dataclass(frozen=True)
class SymExpr:
    flavor: str
    terms: tuple[SymTerm, ...]

    # -- conveniences; the module-level functions are the primary API --
    def differentiate(self) -> "SymExpr":
        return differentiate(self)

    def apply_L(self) -> "SymExpr":
        return apply_L(self)

    def evaluate(self, r, pole_guard: float = DEFAULT_POLE_GUARD):
        return evaluate(self, r, pole_guard=pole_guard)

    def scale(self, c: Scalar) -> "SymExpr":
        return scale(c, self)

    def mul_s(self) -> "SymExpr":
        """Multiply by sin r (circular) or sinh r (hyperbolic)."""
        return _shift_powers(self, ds=1)

    def mul_c(self) -> "SymExpr":
        """Multiply by cos r (circular) or cosh r (hyperbolic)."""
        return _shift_powers(self, dc=1)

    def div_s(self) -> "SymExpr":
        return _shift_powers(self, ds=-1)

    def min_s_power(self) -> int:
        return min((t.s_power for t in self.terms), default=0)

    def __add__(self, other: "SymExpr") -> "SymExpr":
        return add(self, other)


def _canonical(flavor: str, terms: Iterable[SymTerm]) -> SymExpr:
    groups: dict[tuple, list[SymTerm]] = {}
    for t in terms:
        groups.setdefault(t.monomial_key(), []).append(t)
    out = []
    for key, ts in groups.items():
        by_pow: dict[Fraction, Scalar] = {}
        for t in ts:
            by_pow[t.twopi_pow] = by_pow.get(t.twopi_pow, 0) + t.coeff
        by_pow = {p: c for p, c in by_pow.items() if c != 0}
        if not by_pow:
            continue
        if len(by_pow) == 1:
            (p, c), = by_pow.items()
            out.append(SymTerm(c, p, key[0], key[1], key[2], key[3]))
        else:
            # mixed 2*pi powers on one monomial: fold numerically
            c = sum(float(cc) * TWO_PI ** float(p) for p, cc in by_pow.items())
            if c != 0.0:
                out.append(SymTerm(c, Fraction(0), key[0], key[1], key[2], key[3]))
    out.sort(key=lambda t: (float(t.gauss_rate), t.r_power, t.s_power, t.c_power))
    return SymExpr(flavor, tuple(out))


def expr(flavor: str, terms: Iterable[SymTerm]) -> SymExpr:
    """Build a canonical expression from raw terms."""
    return _canonical(flavor, terms)


def constant(value: Scalar, flavor: str = CIRCULAR) -> SymExpr:
    return _canonical(flavor, [SymTerm(value, Fraction(0), Fraction(0), 0, 0, 0)])


def monomial(flavor: str, coeff: Scalar = 1, gauss_rate: Scalar = Fraction(0),
             r_power: int = 0, s_power: int = 0, c_power: int = 0,
             twopi_pow: Scalar = 0) -> SymExpr:
    return _canonical(flavor, [SymTerm(coeff, Fraction(twopi_pow), gauss_rate,
                                       r_power, s_power, c_power)])


def _check_flavor(e1: SymExpr, e2: SymExpr):
    if e1.flavor != e2.flavor:
        raise FlavorMismatch(f"{e1.flavor} vs {e2.flavor}")


def add(e1: SymExpr, e2: SymExpr) -> SymExpr:
    _check_flavor(e1, e2)
    return _canonical(e1.flavor, e1.terms + e2.terms)


def scale(c: Scalar, e: SymExpr) -> SymExpr:
    return _canonical(e.flavor, [
        SymTerm(t.coeff * c, t.twopi_pow, t.gauss_rate,
                t.r_power, t.s_power, t.c_power) for t in e.terms])


def multiply(e1: SymExpr, e2: SymExpr) -> SymExpr:
    _check_flavor(e1, e2)
    terms = []
    for a in e1.terms:
        for b in e2.terms:
            terms.append(SymTerm(a.coeff * b.coeff, a.twopi_pow + b.twopi_pow,
                                 a.gauss_rate + b.gauss_rate,
                                 a.r_power + b.r_power,
                                 a.s_power + b.s_power,
                                 a.c_power + b.c_power))
    return _canonical(e1.flavor, terms)


def _shift_powers(e: SymExpr, ds: int = 0, dc: int = 0) -> SymExpr:
    return _canonical(e.flavor, [
        SymTerm(t.coeff, t.twopi_pow, t.gauss_rate, t.r_power,
                t.s_power + ds, t.c_power + dc) for t in e.terms])


def differentiate(e: SymExpr) -> SymExpr:
    hyp = e.flavor == HYPERBOLIC
    out: list[SymTerm] = []
    for t in e.terms:
        if t.gauss_rate != 0:
            out.append(SymTerm(t.coeff * (-2) * t.gauss_rate, t.twopi_pow,
                               t.gauss_rate, t.r_power + 1, t.s_power, t.c_power))
        if t.r_power > 0:
            out.append(SymTerm(t.coeff * t.r_power, t.twopi_pow, t.gauss_rate,
                               t.r_power - 1, t.s_power, t.c_power))
        if t.s_power != 0:
            out.append(SymTerm(t.coeff * t.s_power, t.twopi_pow, t.gauss_rate,
                               t.r_power, t.s_power - 1, t.c_power + 1))
        if t.c_power > 0:
            sgn = 1 if hyp else -1
            out.append(SymTerm(t.coeff * sgn * t.c_power, t.twopi_pow,
                               t.gauss_rate, t.r_power,
                               t.s_power + 1, t.c_power - 1))
    return _canonical(e.flavor, out)


def apply_L(e: SymExpr) -> SymExpr:
    """L = -(1/(2*pi)) (1/s(r)) d/dr with s = sin or sinh per flavor."""
    d = differentiate(e)
    return _canonical(e.flavor, [
        SymTerm(-t.coeff, t.twopi_pow - 1, t.gauss_rate,
                t.r_power, t.s_power - 1, t.c_power) for t in d.terms])


def is_even(e: SymExpr) -> bool:
    return all((t.r_power + t.s_power) % 2 == 0 for t in e.terms)


# ---------------------------------------------------------------------------
# evaluation


def _pole_distance(r: np.ndarray, flavor: str) -> np.ndarray:
    """Distance to the nearest nonzero zero of s(r)."""
    if flavor == CIRCULAR:
        m = np.round(np.real(r) / np.pi)
        m = np.where(m == 0, np.where(np.real(r) >= 0, 1, -1), m)
        return np.abs(r - m * np.pi)
    m = np.round(np.imag(r) / np.pi)
    m = np.where(m == 0, np.where(np.imag(r) >= 0, 1, -1), m)
    return np.abs(r - 1j * m * np.pi)


def _laurent_coeffs(e: SymExpr, order: int = SERIES_ORDER) -> dict[int, float]:
    hyp = e.flavor == HYPERBOLIC
    sr = _series.sin_over_r_series(order, hyperbolic=hyp)
    cs = _series.cos_series(order, hyperbolic=hyp)
    acc: dict[int, float] = {}
    for t in e.terms:
        poly = _series.gauss_series(float(t.gauss_rate), order)
        poly = _series.ps_mul(poly, _series.ps_int_pow(sr, t.s_power, order), order)
        if t.c_power:
            poly = _series.ps_mul(poly, _series.ps_int_pow(cs, t.c_power, order), order)
        offset = t.r_power + t.s_power
        c = t.numeric_coeff
        for i, v in enumerate(poly):
            if v != 0.0:
                acc[offset + i] = acc.get(offset + i, 0.0) + c * v
    return acc


def evaluate(e: SymExpr, r, pole_guard: float = DEFAULT_POLE_GUARD):
    """Evaluate at scalar or ndarray r (complex allowed).

    Near r = 0 a high-order series expansion is used whenever the expression
    carries negative s-powers, so removable singularities evaluate without
    catastrophic cancellation.  Raises PoleError within ``pole_guard`` of a
    genuine pole.
    """
    scalar = np.isscalar(r) or (isinstance(r, np.ndarray) and r.ndim == 0)
    rr = np.atleast_1d(np.asarray(r, dtype=complex))
    out = np.zeros(rr.shape, dtype=complex)
    neg = e.min_s_power() < 0
    if neg and pole_guard > 0:
        if np.any(_pole_distance(rr, e.flavor) < pole_guard):
            raise PoleError("evaluation point within guard distance of a pole")

    near = np.abs(rr) < SERIES_RADIUS if neg else np.zeros(rr.shape, dtype=bool)
    far = ~near
    if np.any(far):
        rf = rr[far]
        if e.flavor == CIRCULAR:
            s, c = np.sin(rf), np.cos(rf)
        else:
            s, c = np.sinh(rf), np.cosh(rf)
        acc = np.zeros(rf.shape, dtype=complex)
        for t in e.terms:
            v = t.numeric_coeff * np.exp(-float(t.gauss_rate) * rf * rf)
            if t.r_power:
                v = v * rf ** t.r_power
            if t.s_power:
                v = v * s ** t.s_power
            if t.c_power:
                v = v * c ** t.c_power
            acc += v
        out[far] = acc
    if np.any(near):
        coeffs = _laurent_coeffs(e)
        rn = rr[near]
        zero = rn == 0
        if np.any(zero):
            m = max(abs(v) for v in coeffs.values()) if coeffs else 1.0
            if any(k < 0 and abs(v) > 1e-10 * m for k, v in coeffs.items()):
                raise PoleError("expression has a genuine pole at r = 0")
        vals = np.zeros(rn.shape, dtype=complex)
        nz = ~zero
        if np.any(nz):
            vals[nz] = _series.eval_laurent(coeffs, rn[nz])
        if np.any(zero):
            vals[zero] = coeffs.get(0, 0.0)
        out[near] = vals
    return out[()] if not scalar else out[0]


def pole_order_at(e: SymExpr, m: int, fit_tol: float = 1e-6) -> int:
    """Order of the pole at r = m*pi, from a numerical Laurent fit.

    Cancellation across terms can make the true order smaller than the most
    negative s-power suggests, so the order is measured, not read off.
    """
    if e.flavor != CIRCULAR:
        raise FlavorMismatch("pole_order_at requires circular flavor")
    if m == 0:
        raise ValueError("m must be a nonzero integer")
    syntactic = max(0, -e.min_s_power())
    if syntactic == 0:
        return 0
    z0 = m * np.pi
    rho, n_samp = 1e-2, 256
    theta = 2 * np.pi * np.arange(n_samp) / n_samp
    f1 = evaluate(e, z0 + rho * np.exp(1j * theta), pole_guard=0.0)
    d = np.fft.fft(f1) / n_samp          # d[k] = c_k * rho**k
    scl = np.max(np.abs(f1))
    order = 0
    for j in range(1, syntactic + 1):
        if np.abs(d[-j % n_samp]) > 1e-9 * scl:
            order = j
    # consistency check on a second circle
    k_hi = 8
    rho2, n2 = 2e-2, 64
    theta2 = 2 * np.pi * np.arange(n2) / n2
    z2 = rho2 * np.exp(1j * theta2)
    pred = np.zeros(n2, dtype=complex)
    for k in range(-syntactic, k_hi + 1):
        pred += (d[k % n_samp] / rho ** k) * z2 ** k
    f2 = evaluate(e, z0 + z2, pole_guard=0.0)
    resid = np.max(np.abs(f2 - pred)) / max(np.max(np.abs(f2)), 1e-300)
    if resid > fit_tol:
        raise AmbiguousOrder(f"Laurent fit residual {resid:.2e} exceeds {fit_tol}")
    return order


# ---------------------------------------------------------------------------
# serialization (golden-file format)


def to_json(e: SymExpr) -> str:
    doc = [{
        "coeff": repr(t.numeric_coeff),
        "gauss_rate": float(t.gauss_rate),
        "r_power": t.r_power,
        "s_power": t.s_power,
        "c_power": t.c_power,
        "flavor": e.flavor,
    } for t in e.terms]
    return json.dumps(doc, sort_keys=True)


def from_json(doc: str) -> SymExpr:
    data = json.loads(doc)
    if not data:
        return SymExpr(CIRCULAR, ())
    flavor = data[0]["flavor"]
    terms = [SymTerm(float(d["coeff"]), Fraction(0), d["gauss_rate"],
                     d["r_power"], d["s_power"], d["c_power"]) for d in data]
    return _canonical(flavor, terms)


def allclose(e1: SymExpr, e2: SymExpr, rtol: float = 1e-13) -> bool:
    """Structural equality: identical monomials, coefficients within rtol."""
    if e1.flavor != e2.flavor or len(e1.terms) != len(e2.terms):
        return False
    for a, b in zip(e1.terms, e2.terms):
        if a.monomial_key() != b.monomial_key():
            return False
        ca, cb = a.numeric_coeff, b.numeric_coeff
        if not math.isclose(ca, cb, rel_tol=rtol, abs_tol=1e-300):
            return False
    return True
