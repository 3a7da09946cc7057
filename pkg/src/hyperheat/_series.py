"""Truncated power-series helpers used for evaluation near removable singularities.

A series is a 1-d float array ``a`` representing sum_i a[i] * r**i, truncated
at a fixed order.  Laurent data is carried separately as an integer offset.
"""

from __future__ import annotations

import math

import numpy as np


def ps_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    n = min(order, len(a) + len(b) - 1)
    return np.convolve(a, b)[:n]


def ps_inv(a: np.ndarray, order: int) -> np.ndarray:
    """Reciprocal of a series with a[0] != 0."""
    if a[0] == 0.0:
        raise ZeroDivisionError("series has vanishing constant term")
    out = np.zeros(order)
    out[0] = 1.0 / a[0]
    for k in range(1, order):
        acc = 0.0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc / a[0]
    return out


def ps_int_pow(a: np.ndarray, p: int, order: int) -> np.ndarray:
    """Integer power of a series; negative p requires a[0] != 0."""
    if p == 0:
        out = np.zeros(order)
        out[0] = 1.0
        return out
    base = a if p > 0 else ps_inv(a, order)
    out = base.copy()
    for _ in range(abs(p) - 1):
        out = ps_mul(out, base, order)
    return out


def gauss_series(rate: float, order: int) -> np.ndarray:
    """exp(-rate * r**2)."""
    out = np.zeros(order)
    term = 1.0
    for k in range(0, (order + 1) // 2):
        if 2 * k < order:
            out[2 * k] = term
        term *= -rate / (k + 1)
    return out


def sin_over_r_series(order: int, hyperbolic: bool = False) -> np.ndarray:
    """sin(r)/r, or sinh(r)/r when hyperbolic."""
    out = np.zeros(order)
    sgn = 1.0 if hyperbolic else -1.0
    term = 1.0
    for k in range(0, (order + 1) // 2):
        out[2 * k] = term
        term *= sgn / ((2 * k + 2) * (2 * k + 3))
    return out


def cos_series(order: int, hyperbolic: bool = False) -> np.ndarray:
    """cos(r), or cosh(r) when hyperbolic."""
    out = np.zeros(order)
    sgn = 1.0 if hyperbolic else -1.0
    term = 1.0
    for k in range(0, (order + 1) // 2):
        out[2 * k] = term
        term *= sgn / ((2 * k + 1) * (2 * k + 2))
    return out


def cosh_lam_series(lam_sq: float, order: int) -> np.ndarray:
    """cosh(lam*r) as a series in r, written via u = lam**2 (even in lam)."""
    out = np.zeros(order)
    term = 1.0
    for k in range(0, (order + 1) // 2):
        out[2 * k] = term
        term *= lam_sq / ((2 * k + 1) * (2 * k + 2))
    return out


def sinh_over_lam_series(lam_sq: float, order: int) -> np.ndarray:
    """sinh(lam*r)/lam as a series in r; equals r at lam = 0."""
    out = np.zeros(order)
    term = 1.0
    for k in range(0, order // 2):
        out[2 * k + 1] = term
        term *= lam_sq / ((2 * k + 2) * (2 * k + 3))
    return out


def eval_laurent(coeffs: dict[int, float], r):
    """Evaluate sum_k coeffs[k] * r**k (k may be negative) at scalar/array r."""
    r = np.asarray(r)
    out = np.zeros(r.shape, dtype=complex)
    for k, c in coeffs.items():
        if c == 0.0:
            continue
        out = out + c * r ** k
    return out


def factorial2(n: int) -> int:
    """Double factorial with the (-1)!! = 1 convention."""
    if n <= 0:
        return 1
    return math.prod(range(n, 0, -2))
