"""The R -> infinity story: contour integrals, extrapolation, isometry.

The integrals that certify the coherent-state isometry live on a contour
S_{eps,A} in the complex radial plane that detours over the poles of nu_t at
the multiples of pi.  Truncated at a finite endpoint R they are ordinary
(adaptive) quadratures; the certified statement is about the limit R -> oo.

This demo prints the raw convergence table for the basic spherical-heat
limit, then runs the full isometry and inversion checks for a band-limited
test profile.
"""

import numpy as np

from hyperheat import limits, spectral

# --- the scalar building block: I(R) -> e^{t (lam^2 + n^2)} ----------------
lam, t, n = 1.5, 0.5, 2
target = np.exp(t * (lam ** 2 + n ** 2))
print(f"spherical-heat limit,  lam={lam}, t={t}, n={n}")
print(f"{'R':>22} {'I(R)':>22} {'|I(R) - target|':>18}")
for R in limits.default_R_sequence():
    v = limits.spher_heat_integral(lam, t, limits.build_contour(R), n)
    print(f"{str(R):>22} {v.real:22.15f} {abs(v - target):18.2e}")
print(f"{'target':>22} {target:22.15f}")

rep = limits.spher_heat_limit_check(lam, t, n)
print(f"extrapolated: {np.real(rep.extrapolated):.15f}  "
      f"(residual {rep.residual:.2e})\n")

# --- path independence: the detour radius does not matter ------------------
R = 3.5 * np.pi + 0.3j
v1 = limits.spher_heat_integral(lam, t, limits.build_contour(R, detour_radius=0.4), n)
v2 = limits.spher_heat_integral(lam, t, limits.build_contour(R, detour_radius=0.7), n)
print(f"path independence (detour 0.4 vs 0.7): {abs(v1 - v2):.2e}\n")

# --- the isometry for a genuine test profile -------------------------------
fhat = dict(spectral.standard_test_family())["gauss_quarter"]
p = spectral.profile_from_fhat(fhat, n)
iso = limits.isometry_limit_check(p, t)
print(f"isometry  : I(R) -> ||f||^2 e^(t n^2)")
print(f"  target        = {np.real(iso.target):.15e}")
print(f"  extrapolated  = {np.real(iso.extrapolated):.15e}")
print(f"  rel. residual = {iso.residual:.2e}")

inv = limits.inversion_limit_check(p, t)
print(f"inversion : J(R) -> f(o) e^(t n^2 / 2)")
print(f"  target        = {np.real(inv.target):.15e}")
print(f"  extrapolated  = {np.real(inv.extrapolated):.15e}")
print(f"  rel. residual = {inv.residual:.2e}")

# contour-free cross-check of the same limit
gi = limits.general_inversion_rank1(p, t)
print(f"  contour-free  = {gi:.15e}  "
      f"(agree to {abs(gi - np.real(inv.extrapolated)):.2e})")
