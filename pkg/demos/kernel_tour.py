"""A guided tour of the radial heat kernels.

We build the three kernels that drive everything else in this library:

* ``gamma_t`` -- the heat kernel on the odd-dimensional hyperbolic space
  H^{2n+1}, in closed form (shift operators applied to a Gaussian),
* ``nu_t``    -- its analytic continuation to the compact picture, a
  trig-rational times Gaussian expression with genuine poles at m*pi,
* ``rho_t``   -- the 2*pi-periodization of ``nu_t``.

Along the way we check, in plain floating point, the identities the rest of
the package leans on.
"""

import math

import numpy as np

from hyperheat import kernels, trigexpr

n, t = 2, 1.0
p = kernels.ModelParams(n, t)
ks = kernels.build_kernels(p)

print(f"model: H^{2 * n + 1}  (n = {n}),  time t = {t}")
print(f"surface constant c_n = {p.c_n:.12f}")

# --- the heat kernel integrates to 1 against the radial volume element ----
r, w = np.polynomial.legendre.leggauss(800)
r = 8.0 * (r + 1.0)          # map [-1, 1] -> [0, 16]
w = 8.0 * w
mass = p.c_n * np.sum(w * np.real(ks.gamma_t.evaluate(r)) * np.sinh(r) ** (2 * n))
print(f"mass of gamma_t          : {mass:.15f}   (should be 1)")

# --- the flat-weight identity holds EXACTLY in floats ----------------------
lhs = kernels.apply_adjoint_shift(kernels.flat_weight(n, t), n)
rhs = kernels.unwrapped_heat_kernel(n, 2 * t)
print(f"shifted weight == nu_2t  : {lhs == rhs}   (bit-for-bit)")

# --- nu_t has poles of order 2n - 1 at the nonzero multiples of pi ---------
for m in (1, 2):
    order = trigexpr.pole_order_at(ks.nu_t, m)
    print(f"pole order of nu_t at {m}*pi : {order}   (expected {2 * n - 1})")

# --- but it is perfectly smooth at the origin (series branch) --------------
print(f"nu_t near 0: nu(1e-3) = {complex(ks.nu_t.evaluate(1e-3)).real:.10f}, "
      f"nu(0) = {complex(ks.nu_t.evaluate(0.0)).real:.10f}")

# --- the periodization converges fast: Gaussian tails ----------------------
pts = np.array([0.5, 1.2, 2.4])
small = kernels.PeriodizedKernel(ks.nu_t, t, 4)
print(f"rho_t truncation (K=4 vs K={ks.wrap_K}): "
      f"{np.max(np.abs(small(pts) - ks.rho_t(pts))):.2e} "
      f"(bound {small.tail_bound:.2e})")

# --- and rho_t carries unit mass on the compact side -----------------------
N = 512
rm = (np.arange(N) + 0.5) * (2 * math.pi / N)
rho_mass = p.c_n * 0.5 * np.sum(np.real(ks.rho_t(rm)) * np.sin(rm) ** (2 * n))
rho_mass *= 2 * math.pi / N
print(f"mass of rho_t            : {rho_mass:.15f}   (should be 1)")

# --- finally, gamma_t actually solves the heat equation --------------------
res = kernels.heat_equation_residual(n, t, np.linspace(0.3, 3.0, 12))
print(f"heat-equation residual   : {res:.2e}")
