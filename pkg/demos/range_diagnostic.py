"""Which profiles lie in the image of the heat semigroup?

A profile F-hat is of the form e^{-t L / ...} f exactly when the weighted
spectral mass  2 int |F-hat|^2 e^{t (lam^2 + n^2)} dmu  is finite.  The
diagnostic below sweeps increasing spectral cutoffs and watches the partial
masses: they either stabilize (F is in the image, and we can recover f) or
grow without bound (F is too rough to be a time-t heat flow).
"""

import numpy as np

from hyperheat import limits, spectral

n, t = 1, 1.0
grid, w = spectral.default_lambda_grid()


def show(title, rep):
    print(title)
    print(f"{'eps':>10} {'cutoff 1/eps':>14} {'partial mass':>18}")
    for c, m in zip(rep.cutoffs, rep.partials):
        print(f"{c:10.4f} {1.0 / c:14.4f} {m:18.10e}")
    print(f"verdict: {rep.verdict}\n")


# --- a genuine heat flow: smooth profile, damped tail -----------------------
f0 = spectral.profile_from_fhat(lambda lam: np.exp(-lam ** 2 / 4), n, grid, w)
F = spectral.heat_multiplier(f0, t)     # F-hat = e^{-t(lam^2+n^2)/2} f0-hat
rep = limits.surjectivity_diagnostic(F, t)
show("case 1: F = heat flow of a Gaussian profile", rep)
err = np.max(np.abs(rep.recovered.values - f0.values))
print(f"recovered pre-image matches the original to {err:.2e}\n")

# --- too little damping: e^{-t(...)/4} instead of e^{-t(...)/2} -------------
bad = spectral.profile_from_fhat(
    lambda lam: np.exp(-t * (lam ** 2 + n ** 2) / 4), n, grid, w)
rep = limits.surjectivity_diagnostic(bad, t)
show("case 2: under-damped profile (not a time-t heat flow)", rep)
