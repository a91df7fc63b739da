"""Heralding n photons at 10 dB and comparing the result with a squeezed cat.

Run with ``python3 demos/02_heralded_cat_wavefunctions.py``.
"""

import math

import numpy as np

from gpscat import CatTarget, db_to_r, fidelity, gps_sigma
from gpscat.herald import herald, outcome_oscillation
from gpscat.targets import best_cat_fit

sigma = gps_sigma(db_to_r(10.0))
print(f"sigma_11 = {sigma.s11:.15f}, sigma_12 = {sigma.s12:.6f}, sigma_22 = {sigma.s22:.6f}")

# Each photon number gives a different state; the natural target is the cat
# with amplitude sqrt(n) and the output squeezing r_c.
print("\n  n        P(n)     r_c    F(target)  F(best fit)  alpha_fit")
for n in (1, 2, 3, 5, 8, 10):
    out = herald(sigma, n)
    target = CatTarget(math.sqrt(n), n, out.r_c)
    f_target = fidelity(out.psi, target)
    fit = best_cat_fit(out.psi, n, r_center=out.r_c)
    print(f"{n:3d}  {out.prob:.4e}  {out.r_c:.4f}  {f_target:.6f}   {fit.fidelity:.6f}    {fit.alpha:.4f}")

# A quick text picture of psi_10(x): two clean lobes near +-sqrt(2 n) e^{-r_c}.
# The oscillation metric compares the largest side bump with the main peak.
out = herald(sigma, 10)
half = 2.0 * math.sqrt(2 * out.n) * math.exp(-out.r_c)
x = np.linspace(-half, half, 31)
psi = out.psi(x)
scale = 30 / np.abs(psi).max()
print("\npsi_10(x)")
for xi, v in zip(x, psi):
    bar = "#" * int(round(abs(v) * scale))
    print(f"{xi:+7.3f} {'-' if v < 0 else ' '}{bar}")
print(f"oscillation metric = {outcome_oscillation(out):.4f}")
