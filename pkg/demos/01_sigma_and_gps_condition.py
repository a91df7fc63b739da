"""Two squeezers, one beam splitter, and the reflectance that sets sigma_11 = 1.

Run with ``python3 demos/01_sigma_and_gps_condition.py``.
"""

import numpy as np

from gpscat import SqueezerPair, build_sigma, build_sigma_inverse, db_to_r, output_squeezing, solve_reflectance
from gpscat.gaussian import output_squeezing_from_inputs, reflectance_for_sigma11

# Start from 5 dB of squeezing in each input, in orthogonal quadratures.
sq = SqueezerPair.from_db(5.0)
print(f"r1 = {sq.r1:+.6f}, r2 = {sq.r2:+.6f}")

# The reflectance that places sigma_11 exactly at one.
bs = solve_reflectance(sq)
sigma = build_sigma(sq, bs)
print(f"R = {bs.R:.6f}")
print("sigma =\n", sigma.as_array())

# sigma**-1 is twice the x covariance; the product should be the identity.
prod = sigma.as_array() @ build_sigma_inverse(sq, bs).as_array()
print("sigma @ sigma_inv - I, max |entry| =", np.abs(prod - np.eye(2)).max())

# The same r_c comes out of sigma and out of the input squeezers.
print(f"r_c from sigma  = {output_squeezing(sigma):.12f}")
print(f"r_c from inputs = {output_squeezing_from_inputs(sq):.12f}")

# sigma_11 is linear in R, so other targets are equally easy to hit.
for target in (0.6, 1.0, 1.4):
    print(f"sigma_11 = {target}: R = {reflectance_for_sigma11(sq, target).R:.4f}")

# Stronger squeezing needs a smaller reflectance.
print("\n  dB      R       r_c")
for level in (3, 5, 10, 15, 20):
    pair = SqueezerPair.from_db(level)
    s = build_sigma(pair, solve_reflectance(pair))
    print(f"{level:4d}  {solve_reflectance(pair).R:.5f}  {output_squeezing(s):.5f}")

# Squeezing both inputs in the same quadrature has no solution.
try:
    solve_reflectance(SqueezerPair(db_to_r(5), db_to_r(3)))
except ValueError as exc:
    print("\nsame-sign inputs:", exc)
