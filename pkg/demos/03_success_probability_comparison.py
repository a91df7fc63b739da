"""Success probability of three heralding schemes across squeezing levels.

Run with ``python3 demos/03_success_probability_comparison.py``.
"""

import warnings

import numpy as np

from gpscat import TruncationError, conventional_ps_success, db_to_r, gps_success, homodyne_method_success

levels = np.arange(2.0, 22.0, 2.0)
photons = (2, 5, 10)

for n in photons:
    print(f"\nn = {n}")
    print("   dB       GPS      homodyne  conventional   GPS/conv")
    for level in levels:
        r = db_to_r(level)
        p_gps = gps_success(r, n).probability
        p_hom = homodyne_method_success(r, n).probability
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                p_conv = conventional_ps_success(r, n).probability
            conv = f"{p_conv:.3e}"
            ratio = f"{p_gps / p_conv:.3e}" if p_conv > 0 else "inf"
        except TruncationError:
            conv, ratio = "truncated", "-"
        print(f"{level:5.1f}  {p_gps:.3e}  {p_hom:.3e}  {conv:>12}  {ratio:>10}")

# Rates at a 100 MHz repetition rate make the gap concrete.
r = db_to_r(10.0)
print("\nheralding events per second at 10 dB, 100 MHz")
for n in photons:
    print(f"n = {n:2d}: GPS {gps_success(r, n).rate:.3e}/s, conventional {conventional_ps_success(r, n).rate:.3e}/s")
