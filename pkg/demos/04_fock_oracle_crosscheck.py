"""Cross-checking the analytic heralded state against a brute-force Fock simulation.

The oracle builds both squeezed vacua in a truncated number basis, applies the
beam-splitter unitary block by block and projects mode 1 on |n>. Its accuracy
is limited by the input truncation N_max, which this script makes visible.

Run with ``python3 demos/04_fock_oracle_crosscheck.py``.
"""

import numpy as np

from gpscat import SqueezerPair, db_to_r, gps_sigma, solve_reflectance
from gpscat.herald import herald
from gpscat.oracle import fock_to_wavefunction, gps_fock_state, herald_fock, squeezed_vacuum_tail
from gpscat.targets import fidelity

for level in (5.0, 10.0):
    r = db_to_r(level)
    sq = SqueezerPair.opposite(r)
    bs = solve_reflectance(sq)
    sigma = gps_sigma(r)
    print(f"\n{level:.0f} dB, R = {bs.R:.6f}")
    print(" N_max  tail mass   max 1-F (n<=10)  max |dP|")
    for nmax in (60, 90, 120):
        state = gps_fock_state(sq.r1, sq.r2, bs.R, nmax, tail_limit=1.0)
        worst_f, worst_p = 0.0, 0.0
        for n in range(11):
            p_fock, psi_fock = herald_fock(state, n)
            out = herald(sigma, n)
            grid = out.grid(extra_degree=2 * nmax)
            f = fidelity(out.psi, lambda x: fock_to_wavefunction(psi_fock, x), grid, check=False)
            worst_f = max(worst_f, 1.0 - f)
            worst_p = max(worst_p, abs(p_fock - out.prob))
        print(f"{nmax:5d}  {squeezed_vacuum_tail(r, nmax):.2e}  {worst_f:.2e}         {worst_p:.2e}")

# Pointwise view of one state at 10 dB with a generous cutoff.
r = db_to_r(10.0)
sq = SqueezerPair.opposite(r)
state = gps_fock_state(sq.r1, sq.r2, solve_reflectance(sq).R, 120)
_, psi_fock = herald_fock(state, 4)
out = herald(gps_sigma(r), 4)
x = np.linspace(-3, 3, 7)
print("\n   x     analytic      Fock")
for xi, a, b in zip(x, out.psi(x), fock_to_wavefunction(psi_fock, x)):
    print(f"{xi:+5.1f}  {a:+.8f}  {b:+.8f}")
