"""One coordinate, solved exactly.

Fixing every coefficient but one turns the penalized check-loss objective
into a convex piecewise-linear function of a single number. Its kinks sit
at the scaled partial residuals, so the minimizer can be found by walking
the sorted kinks and watching the slope change sign. Run with
``python demos/01_exact_coordinate_update.py``.
"""

import numpy as np

from qcd import PenaltySpec, coord_min_l1, kkt_zero_check, make_profile, oracle_coord_min
from qcd.coord import derivative_trace

rng = np.random.default_rng(7)
x = rng.normal(size=8)            # the column of the coordinate being updated
v = rng.normal(1.0, 1.5, size=8)  # scaled partial residuals
tau, lam = 0.3, 0.8

profile = make_profile(v, x, tau)
print("sorted breakpoints:", np.round(profile.v, 3))
print("running derivative right of each one:", np.round(derivative_trace(profile, lam), 3))

# The slope first turns non-negative at the minimizer.
b = coord_min_l1(profile, lam)
ref, fmin = oracle_coord_min(profile, PenaltySpec.l1(lam))
print(f"exact update {b:.6f}, brute force {ref:.6f}")
print(f"objective at the update {profile.objective(b, PenaltySpec.l1(lam)):.12f} vs {fmin:.12f}")

# The zero check answers "is 0 optimal?" without sorting anything.
for lam_try in (0.1, 0.8, 5.0):
    prof = make_profile(v, x, tau)
    print(f"lambda={lam_try}: zero check says {kkt_zero_check(prof, lam_try)}, "
          f"update is {coord_min_l1(prof, lam_try):.4f}")
