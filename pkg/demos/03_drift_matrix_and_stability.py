"""
Drift matrix variants and stability
===================================

Two builders exist for the 8x8 drift matrix.  One follows the published
entry layout, the other expands the linearised Langevin equations directly.
They differ in a handful of entries, and only the derived one is stable at
the quoted couplings.
"""

import math

import numpy as np

from cmmfeedback import baseline_params, build_drift_derived, build_drift_printed, derive_rates, diff_report, is_stable
from cmmfeedback.dynamics import QUADRATURES
from cmmfeedback.params import TWO_PI

wb = TWO_PI * 10e6
p = baseline_params(tau=0.9, phi=math.pi, delta_a=wb, delta_m=wb)
r = derive_rates(p)

printed = build_drift_printed(p, r, p.cap_G_a, p.cap_G_m)
derived = build_drift_derived(p, r, p.cap_G_a, p.cap_G_m, convention="drift")
operator = build_drift_derived(p, r, p.cap_G_a, p.cap_G_m, convention="operator")

# Which entries disagree between the published layout and the derivation?
for row, col, v1, v2 in diff_report(printed, derived):
    print(f"{row:>10} <- {col:<4}  printed {v1 / wb:+.3f} wb   derived {v2 / wb:+.3f} wb")

# Stability is judged by the spectral abscissa, the largest real eigenvalue part.
for name, A in (("printed", printed), ("derived/drift", derived), ("derived/operator", operator)):
    st = is_stable(A)
    print(f"{name:17s} stable={st.stable!s:5s} abscissa = {st.abscissa:+.4e} s^-1")

# The derived matrix with unit convention, row by row in units of wb.
np.set_printoptions(precision=3, suppress=True, linewidth=120)
print(QUADRATURES)
print(derived / wb)
