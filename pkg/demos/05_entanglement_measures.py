"""
Logarithmic negativity and residual contangle
=============================================

Bipartite entanglement of two modes comes from the smallest symplectic
eigenvalue of the partially transposed covariance.  A two-mode squeezed
vacuum calibrates the measure.  Tripartite entanglement among mirror, magnon
and phonon is judged by the minimum residual contangle.
"""

import math

from cmmfeedback import baseline_params, evaluate, logneg_general, logneg_two_mode
from cmmfeedback.gaussian import two_mode_squeezed_vacuum
from cmmfeedback.params import TWO_PI

# A squeezed vacuum with squeezing r has E_N = 2r.
for r in (0.1, 0.5, 1.0):
    s = two_mode_squeezed_vacuum(r)
    (e1, nu1), (e2, _) = logneg_two_mode(s), logneg_general(s, 1)
    print(f"r = {r}: invariant formula {e1:.12f}, spectrum {e2:.12f}, nu_minus {nu1:.6f}")

# The hybrid system at a few operating points.
wb = TWO_PI * 10e6
for tau, phi, delta in ((0.0, 0.0, wb), (0.9, math.pi, wb), (0.7, math.pi, 0.5 * wb)):
    p = baseline_params(tau=tau, phi=phi, delta_a=delta, delta_m=delta)
    rep = evaluate(p, warn_unphysical=False).report
    print(
        f"tau={tau} phi={phi / math.pi:.1f}pi Delta={delta / wb:.1f}wb: "
        f"E_db={rep.E_db:.4f} E_dm={rep.E_dm:.4f} E_da={rep.E_da:.4f} R_min={rep.R_min:+.5f}"
    )
