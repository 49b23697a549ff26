"""
Parameters, bath occupations and feedback rates
===============================================

The feedback loop sends part of the cavity output back through a beam
splitter with reflection coefficient ``tau`` and phase ``phi``.  The cavity
then sees a modified damping rate, a shifted detuning and a reduced noise
coupling.  This demo prints those quantities for the baseline system.
"""

import math

import numpy as np

from cmmfeedback import baseline_params, derive_rates, feedback_rates, thermal_occupation, validate
from cmmfeedback.params import TWO_PI

# All rates are angular frequencies in rad/s.
p = baseline_params()
print(f"omega_b/2pi = {p.omega_b / TWO_PI:.3e} Hz, gamma_a/2pi = {p.gamma_a / TWO_PI:.3e} Hz")

# Thermal occupations: the mechanics is hot even at 100 mK, the microwave cavity is not.
for T in (0.01, 0.1, 1.0):
    print(f"T = {T:5.2f} K  N_mech = {thermal_occupation(p.omega_b, T):10.3f}  N_cav = {thermal_occupation(p.omega_a, T):.3e}")

# Effective cavity rates as the feedback phase goes round the circle.
print("\n tau   phi/pi  gamma_fb/gamma_a  (Delta_fb-Delta_a)/gamma_a  gamma_a_eff/gamma_a")
for tau in (0.5, 0.9):
    for phi in np.linspace(0, 2 * math.pi, 5):
        g_fb, d_fb, g_eff = feedback_rates(p.gamma_a, p.delta_a, tau, phi)
        print(
            f" {tau:.1f}   {phi / math.pi:4.2f}    {g_fb / p.gamma_a:8.4f}          "
            f"{(d_fb - p.delta_a) / p.gamma_a:8.4f}                 {g_eff / p.gamma_a:8.4f}"
        )

# At phi = pi the cavity linewidth grows by (1 + 2 tau) while the injected
# noise is suppressed by t^2 (1 + tau)^2.
r = derive_rates(p.replace(tau=0.9, phi=math.pi))
print(f"\ntau=0.9, phi=pi: gamma_fb = {r.gamma_fb / p.gamma_a:.3f} gamma_a, gamma_a_eff = {r.gamma_a_eff / p.gamma_a:.4f} gamma_a")

# validate() never raises; it lists what is wrong or suspicious.
for d in validate(p.replace(tau=1.2, gamma_b=-1.0)):
    print(d.level, d.key, d.message)
