"""
Parameter sweeps and figure presets
===================================

Sweeps evaluate the full pipeline on a one- or two-dimensional grid.  Axis
values use user units: detunings in Hz, phase in rad, temperature in K.
Presets bundle the grids behind each figure of interest.
"""

import math
import sys

import numpy as np

from cmmfeedback import Axis, GridSpec, baseline_params, figure_preset, run_sweep
from cmmfeedback.params import TWO_PI
from cmmfeedback.sweep import records_to_csv

wb = TWO_PI * 10e6
base = baseline_params(phi=math.pi, delta_a=wb, delta_m=wb)

# Mirror-phonon entanglement against the reflection coefficient.
grid = GridSpec((Axis("tau", 0.0, 1.0, 11),))
for rec in run_sweep(base, grid):
    print(f"tau = {rec.coords[0]:.1f}  E_db = {rec.report.E_db:.4f}")

# A temperature sweep written as CSV.
grid = GridSpec((Axis("T_phonon", 0.0, 2.0, 5),))
sys.stdout.write(records_to_csv(run_sweep(base.replace(tau=0.9), grid), grid.ndim))

# Presets return the base parameters and one panel per curve or map.
_, panels = figure_preset("fig4")
for panel in panels:
    recs = run_sweep(panel.params, panel.grid)
    T = np.array([r.coords[0] for r in recs])
    for key in ("E_db", "E_dm", "E_da"):
        vals = np.array([getattr(r.report, key) for r in recs])
        below = T[vals < 1e-4]
        print(f"{panel.label}: {key} vanishes from T = {below[0] if below.size else float('nan'):.2f} K")
