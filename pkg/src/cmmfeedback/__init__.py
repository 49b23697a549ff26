"""Steady-state Gaussian entanglement in a coherent-feedback cavity magnomechanical system."""

from .dynamics import build_diffusion, build_drift_derived, build_drift_printed, diff_report, is_stable
from .exceptions import (
    CMMError,
    InvalidParameterError,
    NumericalError,
    PhysicalityError,
    SingularParametersError,
    UnstableSystemError,
)
from .gaussian import EntanglementReport, full_report, logneg_general, logneg_two_mode, reduce, residual_contangle
from .lyapunov import integrate_moments, solve_lyapunov
from .params import (
    DerivedRates,
    SystemParams,
    baseline_params,
    derive_rates,
    feedback_rates,
    params_from_dict,
    params_to_dict,
    thermal_occupation,
    validate,
)
from .steadystate import SteadyState, drive_for_target_coupling, magnon_amplitude_closed_form, solve_steady_state
from .sweep import Axis, DriftModel, GridSpec, evaluate, figure_preset, run_sweep

__version__ = "0.1.0"
