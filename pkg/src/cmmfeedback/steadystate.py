"""Classical steady-state amplitudes and the effective couplings they induce."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .exceptions import InvalidParameterError, SingularParametersError
from .params import SystemParams, feedback_rates

DEFAULT_MAX_ITER = 10_000
DEFAULT_TOL = 1e-10
DAMPING = 0.5


@dataclass(frozen=True)
class SteadyState:
    a_s: complex
    b_s: complex
    d_s: complex
    m_s: complex
    cap_G_a: complex
    cap_G_m: complex
    delta_fb_tilde: float
    delta_m_tilde: float
    converged: bool
    iterations: int
    residual: float


def _cavity_magnon(params: SystemParams, gamma_fb: float, delta_fb: float, delta_m: float) -> tuple[complex, complex]:
    """Solve the coupled linear pair for ``(a_s, m_s)`` at fixed detunings.

    ``a = -i (g m + t E_c e^{i phi}) / kappa`` and ``m = (E - i g a) / mu``
    eliminate to ``m = (E kappa - g t E_c e^{i phi}) / (g^2 + mu kappa)``.
    """
    kappa = complex(gamma_fb, delta_fb)
    mu = complex(params.gamma_m, delta_m)
    drive_a = params.t_bs * params.cavity_drive * cmath.exp(1j * params.phi)
    denom = params.g**2 + mu * kappa
    if denom == 0 or kappa == 0:
        raise SingularParametersError("vanishing steady-state denominator")
    m_s = (params.E_drive * kappa - params.g * drive_a) / denom
    a_s = -1j * (params.g * m_s + drive_a) / kappa
    return a_s, m_s


def _phonon_amplitudes(params: SystemParams, a_s: complex, m_s: complex) -> tuple[complex, complex]:
    b_s = -1j * params.g_m * abs(m_s) ** 2 / complex(params.gamma_b, params.omega_b)
    d_s = -1j * params.g_a * abs(a_s) ** 2 / complex(params.gamma_d, params.omega_d)
    return b_s, d_s


def _residual(params, gamma_fb, delta_fb, a_s, b_s, d_s, m_s) -> float:
    # detunings implied by the current phonon amplitudes
    dfb_t = delta_fb + 2.0 * params.g_a * d_s.real
    dm_t = params.delta_m + 2.0 * params.g_m * b_s.real
    drive_a = params.t_bs * params.cavity_drive * cmath.exp(1j * params.phi)
    pairs = (
        (a_s, -1j * (params.g * m_s + drive_a) / complex(gamma_fb, dfb_t)),
        (b_s, -1j * params.g_m * abs(m_s) ** 2 / complex(params.gamma_b, params.omega_b)),
        (d_s, -1j * params.g_a * abs(a_s) ** 2 / complex(params.gamma_d, params.omega_d)),
        (m_s, (params.E_drive - 1j * params.g * a_s) / complex(params.gamma_m, dm_t)),
    )
    worst = 0.0
    for lhs, rhs in pairs:
        scale = max(abs(lhs), abs(rhs))
        if scale > 0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def solve_steady_state(params: SystemParams, *, max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL) -> SteadyState:
    """Self-consistent classical amplitudes including the radiation-pressure shifts.

    The detuning shifts ``2 g_a Re d_s`` and ``2 g_m Re b_s`` are found by a
    damped fixed-point iteration started from the unshifted solution.  When the
    iteration cap is hit the result is returned with ``converged=False``.
    """
    gamma_fb, delta_fb, _ = feedback_rates(params.gamma_a, params.delta_a, params.tau, params.phi)
    dfb_t, dm_t = delta_fb, params.delta_m
    a_s, m_s = _cavity_magnon(params, gamma_fb, dfb_t, dm_t)
    b_s, d_s = _phonon_amplitudes(params, a_s, m_s)
    res = _residual(params, gamma_fb, delta_fb, a_s, b_s, d_s, m_s)
    it = 0
    while res > tol and it < max_iter:
        it += 1
        target_fb = delta_fb + 2.0 * params.g_a * d_s.real
        target_m = params.delta_m + 2.0 * params.g_m * b_s.real
        dfb_t += DAMPING * (target_fb - dfb_t)
        dm_t += DAMPING * (target_m - dm_t)
        a_s, m_s = _cavity_magnon(params, gamma_fb, dfb_t, dm_t)
        b_s, d_s = _phonon_amplitudes(params, a_s, m_s)
        res = _residual(params, gamma_fb, delta_fb, a_s, b_s, d_s, m_s)
    return SteadyState(
        a_s=a_s,
        b_s=b_s,
        d_s=d_s,
        m_s=m_s,
        cap_G_a=params.g_a * a_s,
        cap_G_m=params.g_m * m_s,
        delta_fb_tilde=dfb_t,
        delta_m_tilde=dm_t,
        converged=res <= tol,
        iterations=it,
        residual=res,
    )


def magnon_amplitude_closed_form(params: SystemParams) -> complex:
    """Magnon amplitude ``E (gamma_fb + i Delta_fb) / (g^2 + (gamma_m + i Delta_m)(gamma_fb + i Delta_fb))``.

    Neglects the detuning shifts and the cavity drive.
    """
    gamma_fb, delta_fb, _ = feedback_rates(params.gamma_a, params.delta_a, params.tau, params.phi)
    kappa = complex(gamma_fb, delta_fb)
    denom = params.g**2 + complex(params.gamma_m, params.delta_m) * kappa
    if denom == 0:
        raise SingularParametersError("vanishing denominator in magnon amplitude")
    return params.E_drive * kappa / denom


def drive_for_target_coupling(params: SystemParams, target: float) -> float:
    """Magnon drive ``E`` that makes ``|g_m m_s| = target`` under the closed form."""
    if params.g_m == 0:
        raise InvalidParameterError("g_m must be non-zero to invert for the drive")
    if target < 0:
        raise InvalidParameterError("target coupling must be non-negative")
    unit = magnon_amplitude_closed_form(params.replace(E_drive=1.0))
    return target / (abs(params.g_m) * abs(unit))


def with_steady_state_couplings(params: SystemParams, **kwargs) -> SystemParams:
    """Return ``params`` with ``cap_G_a``, ``cap_G_m`` replaced by steady-state values."""
    ss = solve_steady_state(params, **kwargs)
    if not ss.converged:
        raise SingularParametersError(f"steady state did not converge (residual {ss.residual:.3g})")
    if not (math.isfinite(abs(ss.cap_G_a)) and math.isfinite(abs(ss.cap_G_m))):
        raise SingularParametersError("non-finite effective couplings")
    return params.replace(cap_G_a=ss.cap_G_a, cap_G_m=ss.cap_G_m)
