import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmmfeedback.exceptions import InvalidParameterError, SingularParametersError
from cmmfeedback.params import TWO_PI, baseline_params, feedback_rates
from cmmfeedback.steadystate import (
    drive_for_target_coupling,
    magnon_amplitude_closed_form,
    solve_steady_state,
    with_steady_state_couplings,
)

WB = TWO_PI * 10e6


def linear_pair(p):
    """Independent 2x2 solve of the cavity/magnon steady-state equations."""
    gfb, dfb, _ = feedback_rates(p.gamma_a, p.delta_a, p.tau, p.phi)
    kappa = complex(gfb, dfb)
    mu = complex(p.gamma_m, p.delta_m)
    drive = p.t_bs * p.cavity_drive * cmath.exp(1j * p.phi)
    M = np.array([[kappa, 1j * p.g], [1j * p.g, mu]])
    rhs = np.array([-1j * drive, p.E_drive])
    a, m = np.linalg.solve(M, rhs)
    return a, m


def test_undriven_is_zero(base):
    ss = solve_steady_state(base.replace(g_a=1.0, g_m=1.0))
    assert (ss.a_s, ss.b_s, ss.d_s, ss.m_s) == (0, 0, 0, 0)
    assert ss.converged and ss.iterations == 0


def test_decoupled_magnon_closed_form(base):
    E = TWO_PI * 1e9
    gm = TWO_PI * 0.3
    p = base.replace(g=0.0, E_drive=E, g_m=gm)
    ss = solve_steady_state(p)
    assert ss.converged
    assert ss.a_s == 0
    m_expected = E / complex(p.gamma_m, ss.delta_m_tilde)
    assert ss.m_s == pytest.approx(m_expected, rel=1e-10)
    b_expected = -1j * gm * abs(ss.m_s) ** 2 / complex(p.gamma_b, p.omega_b)
    assert ss.b_s == pytest.approx(b_expected, rel=1e-10)


def test_decoupled_magnon_without_shift(base):
    E = TWO_PI * 1e9
    p = base.replace(g=0.0, E_drive=E)
    ss = solve_steady_state(p)
    assert ss.m_s == pytest.approx(E / complex(p.gamma_m, p.delta_m), rel=1e-14)
    assert ss.b_s == 0


@pytest.mark.parametrize("tau,phi", [(0.0, 0.0), (0.9, math.pi), (0.4, 1.1)])
def test_uncoupled_mechanics_matches_linear_solve(base, tau, phi):
    p = base.replace(tau=tau, phi=phi, E_drive=TWO_PI * 2e12, script_E=TWO_PI * 5e11)
    ss = solve_steady_state(p)
    a, m = linear_pair(p)
    assert ss.converged
    assert ss.m_s == pytest.approx(m, rel=1e-10)
    assert ss.a_s == pytest.approx(a, rel=1e-10)
    assert ss.delta_fb_tilde == feedback_rates(p.gamma_a, p.delta_a, tau, phi)[1]
    assert ss.delta_m_tilde == p.delta_m


def test_shifted_solution_satisfies_equations(fig2_point):
    p = fig2_point.replace(E_drive=TWO_PI * 3e13, script_E=TWO_PI * 1e12, g_a=TWO_PI * 0.5, g_m=TWO_PI * 0.3)
    ss = solve_steady_state(p)
    assert ss.converged and ss.residual <= 1e-10
    assert ss.iterations > 0
    assert ss.delta_m_tilde != p.delta_m
    assert ss.cap_G_m == p.g_m * ss.m_s
    assert ss.cap_G_a == p.g_a * ss.a_s


def test_iteration_cap_reports_nonconvergence(fig2_point):
    p = fig2_point.replace(E_drive=TWO_PI * 3e13, g_m=TWO_PI * 0.3)
    ss = solve_steady_state(p, max_iter=1)
    assert not ss.converged
    assert ss.iterations == 1


def test_singular_denominator(base):
    p = base.replace(g=0.0, gamma_a=1.0, tau=0.5, phi=0.0, delta_a=0.0, script_E=1.0)
    with pytest.raises(SingularParametersError):
        solve_steady_state(p)


def test_closed_form_limits(base):
    E = TWO_PI * 1e9
    p = base.replace(g=0.0, E_drive=E)
    assert magnon_amplitude_closed_form(p) == pytest.approx(E / complex(p.gamma_m, p.delta_m), rel=1e-14)
    assert magnon_amplitude_closed_form(base) == 0


def test_closed_form_reference_value(fig2_point):
    # independent 30-digit evaluation, drive E = 2 pi 1e12 rad/s
    m = magnon_amplitude_closed_form(fig2_point.replace(E_drive=TWO_PI * 1e12))
    assert m == pytest.approx(15157.8247206852786 - 108371.695729231364j, rel=1e-12)


def test_closed_form_agrees_with_solver_without_cavity_drive(fig2_point):
    p = fig2_point.replace(E_drive=TWO_PI * 1e12)
    assert solve_steady_state(p).m_s == pytest.approx(magnon_amplitude_closed_form(p), rel=1e-12)


@given(st.floats(0, 2 * math.pi))
def test_magnitude_invariant_under_drive_phase(theta):
    p = baseline_params(tau=0.5, phi=2.0, E_drive=TWO_PI * 1e12)
    m0 = magnon_amplitude_closed_form(p)
    m1 = magnon_amplitude_closed_form(p.replace(E_drive=p.E_drive * cmath.exp(1j * theta)))
    assert abs(m1) == pytest.approx(abs(m0), rel=1e-12)


def test_drive_inversion(fig2_point):
    p = fig2_point.replace(g_m=TWO_PI * 0.3)
    target = TWO_PI * 4.8e6
    E = drive_for_target_coupling(p, target)
    m = magnon_amplitude_closed_form(p.replace(E_drive=E))
    assert abs(p.g_m * m) == pytest.approx(target, rel=1e-12)
    assert drive_for_target_coupling(p, 2 * target) == pytest.approx(2 * E, rel=1e-14)
    assert drive_for_target_coupling(p, 0.0) == 0.0


def test_drive_inversion_requires_coupling(base):
    with pytest.raises(InvalidParameterError):
        drive_for_target_coupling(base, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.0 - 1e-6))
def test_continuity_in_tau(tau):
    p = baseline_params(tau=tau, phi=math.pi, E_drive=TWO_PI * 1e12, g_m=TWO_PI * 0.3, g_a=TWO_PI * 0.2)
    s0 = solve_steady_state(p)
    s1 = solve_steady_state(p.replace(tau=tau + 1e-6))
    assert abs(s1.m_s - s0.m_s) <= 1e-6 * abs(s0.m_s)


def test_with_steady_state_couplings(fig2_point):
    p = fig2_point.replace(E_drive=TWO_PI * 1e12, g_m=TWO_PI * 0.3)
    q = with_steady_state_couplings(p)
    assert q.cap_G_m == pytest.approx(p.g_m * solve_steady_state(p).m_s)
    assert q.cap_G_a == 0
