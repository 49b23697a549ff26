import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cmmfeedback.exceptions import InvalidParameterError
from cmmfeedback.params import (
    HBAR,
    K_B,
    TWO_PI,
    ConfigError,
    baseline_params,
    derive_rates,
    feedback_rates,
    params_from_dict,
    params_to_dict,
    thermal_occupation,
    validate,
)


def bose_mp(omega, T):
    mpmath.mp.dps = 40
    x = mpmath.mpf(HBAR) * omega / (mpmath.mpf(K_B) * T)
    return float(1 / mpmath.expm1(x))


def test_thermal_zero_temperature():
    assert thermal_occupation(TWO_PI * 5e6, 0.0) == 0.0


def test_thermal_mechanical_100mK():
    n = thermal_occupation(TWO_PI * 10e6, 0.1)
    assert n == pytest.approx(207.866591297714702, rel=1e-12)
    assert n == pytest.approx(bose_mp(TWO_PI * 10e6, 0.1), rel=1e-12)


def test_thermal_microwave_10mK_is_negligible():
    n = thermal_occupation(TWO_PI * 10e9, 0.01)
    assert n == pytest.approx(1.43599250121694979e-21, rel=1e-10)


def test_thermal_extreme_ratio_does_not_overflow():
    assert thermal_occupation(TWO_PI * 1e15, 1e-6) == 0.0


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_thermal_rejects_nonpositive_frequency(omega):
    with pytest.raises(InvalidParameterError):
        thermal_occupation(omega, 1.0)


def test_thermal_rejects_negative_temperature():
    with pytest.raises(InvalidParameterError):
        thermal_occupation(1.0, -1.0)


@given(
    st.floats(1e3, 1e11),
    st.floats(1e-4, 10.0),
    st.floats(1e-4, 10.0),
)
def test_thermal_monotone_in_temperature(nu, T1, T2):
    if T1 == T2:
        return
    lo, hi = sorted((T1, T2))
    n_lo, n_hi = thermal_occupation(TWO_PI * nu, lo), thermal_occupation(TWO_PI * nu, hi)
    assert n_lo <= n_hi
    if n_hi > 1e-300 and hi / lo > 1 + 1e-9:
        assert n_lo < n_hi


@given(st.floats(1e3, 1e10), st.floats(1.01, 100.0), st.floats(1e-2, 10.0))
def test_thermal_decreasing_in_frequency(nu, ratio, T):
    a = thermal_occupation(TWO_PI * nu, T)
    b = thermal_occupation(TWO_PI * nu * ratio, T)
    if a > 1e-300:
        assert b < a


def test_feedback_off():
    ga, da = TWO_PI * 1e6, TWO_PI * 3e6
    for phi in (0.0, 1.0, math.pi):
        assert feedback_rates(ga, da, 0.0, phi) == (ga, da, ga)


def test_feedback_phase_pi_enhances_damping():
    ga, da = TWO_PI * 1e6, TWO_PI * 10e6
    for tau in (0.3, 0.7, 0.9):
        gfb, dfb, _ = feedback_rates(ga, da, tau, math.pi)
        assert gfb == pytest.approx(ga * (1 + 2 * tau), rel=1e-15)
        assert dfb == pytest.approx(da, rel=1e-12)


def test_feedback_effective_noise_rate():
    ga = TWO_PI * 1e6
    _, _, eff = feedback_rates(ga, 0.0, 0.9, math.pi)
    # t^2 (1 + tau)^2 = 0.19 * 3.61
    assert eff == pytest.approx(0.6859 * ga, rel=1e-12)


@pytest.mark.parametrize("tau", [-0.1, 1.2])
def test_feedback_rejects_tau(tau):
    with pytest.raises(InvalidParameterError):
        feedback_rates(1.0, 0.0, tau, 0.0)


@given(st.floats(0, 1), st.floats(-10, 10))
def test_effective_rate_identity(tau, phi):
    ga = 2.5
    _, _, eff = feedback_rates(ga, 0.0, tau, phi)
    expected = ga * (1 - tau**2) * abs(1 - tau * complex(math.cos(phi), math.sin(phi))) ** 2
    assert eff == pytest.approx(expected, rel=1e-12, abs=1e-14)
    assert eff >= 0


def test_feedback_continuity_at_small_tau():
    ga, da = 1.0, 2.0
    gfb, dfb, eff = feedback_rates(ga, da, 1e-9, 0.0)
    assert gfb == pytest.approx(ga, abs=1e-8)
    assert dfb == pytest.approx(da, abs=1e-8)
    assert eff == pytest.approx(ga, abs=1e-8)


@given(st.floats(0, 1))
def test_transmission_identity(tau):
    p = baseline_params(tau=tau)
    assert p.t_bs**2 + p.tau**2 == pytest.approx(1.0, abs=1e-12)


def test_derived_rates_occupation_floor():
    r = derive_rates(baseline_params(T_a=0.0, T_m=0.0, T_b=0.0, T_d=0.0))
    assert (r.N_a, r.N_m, r.N_b, r.N_d) == (0.0, 0.0, 0.0, 0.0)
    assert (r.calN_a, r.calN_m, r.calN_b, r.calN_d) == (1.0, 1.0, 1.0, 1.0)


def test_validate_baseline_clean():
    assert validate(baseline_params()) == []


def test_validate_tau_out_of_range():
    diags = validate(baseline_params(tau=1.2))
    assert any(d.level == "error" and d.key == "tau" and "tau out of range" in d.message for d in diags)


def test_validate_gain_regime_warning():
    diags = validate(baseline_params(tau=0.99, phi=0.0))
    assert [d.level for d in diags] == ["warning"]
    assert "gamma_fb <= 0" in diags[0].message


def test_validate_low_q_warning():
    diags = validate(baseline_params(gamma_b=TWO_PI * 1e5))
    assert any(d.level == "warning" and d.key == "gamma_b" for d in diags)


def test_validate_never_raises_on_garbage():
    diags = validate(baseline_params(gamma_a=-1.0, T_b=-3.0, tau=float("nan")))
    assert diags and all(d.level == "error" for d in diags)


BASE_DOC = {
    "omega_a_hz": 10e9,
    "omega_b_hz": 10e6,
    "omega_d_hz": 10e6,
    "delta_a_hz": 10e6,
    "delta_m_hz": 10e6,
    "gamma_a_hz": 1e6,
    "gamma_b_hz": 100.0,
    "gamma_d_hz": 100.0,
    "gamma_m_hz": 1e6,
    "g_hz": 3.2e6,
    "G_a_hz": 3.2e6,
    "G_m_hz": 4.8e6,
    "tau": 0.0,
    "phi_rad": 0.0,
    "T_a_K": 0.01,
    "T_m_K": 0.01,
    "T_b_K": 0.1,
    "T_d_K": 0.1,
}


def test_json_matches_baseline():
    assert params_from_dict(BASE_DOC) == baseline_params()


def test_json_round_trip():
    doc = dict(BASE_DOC, P_L_W=1e-3, g_m_hz=0.2)
    again = params_to_dict(params_from_dict(doc))
    assert again.keys() == doc.keys()
    for k in doc:
        assert again[k] == pytest.approx(doc[k], rel=1e-15)


def test_json_errors_name_key():
    with pytest.raises(ConfigError) as ei:
        params_from_dict(dict(BASE_DOC, tau=1.5))
    assert ei.value.key == "tau"
    with pytest.raises(ConfigError) as ei:
        params_from_dict({k: v for k, v in BASE_DOC.items() if k != "g_hz"})
    assert ei.value.key == "g_hz"
    with pytest.raises(ConfigError) as ei:
        params_from_dict(dict(BASE_DOC, bogus=1))
    assert ei.value.key == "bogus"
    with pytest.raises(ConfigError) as ei:
        params_from_dict(dict(BASE_DOC, gamma_b_hz="fast"))
    assert ei.value.key == "gamma_b_hz"


def test_cavity_drive_from_power():
    p = params_from_dict(dict(BASE_DOC, P_L_W=1e-3))
    w0 = TWO_PI * (10e9 - 10e6)
    assert p.cavity_drive == pytest.approx(math.sqrt(2 * TWO_PI * 1e6 * 1e-3 / (HBAR * w0)), rel=1e-14)
