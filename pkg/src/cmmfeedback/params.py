"""Physical parameters, feedback-modified rates and thermal occupations.

All rates and frequencies are stored as angular quantities (rad/s).  The
JSON document read and written by :func:`params_from_dict` /
:func:`params_to_dict` uses ordinary frequencies ``nu = omega / 2 pi`` in Hz;
the conversion happens exactly once, at that boundary.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any

from .exceptions import InvalidParameterError

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
TWO_PI = 2.0 * math.pi

# exp(-x) is below 1e-300 past this point
_MAX_EXPONENT = 690.0

MARKOV_Q_MIN = 1e3


def thermal_occupation(omega: float, T: float) -> float:
    """Bose-Einstein occupation ``1 / (exp(hbar omega / k_B T) - 1)``.

    Parameters
    ----------
    omega : float
        Mode angular frequency in rad/s, strictly positive.
    T : float
        Bath temperature in kelvin, non-negative.  ``T = 0`` returns the
        limit value 0.

    Returns
    -------
    float
        Mean thermal occupation number.
    """
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    if T < 0:
        raise InvalidParameterError(f"temperature must be non-negative, got {T!r}")
    kt = K_B * T
    if kt == 0:
        return 0.0
    x = HBAR * omega / kt
    if x > _MAX_EXPONENT:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def feedback_rates(gamma_a: float, delta_a: float, tau: float, phi: float) -> tuple[float, float, float]:
    """Cavity decay, detuning and noise rate in the presence of the feedback loop.

    Returns ``(gamma_fb, delta_fb, gamma_a_eff)`` where

    * ``gamma_fb = gamma_a (1 - 2 tau cos phi)``
    * ``delta_fb = delta_a - 2 gamma_a tau sin phi``
    * ``gamma_a_eff = gamma_a t^2 [(1 - tau cos phi)^2 + tau^2 sin^2 phi]``

    with ``t = sqrt(1 - tau^2)`` the beam-splitter transmission.
    """
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameterError(f"tau out of range [0, 1]: {tau!r}")
    t2 = 1.0 - tau * tau
    c, s = math.cos(phi), math.sin(phi)
    gamma_fb = gamma_a * (1.0 - 2.0 * tau * c)
    delta_fb = delta_a - 2.0 * gamma_a * tau * s
    gamma_a_eff = gamma_a * t2 * ((1.0 - tau * c) ** 2 + (tau * s) ** 2)
    return gamma_fb, delta_fb, gamma_a_eff


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set of the feedback-controlled magnomechanical system.

    Every rate and frequency is in rad/s; temperatures are in kelvin.
    ``cap_G_a`` and ``cap_G_m`` are the effective (linearised) couplings.
    ``omega_0`` defaults to ``omega_a - delta_a`` when left as ``None``.
    """

    omega_a: float
    omega_b: float
    omega_d: float
    delta_a: float
    delta_m: float
    gamma_a: float
    gamma_b: float
    gamma_d: float
    gamma_m: float
    g: float
    cap_G_a: complex
    cap_G_m: complex
    tau: float = 0.0
    phi: float = 0.0
    T_a: float = 0.01
    T_m: float = 0.01
    T_b: float = 0.1
    T_d: float = 0.1
    omega_0: float | None = None
    g_a: float = 0.0
    g_m: float = 0.0
    E_drive: complex = 0.0
    script_E: float | None = None
    P_L: float | None = None

    @property
    def t_bs(self) -> float:
        """Beam-splitter transmission amplitude ``sqrt(1 - tau^2)``."""
        return math.sqrt(max(0.0, 1.0 - self.tau * self.tau))

    @property
    def drive_frequency(self) -> float:
        if self.omega_0 is not None:
            return self.omega_0
        return self.omega_a - self.delta_a

    @property
    def omega_m(self) -> float:
        """Magnon angular frequency, ``omega_0 + delta_m``."""
        return self.drive_frequency + self.delta_m

    @property
    def cavity_drive(self) -> float:
        """Cavity drive strength, taken from ``script_E`` or derived from ``P_L``."""
        if self.script_E is not None:
            return self.script_E
        if self.P_L is not None:
            return math.sqrt(2.0 * self.gamma_a * self.P_L / (HBAR * self.drive_frequency))
        return 0.0

    def replace(self, **changes: Any) -> "SystemParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class DerivedRates:
    gamma_fb: float
    delta_fb: float
    gamma_a_eff: float
    N_a: float
    N_m: float
    N_b: float
    N_d: float
    calN_a: float = field(init=False)
    calN_m: float = field(init=False)
    calN_b: float = field(init=False)
    calN_d: float = field(init=False)

    def __post_init__(self) -> None:
        for mode in "ambd":
            object.__setattr__(self, f"calN_{mode}", 2.0 * getattr(self, f"N_{mode}") + 1.0)


def derive_rates(params: SystemParams) -> DerivedRates:
    """Feedback rates plus thermal occupations of the four baths."""
    gamma_fb, delta_fb, gamma_a_eff = feedback_rates(params.gamma_a, params.delta_a, params.tau, params.phi)
    return DerivedRates(
        gamma_fb=gamma_fb,
        delta_fb=delta_fb,
        gamma_a_eff=gamma_a_eff,
        N_a=thermal_occupation(params.omega_a, params.T_a),
        N_m=thermal_occupation(params.omega_m, params.T_m),
        N_b=thermal_occupation(params.omega_b, params.T_b),
        N_d=thermal_occupation(params.omega_d, params.T_d),
    )


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    key: str
    message: str

    def __str__(self) -> str:
        return f"{self.level}: {self.key}: {self.message}"


def validate(params: SystemParams) -> list[Diagnostic]:
    """Check hard invariants and soft modelling assumptions.

    Never raises; errors and warnings come back as :class:`Diagnostic` items.
    """
    out: list[Diagnostic] = []

    def err(key, msg):
        out.append(Diagnostic("error", key, msg))

    def warn(key, msg):
        out.append(Diagnostic("warning", key, msg))

    values = dataclasses.asdict(params)
    for key, value in values.items():
        if value is None:
            continue
        if not _finite(value):
            err(key, f"not finite: {value!r}")
    if out:
        return out

    if not 0.0 <= params.tau <= 1.0:
        err("tau", f"tau out of range [0, 1]: {params.tau!r}")
    for key in ("gamma_a", "gamma_b", "gamma_d", "gamma_m"):
        if not getattr(params, key) > 0:
            err(key, "damping rate must be strictly positive")
    for key in ("T_a", "T_m", "T_b", "T_d"):
        if getattr(params, key) < 0:
            err(key, "temperature must be non-negative")
    for key in ("omega_a", "omega_b", "omega_d"):
        if not getattr(params, key) > 0:
            err(key, "frequency must be strictly positive")
    if params.P_L is not None and params.P_L < 0:
        err("P_L", "laser power must be non-negative")
    if any(d.level == "error" for d in out):
        return out

    if not params.omega_m > 0:
        err("delta_m", "implied magnon frequency omega_0 + delta_m is not positive")
    for w, gam, name in ((params.omega_b, params.gamma_b, "b"), (params.omega_d, params.gamma_d, "d")):
        q = w / gam
        if q <= MARKOV_Q_MIN:
            warn(f"gamma_{name}", f"quality factor {q:.3g} <= {MARKOV_Q_MIN:g}; Markovian bath assumption is doubtful")
    if 1.0 - 2.0 * params.tau * math.cos(params.phi) <= 0:
        warn("tau", "gamma_fb <= 0: feedback-induced gain regime, stability must be checked")
    return out


def _finite(value) -> bool:
    try:
        return math.isfinite(abs(complex(value)))
    except TypeError:
        return True


# --- JSON parameter document -------------------------------------------------

# JSON key -> (field name, multiply by 2 pi)
REQUIRED_KEYS: dict[str, tuple[str, bool]] = {
    "omega_a_hz": ("omega_a", True),
    "omega_b_hz": ("omega_b", True),
    "omega_d_hz": ("omega_d", True),
    "delta_a_hz": ("delta_a", True),
    "delta_m_hz": ("delta_m", True),
    "gamma_a_hz": ("gamma_a", True),
    "gamma_b_hz": ("gamma_b", True),
    "gamma_d_hz": ("gamma_d", True),
    "gamma_m_hz": ("gamma_m", True),
    "g_hz": ("g", True),
    "G_a_hz": ("cap_G_a", True),
    "G_m_hz": ("cap_G_m", True),
    "tau": ("tau", False),
    "phi_rad": ("phi", False),
    "T_a_K": ("T_a", False),
    "T_m_K": ("T_m", False),
    "T_b_K": ("T_b", False),
    "T_d_K": ("T_d", False),
}

OPTIONAL_KEYS: dict[str, tuple[str, bool]] = {
    "E_drive_hz": ("E_drive", True),
    "script_E_hz": ("script_E", True),
    "P_L_W": ("P_L", False),
    "g_a_hz": ("g_a", True),
    "g_m_hz": ("g_m", True),
    "omega_0_hz": ("omega_0", True),
}

ALL_KEYS = {**REQUIRED_KEYS, **OPTIONAL_KEYS}


class ConfigError(InvalidParameterError):
    """Malformed parameter document; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def params_from_dict(doc: dict[str, Any], *, check: bool = True) -> SystemParams:
    """Build :class:`SystemParams` from a JSON-style document in Hz units.

    With ``check=True`` any hard validation error raises :class:`ConfigError`
    naming the JSON key at fault.
    """
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "expected a JSON object")
    unknown = sorted(set(doc) - set(ALL_KEYS))
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise ConfigError(missing[0], "missing required key")
    kwargs: dict[str, Any] = {}
    for key, value in doc.items():
        name, is_freq = ALL_KEYS[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        value = float(value)
        kwargs[name] = TWO_PI * value if is_freq else value
    params = SystemParams(**kwargs)
    if check:
        field_to_key = {name: key for key, (name, _) in ALL_KEYS.items()}
        for diag in validate(params):
            if diag.level == "error":
                raise ConfigError(field_to_key.get(diag.key, diag.key), diag.message)
    return params


def params_to_dict(params: SystemParams) -> dict[str, float]:
    """Inverse of :func:`params_from_dict`; complex couplings are reduced to their real part."""
    doc: dict[str, float] = {}
    for key, (name, is_freq) in ALL_KEYS.items():
        value = getattr(params, name)
        if value is None:
            continue
        if isinstance(value, complex):
            value = value.real
        if key in OPTIONAL_KEYS and value == 0.0 and name in ("E_drive", "g_a", "g_m"):
            continue
        doc[key] = value / TWO_PI if is_freq else float(value)
    return doc


def baseline_params(**overrides: Any) -> SystemParams:
    """Reference operating point: 10 GHz cavity, 10 MHz mechanics, MHz-scale couplings.

    Overrides are given in internal units (rad/s, K).
    """
    base = SystemParams(
        omega_a=TWO_PI * 10e9,
        omega_b=TWO_PI * 10e6,
        omega_d=TWO_PI * 10e6,
        delta_a=TWO_PI * 10e6,
        delta_m=TWO_PI * 10e6,
        gamma_a=TWO_PI * 1e6,
        gamma_b=TWO_PI * 100.0,
        gamma_d=TWO_PI * 100.0,
        gamma_m=TWO_PI * 1e6,
        g=TWO_PI * 3.2e6,
        cap_G_a=TWO_PI * 3.2e6,
        cap_G_m=TWO_PI * 4.8e6,
        tau=0.0,
        phi=0.0,
        T_a=0.01,
        T_m=0.01,
        T_b=0.1,
        T_d=0.1,
    )
    return base.replace(**overrides) if overrides else base
