"""Logarithmic negativities and residual contangles of Gaussian states.

Mode order of the full covariance matrix is ``(d, a, m, b)``: mirror, cavity,
magnon, magnon-phonon.  Quadratures obey ``[q, p] = i``, so the vacuum has
covariance ``I / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .exceptions import InvalidParameterError, PhysicalityError
from .lyapunov import symplectic_form

MODES = ("d", "a", "m", "b")
_ROUNDOFF = 1e-12


def mode_index(mode) -> int:
    if isinstance(mode, str):
        try:
            return MODES.index(mode)
        except ValueError:
            raise InvalidParameterError(f"unknown mode {mode!r}") from None
    idx = int(mode)
    if not 0 <= idx < len(MODES):
        raise InvalidParameterError(f"mode index out of range: {mode!r}")
    return idx


def reduce(sigma: np.ndarray, modes: Iterable) -> np.ndarray:
    """Covariance block of the selected modes, in canonical ``(d, a, m, b)`` order."""
    modes = list(modes)
    if not modes:
        raise InvalidParameterError("empty mode set")
    idx = [mode_index(m) for m in modes]
    if len(set(idx)) != len(idx):
        raise InvalidParameterError(f"duplicate modes in {modes!r}")
    rows = [i for k in sorted(idx) for i in (2 * k, 2 * k + 1)]
    return np.asarray(sigma)[np.ix_(rows, rows)]


def partial_transpose(sigma: np.ndarray, mode: int) -> np.ndarray:
    """Flip the sign of the momentum of ``mode`` (block-local index)."""
    p = np.ones(sigma.shape[0])
    p[2 * mode + 1] = -1.0
    return sigma * np.outer(p, p)


def _log_neg(nu: float) -> float:
    if nu <= 0:
        return math.inf
    return max(0.0, -math.log(2.0 * nu))


def logneg_two_mode(sigma4: np.ndarray) -> tuple[float, float]:
    """Logarithmic negativity of a two-mode state from its invariants.

    ``nu_minus = 2^{-1/2} [Gamma - sqrt(Gamma^2 - 4 det sigma)]^{1/2}`` with
    ``Gamma = det X + det Y - 2 det Z``; ``E = max(0, -ln(2 nu_minus))``.

    Returns ``(E, nu_minus)``.
    """
    s = np.asarray(sigma4, dtype=float)
    if s.shape != (4, 4):
        raise InvalidParameterError(f"expected a 4x4 block, got shape {s.shape}")
    X, Y, Z = s[:2, :2], s[2:, 2:], s[:2, 2:]
    gamma = np.linalg.det(X) + np.linalg.det(Y) - 2.0 * np.linalg.det(Z)
    det = np.linalg.det(s)
    disc = gamma * gamma - 4.0 * det
    scale = max(gamma * gamma, 4.0 * abs(det), 1.0)
    if disc < 0:
        if disc < -_ROUNDOFF * scale:
            raise PhysicalityError(f"Gamma^2 - 4 det sigma = {disc:.6g} < 0")
        disc = 0.0
    inner = gamma - math.sqrt(disc)
    if inner < 0:
        if inner < -_ROUNDOFF * max(abs(gamma), 1.0):
            raise PhysicalityError(f"negative squared symplectic eigenvalue {inner / 2:.6g}")
        inner = 0.0
    nu = math.sqrt(inner / 2.0)
    return _log_neg(nu), nu


def symplectic_spectrum(sigma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues (ascending, one per mode): moduli of eig(i Omega sigma)."""
    s = np.asarray(sigma, dtype=float)
    k = s.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(k) @ s))
    return np.sort(ev)[::2]


def logneg_general(sigma: np.ndarray, transposed_mode: int) -> tuple[float, float]:
    """Logarithmic negativity of ``transposed_mode`` versus the rest of the block.

    Works for any number of modes; the smallest symplectic eigenvalue of the
    partially transposed block sets the value.  Returns ``(E, nu_minus)``.
    """
    s = np.asarray(sigma, dtype=float)
    k = s.shape[0] // 2
    if s.shape != (2 * k, 2 * k) or k < 2:
        raise InvalidParameterError(f"expected a 2k x 2k block with k >= 2, got {s.shape}")
    if not 0 <= transposed_mode < k:
        raise InvalidParameterError(f"transposed mode {transposed_mode} outside block of {k} modes")
    nu = float(symplectic_spectrum(partial_transpose(s, transposed_mode))[0])
    return _log_neg(nu), nu


def _pair_key(i: str, j: str) -> str:
    return "".join(sorted((i, j), key=MODES.index))


@dataclass
class EntanglementReport:
    E_db: float | None
    E_dm: float | None
    E_da: float | None
    R_d_mb: float | None
    R_m_db: float | None
    R_b_dm: float | None
    R_min: float | None
    stable: bool
    nu_minus: dict[str, float] = field(default_factory=dict)
    E_1v2: dict[str, float] = field(default_factory=dict)

    @property
    def genuine_tripartite(self) -> bool:
        return self.R_min is not None and self.R_min > 0

    @classmethod
    def unstable(cls) -> "EntanglementReport":
        return cls(None, None, None, None, None, None, None, False)

    def to_dict(self) -> dict:
        """Flat JSON-ready mapping."""
        return {
            "E_db": self.E_db,
            "E_dm": self.E_dm,
            "E_da": self.E_da,
            "R_d_mb": self.R_d_mb,
            "R_m_db": self.R_m_db,
            "R_b_dm": self.R_b_dm,
            "R_min": self.R_min,
            "stable": self.stable,
            "nu_minus_db": self.nu_minus.get("db"),
            "nu_minus_dm": self.nu_minus.get("dm"),
            "nu_minus_da": self.nu_minus.get("da"),
        }


def residual_contangle(sigma: np.ndarray) -> dict:
    """Residual contangles of the mirror/magnon/phonon subsystem.

    Contangles are squared logarithmic negativities; for focus mode ``i``
    the residual is ``C(i|jk) - C(i|j) - C(i|k)``.  Returns a dict with the
    three residuals, ``R_min``, and the one-versus-two and pairwise values
    that went into them.
    """
    trio = ("d", "m", "b")
    block = reduce(sigma, trio)
    pair_E: dict[str, float] = {}
    pair_nu: dict[str, float] = {}
    for x in range(3):
        for y in range(x + 1, 3):
            key = trio[x] + trio[y]
            e, nu = logneg_two_mode(reduce(sigma, (trio[x], trio[y])))
            pair_E[key], pair_nu[key] = e, nu
    one_vs_two: dict[str, float] = {}
    residuals: dict[str, float] = {}
    for pos, i in enumerate(trio):
        j, k = (m for m in trio if m != i)
        e, nu = logneg_general(block, pos)
        one_vs_two[f"{i}|{j}{k}"] = e
        pair_nu[f"{i}|{j}{k}"] = nu
        residuals[f"R_{i}_{j}{k}"] = e**2 - pair_E[_pair_key(i, j)] ** 2 - pair_E[_pair_key(i, k)] ** 2
    return {
        **residuals,
        "R_min": min(residuals.values()),
        "E_1v2": {**one_vs_two, **{f"{k[0]}|{k[1]}": v for k, v in pair_E.items()}},
        "nu_minus": pair_nu,
    }


def full_report(sigma: np.ndarray, *, stable: bool = True) -> EntanglementReport:
    """Bipartite negativities of the mirror with every other mode, plus residual contangles."""
    nu_minus: dict[str, float] = {}
    E: dict[str, float] = {}
    for other in ("b", "m", "a"):
        key = "d" + other
        try:
            E[key], nu_minus[key] = logneg_two_mode(reduce(sigma, ("d", other)))
        except PhysicalityError as exc:
            raise PhysicalityError(f"partition d|{other}: {exc}") from exc
    try:
        tri = residual_contangle(sigma)
    except PhysicalityError as exc:
        raise PhysicalityError(f"tripartite d|m|b: {exc}") from exc
    for key, val in tri["nu_minus"].items():
        nu_minus.setdefault(key, val)
    return EntanglementReport(
        E_db=E["db"],
        E_dm=E["dm"],
        E_da=E["da"],
        R_d_mb=tri["R_d_mb"],
        R_m_db=tri["R_m_db"],
        R_b_dm=tri["R_b_dm"],
        R_min=tri["R_min"],
        stable=stable,
        nu_minus=nu_minus,
        E_1v2=tri["E_1v2"],
    )


# --- reference states ---------------------------------------------------------


def two_mode_squeezed_vacuum(r: float) -> np.ndarray:
    """Covariance of a two-mode squeezed vacuum with squeezing ``r``."""
    ch, sh = math.cosh(2 * r) / 2, math.sinh(2 * r) / 2
    X = ch * np.eye(2)
    Z = sh * np.diag([1.0, -1.0])
    return np.block([[X, Z], [Z, X]])


def single_mode_symplectic(theta: float, r: float) -> np.ndarray:
    """Rotation by ``theta`` followed by squeezing ``r``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.diag([math.exp(-r), math.exp(r)]) @ np.array([[c, s], [-s, c]])
