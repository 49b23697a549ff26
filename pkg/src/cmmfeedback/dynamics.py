"""Linearised drift and diffusion matrices, and the stability test.

Quadrature order throughout is ``(q_d, p_d, q_a, p_a, q_m, p_m, q_b, p_b)``.
"""

from __future__ import annotations

import csv
import os
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidParameterError, NumericalError
from .params import DerivedRates, SystemParams

QUADRATURES = ("q_d", "p_d", "q_a", "p_a", "q_m", "p_m", "q_b", "p_b")
Q_D, P_D, Q_A, P_A, Q_M, P_M, Q_B, P_B = range(8)

STABILITY_EPS = 1e-9

# coupling multiplier for build_drift_derived
CONVENTIONS = {"operator": 2.0, "drift": 1.0}


def _damped_blocks(params: SystemParams, rates: DerivedRates) -> np.ndarray:
    A = np.zeros((8, 8))
    for i, (gam, w) in enumerate(
        (
            (params.gamma_d, params.omega_d),
            (rates.gamma_fb, rates.delta_fb),
            (params.gamma_m, params.delta_m),
            (params.gamma_b, params.omega_b),
        )
    ):
        k = 2 * i
        A[k, k] = A[k + 1, k + 1] = -gam
        A[k, k + 1] = w
        A[k + 1, k] = -w
    # cavity-magnon beam splitter
    A[Q_A, P_M] = params.g
    A[P_A, Q_M] = -params.g
    A[Q_M, P_A] = params.g
    A[P_M, Q_A] = -params.g
    return A


def build_drift_printed(
    params: SystemParams,
    rates: DerivedRates,
    G_a: float,
    G_m: float,
    *,
    fix_qb_pa_typo: bool = True,
) -> np.ndarray:
    """Drift matrix with the entry layout of the published 8x8 form.

    The magnon-phonon coupling sits at ``(p_m <- q_b) = -G_m`` and
    ``(p_b <- p_m) = +G_m``.  The published row for ``q_b`` also carries
    ``g`` in the ``p_a`` column, a term the linearised equations do not
    contain; ``fix_qb_pa_typo=True`` zeroes it.
    """
    G_a, G_m = float(np.real(G_a)), float(np.real(G_m))
    A = _damped_blocks(params, rates)
    A[P_D, Q_A] = -G_a
    A[P_A, Q_D] = -G_a
    A[P_M, Q_B] = -G_m
    A[P_B, P_M] = G_m
    if not fix_qb_pa_typo:
        A[Q_B, P_A] = params.g
    return A


def build_drift_derived(
    params: SystemParams,
    rates: DerivedRates,
    G_a: complex,
    G_m: complex,
    *,
    convention: str = "operator",
) -> np.ndarray:
    """Drift matrix from expanding the linearised Langevin equations in quadratures.

    With ``delta O = (q + i p)/sqrt(2)`` the terms ``-i G (O + O^dag)`` become
    ``-2 Re(G) q`` in the conjugate momentum and ``2 Im(G) q`` in the
    conjugate position.  ``convention="operator"`` keeps that factor 2;
    ``convention="drift"`` treats ``G_a`` and ``G_m`` as couplings already
    expressed at the drift-matrix level (factor 1).
    """
    try:
        c = CONVENTIONS[convention]
    except KeyError:
        raise InvalidParameterError(f"unknown coupling convention {convention!r}") from None
    G_a, G_m = complex(G_a), complex(G_m)
    A = _damped_blocks(params, rates)
    # optomechanics: a <- -i G_a (d + d^dag), d <- -i G_a (a + a^dag)
    A[Q_A, Q_D] += c * G_a.imag
    A[P_A, Q_D] += -c * G_a.real
    A[Q_D, Q_A] += c * G_a.imag
    A[P_D, Q_A] += -c * G_a.real
    # magnomechanics: m <- -i G_m (b + b^dag), b <- -i (G_m^* m + G_m m^dag)
    A[Q_M, Q_B] += c * G_m.imag
    A[P_M, Q_B] += -c * G_m.real
    A[P_B, Q_M] += -c * G_m.real
    A[P_B, P_M] += -c * G_m.imag
    return A


def diff_report(A1: np.ndarray, A2: np.ndarray, atol: float = 0.0) -> list[tuple[str, str, float, float]]:
    """Entries where two drift matrices differ, as ``(row, col, A1[r,c], A2[r,c])``.

    Row labels name the time derivative (``"d/dt p_b"``), column labels the
    quadrature it is driven by.
    """
    A1, A2 = np.asarray(A1), np.asarray(A2)
    if A1.shape != A2.shape:
        raise InvalidParameterError("matrices have different shapes")
    out = []
    for r, c in zip(*np.nonzero(np.abs(A1 - A2) > atol)):
        out.append((f"d/dt {QUADRATURES[r]}", QUADRATURES[c], float(A1[r, c]), float(A2[r, c])))
    return out


def build_diffusion(params: SystemParams, rates: DerivedRates) -> np.ndarray:
    """Diagonal diffusion matrix; the cavity entries use the feedback-filtered rate."""
    diag = [
        params.gamma_d * rates.calN_d,
        params.gamma_d * rates.calN_d,
        rates.gamma_a_eff * rates.calN_a,
        rates.gamma_a_eff * rates.calN_a,
        params.gamma_m * rates.calN_m,
        params.gamma_m * rates.calN_m,
        params.gamma_b * rates.calN_b,
        params.gamma_b * rates.calN_b,
    ]
    return np.diag(diag)


class Stability(NamedTuple):
    stable: bool
    abscissa: float


def spectral_abscissa(A: np.ndarray) -> float:
    """Largest real part among the eigenvalues of ``A``."""
    A = np.asarray(A, dtype=float)
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue computation failed: {exc}\n{np.array2string(A, precision=17)}") from exc
    return float(np.max(ev.real))


def is_stable(A: np.ndarray) -> Stability:
    """Routh-Hurwitz stability via eigenvalue real parts.

    Stable iff the spectral abscissa is below ``-1e-9 * max|A_ij|``.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NumericalError(f"non-finite drift matrix\n{np.array2string(A, precision=17)}")
    absc = spectral_abscissa(A)
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return Stability(absc < -STABILITY_EPS * scale, absc)


def write_matrix_csv(path: str | os.PathLike, M: np.ndarray) -> None:
    """Write a matrix as CSV, one row per line, ``%.17e`` formatting."""
    M = np.asarray(M, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in M:
            w.writerow([f"{v:.17e}" for v in row])


def read_matrix_csv(path: str | os.PathLike) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh)])
