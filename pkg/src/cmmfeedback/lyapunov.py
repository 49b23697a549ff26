"""Steady-state covariance from the Lyapunov equation, plus a dynamical oracle."""

from __future__ import annotations

import math
import warnings

import numpy as np
import scipy.linalg as sla

from .dynamics import is_stable
from .exceptions import InvalidParameterError, NumericalError, UnstableSystemError

RESIDUAL_TOL = 1e-10
PHYSICALITY_TOL = 1e-9


class PhysicalityWarning(UserWarning):
    """A covariance matrix violates the uncertainty relation beyond tolerance."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``Omega`` with ``[[0, 1], [-1, 0]]`` per mode."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def lyapunov_residual(A: np.ndarray, B: np.ndarray, sigma: np.ndarray) -> float:
    """Relative residual ``||A s + s A^T + B||_F / ||B||_F``."""
    r = A @ sigma + sigma @ A.T + B
    nb = np.linalg.norm(B)
    return float(np.linalg.norm(r) / nb) if nb > 0 else float(np.linalg.norm(r))


def solve_lyapunov(A: np.ndarray, B: np.ndarray, *, check_stable: bool = True) -> np.ndarray:
    """Solve ``A sigma + sigma A^T = -B`` for the symmetric covariance ``sigma``.

    The equation is vectorised as ``(I kron A + A kron I) vec(sigma) = -vec(B)``
    (column-major ``vec``) and solved by dense LU with one round of iterative
    refinement.

    Raises
    ------
    UnstableSystemError
        If ``A`` fails the stability test (no steady state exists).
    NumericalError
        If the Kronecker system is singular.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = A.shape[0]
    if check_stable:
        st = is_stable(A)
        if not st.stable:
            raise UnstableSystemError(f"no steady state: spectral abscissa {st.abscissa:.6g} >= 0")
    eye = np.eye(n)
    K = np.kron(eye, A) + np.kron(A, eye)
    rhs = -B.reshape(-1, order="F")
    try:
        lu = sla.lu_factor(K, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"Kronecker system factorisation failed: {exc}") from exc
    if np.any(np.diag(lu[0]) == 0):
        raise NumericalError("singular Kronecker system")
    x = sla.lu_solve(lu, rhs)
    x += sla.lu_solve(lu, rhs - K @ x)
    sigma = x.reshape(n, n, order="F")
    return 0.5 * (sigma + sigma.T)


def integrate_moments(
    A: np.ndarray,
    B: np.ndarray,
    sigma_0: np.ndarray,
    t_end: float,
    dt: float,
) -> np.ndarray:
    """Integrate ``d sigma/dt = A sigma + sigma A^T + B`` with classical RK4.

    One fixed step of size ``dt`` is an affine map ``sigma -> M(sigma) + c``.
    That map is tabulated by applying the RK4 step to each basis matrix, and
    ``ceil(t_end / dt)`` steps are then composed by repeated squaring.  The
    result is identical to stepping one at a time, up to round-off.

    Requires ``dt < 0.1 / ||A||_2`` and a symmetric ``sigma_0``.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    sigma_0 = np.asarray(sigma_0, dtype=float)
    norm_a = np.linalg.norm(A, 2)
    if not (dt > 0 and dt * norm_a < 0.1):
        raise InvalidParameterError(f"step size dt={dt:g} violates dt < 0.1/||A|| = {0.1 / norm_a:g}")
    if t_end < 0:
        raise InvalidParameterError("t_end must be non-negative")
    if not np.allclose(sigma_0, sigma_0.T, rtol=0, atol=1e-12 * max(1.0, np.abs(sigma_0).max())):
        raise InvalidParameterError("sigma_0 must be symmetric")
    n = A.shape[0]
    steps = math.ceil(t_end / dt - 1e-12)

    def rhs(s, forcing):
        return A @ s + s @ A.T + forcing

    def rk4(s, forcing):
        k1 = rhs(s, forcing)
        k2 = rhs(s + 0.5 * dt * k1, forcing)
        k3 = rhs(s + 0.5 * dt * k2, forcing)
        k4 = rhs(s + dt * k3, forcing)
        return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    zero = np.zeros((n, n))
    # linear part: columns are images of the basis matrices
    M = np.empty((n * n, n * n))
    for j in range(n * n):
        e = np.zeros(n * n)
        e[j] = 1.0
        M[:, j] = rk4(e.reshape(n, n), zero).reshape(-1)
    c = rk4(zero, B).reshape(-1)

    # accumulate (M_total, c_total) for `steps` applications
    M_tot = np.eye(n * n)
    c_tot = np.zeros(n * n)
    M_pow, c_pow = M, c
    k = steps
    while k:
        if k & 1:
            M_tot, c_tot = M_pow @ M_tot, M_pow @ c_tot + c_pow
        k >>= 1
        if k:
            M_pow, c_pow = M_pow @ M_pow, M_pow @ c_pow + c_pow
    out = (M_tot @ sigma_0.reshape(-1) + c_tot).reshape(n, n)
    return 0.5 * (out + out.T)


def uncertainty_eigenvalue(sigma: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``sigma + i Omega / 2``."""
    sigma = np.asarray(sigma, dtype=float)
    omega = symplectic_form(sigma.shape[0] // 2)
    return float(np.linalg.eigvalsh(sigma + 0.5j * omega)[0])


def mode_determinants(sigma: np.ndarray) -> np.ndarray:
    """Determinants of the single-mode 2x2 diagonal blocks."""
    sigma = np.asarray(sigma, dtype=float)
    k = sigma.shape[0] // 2
    return np.array([np.linalg.det(sigma[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]) for i in range(k)])


def check_physical(sigma: np.ndarray, tol: float = PHYSICALITY_TOL) -> float:
    """Return the uncertainty eigenvalue, warning if it is below ``-tol``."""
    lam = uncertainty_eigenvalue(sigma)
    if lam < -tol:
        warnings.warn(
            f"covariance matrix violates the uncertainty relation: min eig(sigma + i Omega/2) = {lam:.6g}",
            PhysicalityWarning,
            stacklevel=2,
        )
    return lam
