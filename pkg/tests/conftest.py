import math

import numpy as np
import pytest

from cmmfeedback.params import TWO_PI, baseline_params

WB = TWO_PI * 10e6


@pytest.fixture
def base():
    return baseline_params()


@pytest.fixture
def fig2_point():
    """tau = 0.9, phi = pi, both detunings on the mechanical frequency, 100 mK phonons."""
    return baseline_params(tau=0.9, phi=math.pi, delta_a=WB, delta_m=WB, T_b=0.1, T_d=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20231015)


def random_stable(rng, n=8, margin=0.1):
    """Random matrix shifted so its spectral abscissa is -margin."""
    M = rng.normal(size=(n, n))
    shift = np.max(np.linalg.eigvals(M).real) + margin
    return M - shift * np.eye(n)


def random_psd(rng, n=8):
    L = rng.normal(size=(n, n))
    return L @ L.T + 0.1 * np.eye(n)


def random_physical_cm(rng, n_modes):
    """Thermal state transformed by a random symplectic matrix."""
    from scipy.linalg import expm

    n = 2 * n_modes
    omega = np.kron(np.eye(n_modes), [[0.0, 1.0], [-1.0, 0.0]])
    H = rng.normal(size=(n, n))
    H = 0.5 * (H + H.T) * 0.4
    S = expm(omega @ H)
    nus = 0.5 + rng.exponential(0.5, size=n_modes)
    return S @ np.diag(np.repeat(nus, 2)) @ S.T


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per criterion; printed in the terminal summary."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number, title, ok, detail):
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
