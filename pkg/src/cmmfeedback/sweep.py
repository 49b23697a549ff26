"""Full pipeline per parameter point, grid sweeps and figure presets."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import Stability, build_diffusion, build_drift_derived, build_drift_printed, is_stable
from .exceptions import CMMError, InvalidParameterError
from .gaussian import EntanglementReport, full_report
from .lyapunov import check_physical, mode_determinants, solve_lyapunov, uncertainty_eigenvalue
from .params import TWO_PI, SystemParams, baseline_params, derive_rates

AXES = ("tau", "phi", "delta_a", "delta_m", "T_phonon")
DEFAULT_2D = 101
DEFAULT_1D = 201


@dataclass(frozen=True)
class DriftModel:
    """Which drift-matrix builder the pipeline uses.

    ``variant="derived"`` expands the linearised Langevin equations;
    ``variant="printed"`` uses the published entry layout.  ``convention``
    only applies to the derived builder, ``fix_qb_pa_typo`` only to the
    printed one.
    """

    variant: str = "derived"
    convention: str = "drift"
    fix_qb_pa_typo: bool = True

    def build(self, params: SystemParams, rates) -> np.ndarray:
        if self.variant == "derived":
            return build_drift_derived(params, rates, params.cap_G_a, params.cap_G_m, convention=self.convention)
        if self.variant == "printed":
            return build_drift_printed(params, rates, params.cap_G_a, params.cap_G_m, fix_qb_pa_typo=self.fix_qb_pa_typo)
        raise InvalidParameterError(f"unknown drift variant {self.variant!r}")


DEFAULT_DRIFT = DriftModel()


@dataclass
class PointResult:
    report: EntanglementReport
    stability: Stability
    A: np.ndarray
    B: np.ndarray
    sigma: np.ndarray | None = None
    uncertainty_eig: float | None = None


def evaluate(params: SystemParams, drift: DriftModel = DEFAULT_DRIFT, *, warn_unphysical: bool = True) -> PointResult:
    """Rates, drift and diffusion matrices, stability, covariance, entanglement."""
    rates = derive_rates(params)
    A = drift.build(params, rates)
    B = build_diffusion(params, rates)
    st = is_stable(A)
    if not st.stable:
        return PointResult(EntanglementReport.unstable(), st, A, B)
    sigma = solve_lyapunov(A, B, check_stable=False)
    lam = check_physical(sigma) if warn_unphysical else uncertainty_eigenvalue(sigma)
    return PointResult(full_report(sigma), st, A, B, sigma, lam)


# --- grids ---------------------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    """Inclusive linear axis.

    Values are in user units: ``tau`` dimensionless, ``phi`` in rad,
    ``delta_a``/``delta_m`` in Hz (``Delta / 2 pi``), ``T_phonon`` in K.
    """

    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXES:
            raise InvalidParameterError(f"unknown axis {self.name!r}; expected one of {AXES}")
        if self.count < 2:
            raise InvalidParameterError("axis count must be >= 2")
        if not self.start < self.stop:
            raise InvalidParameterError("axis start must be < stop")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 2:
            raise InvalidParameterError("a grid has one or two axes")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise InvalidParameterError("axis names must be distinct")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    def points(self) -> list[tuple[float, ...]]:
        """Grid points in row-major order (first axis slowest)."""
        if self.ndim == 1:
            return [(float(x),) for x in self.axes[0].values]
        return [(float(x), float(y)) for x in self.axes[0].values for y in self.axes[1].values]


def apply_axis(params: SystemParams, name: str, value: float) -> SystemParams:
    if name == "tau":
        return params.replace(tau=value)
    if name == "phi":
        return params.replace(phi=value)
    if name == "delta_a":
        return params.replace(delta_a=TWO_PI * value)
    if name == "delta_m":
        return params.replace(delta_m=TWO_PI * value)
    if name == "T_phonon":
        return params.replace(T_b=value, T_d=value)
    raise InvalidParameterError(f"unknown axis {name!r}")


@dataclass
class SweepRecord:
    coords: tuple[float, ...]
    report: EntanglementReport
    uncertainty_eig: float | None = None
    error: str | None = None
    min_mode_det: float | None = None

    @property
    def stable(self) -> bool:
        return self.report.stable


def _eval_point(job) -> SweepRecord:
    params, drift, names, coords = job
    for name, value in zip(names, coords):
        params = apply_axis(params, name, value)
    try:
        res = evaluate(params, drift, warn_unphysical=False)
    except CMMError as exc:
        return SweepRecord(coords, EntanglementReport.unstable(), error=str(exc))
    det = None if res.sigma is None else float(mode_determinants(res.sigma).min())
    return SweepRecord(coords, res.report, res.uncertainty_eig, min_mode_det=det)


def run_sweep(
    base: SystemParams,
    grid: GridSpec,
    *,
    drift: DriftModel = DEFAULT_DRIFT,
    jobs: int | None = 1,
) -> list[SweepRecord]:
    """Evaluate the pipeline on every grid point; output order is row-major.

    ``jobs`` > 1 distributes points over worker processes; ``None`` uses all
    cores.  Results do not depend on the worker count.
    """
    names = tuple(a.name for a in grid.axes)
    work = [(base, drift, names, c) for c in grid.points()]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(work) < 2:
        return [_eval_point(w) for w in work]
    chunk = max(1, len(work) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_eval_point, work, chunksize=chunk))


CSV_FIELDS = ("E_db", "E_dm", "E_da", "R_d_mb", "R_m_db", "R_b_dm", "R_min")


def _fmt(v) -> str:
    if v is None:
        return ""
    return f"{v:.17e}"


def records_to_csv(records: Sequence[SweepRecord], ndim: int) -> str:
    """CSV text: ``x[,y],E_db,...,R_min,stable``; empty cells for nulls."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["x", "y"][:ndim] + list(CSV_FIELDS) + ["stable"]
    w.writerow(head)
    for rec in records:
        d = rec.report.to_dict()
        w.writerow([_fmt(c) for c in rec.coords] + [_fmt(d[k]) for k in CSV_FIELDS] + ["true" if rec.stable else "false"])
    return buf.getvalue()


def read_csv(path) -> list[dict]:
    """Parse a sweep CSV back into dicts of floats / None / bool."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                if k == "stable":
                    parsed[k] = v == "true"
                else:
                    parsed[k] = float(v) if v != "" else None
            out.append(parsed)
    return out


# --- figure presets --------------------------------------------------------------


@dataclass(frozen=True)
class Panel:
    """One dataset of a figure: fixed parameters, a grid, and the nominal operating point."""

    label: str
    params: SystemParams
    grid: GridSpec
    operating: SystemParams = field(compare=False)


FIGURES = ("fig2", "fig3", "fig4", "fig5a", "fig5a_alt", "fig5b", "fig5c", "fig5c_alt", "fig5d")

NU_B = 10e6  # mechanical frequencies, Hz
T_MAX_FIG4 = 4.0
T_MAX_FIG5C = 1.0


def _tau_phi_grid(n=DEFAULT_2D) -> GridSpec:
    return GridSpec((Axis("tau", 0.0, 1.0, n), Axis("phi", 0.0, 2 * math.pi, n)))


def _detuning_grid(n=DEFAULT_2D) -> GridSpec:
    return GridSpec((Axis("delta_m", 0.0, 2 * NU_B, n), Axis("delta_a", 0.0, 2 * NU_B, n)))


def figure_preset(name: str) -> tuple[SystemParams, list[Panel]]:
    """Baseline parameters and the panels that make up figure ``name``.

    Mechanical baths sit at 100 mK unless the temperature is the sweep axis;
    cavity and magnon baths stay at 10 mK.
    """
    if name not in FIGURES:
        raise InvalidParameterError(f"unknown figure {name!r}; expected one of {FIGURES}")
    wb = TWO_PI * NU_B
    base = baseline_params(T_b=0.1, T_d=0.1)
    on_res = dict(delta_a=wb, delta_m=wb)
    half = dict(delta_a=0.5 * wb, delta_m=0.5 * wb)
    pi = math.pi

    if name == "fig2":
        p = base.replace(**on_res)
        return p, [Panel("fig2", p, _tau_phi_grid(), p.replace(tau=0.9, phi=pi))]
    if name == "fig3":
        p = base.replace(tau=0.9, phi=pi)
        return p, [Panel("fig3", p, _detuning_grid(), p.replace(**on_res))]
    if name == "fig4":
        p = base.replace(phi=pi, **on_res)
        grid = GridSpec((Axis("T_phonon", 0.0, T_MAX_FIG4, DEFAULT_1D),))
        return p, [Panel(f"fig4_tau{t}", p.replace(tau=t), grid, p.replace(tau=t)) for t in (0.7, 0.9)]
    if name in ("fig5a", "fig5a_alt"):
        tau = 0.7 if name == "fig5a" else 0.75
        p = base.replace(tau=tau, phi=pi)
        return p, [Panel(name, p, _detuning_grid(), p.replace(**half))]
    if name == "fig5b":
        p = base.replace(**half)
        return p, [Panel("fig5b", p, _tau_phi_grid(), p.replace(tau=0.7, phi=pi))]
    if name in ("fig5c", "fig5c_alt"):
        phi = pi if name == "fig5c" else 0.65 * pi
        p = base.replace(phi=phi, **half)
        grid = GridSpec((Axis("T_phonon", 0.0, T_MAX_FIG5C, DEFAULT_1D),))
        return p, [Panel(f"{name}_tau{t}", p.replace(tau=t), grid, p.replace(tau=t)) for t in (0.5, 0.6, 0.7)]
    # fig5d
    p = base.replace(phi=pi, **half)
    grid = GridSpec((Axis("phi", 0.0, 2 * pi, DEFAULT_1D),))
    return p, [Panel(f"fig5d_tau{t}", p.replace(tau=t), grid, p.replace(tau=t)) for t in (0.5, 0.6, 0.7)]
