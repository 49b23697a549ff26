"""Command-line front end.

Exit codes: 0 success, 2 configuration or usage error, 3 unstable point
(``point`` only).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from pathlib import Path

from .dynamics import write_matrix_csv
from .exceptions import CMMError
from .params import ALL_KEYS, ConfigError, params_from_dict, params_to_dict
from .sweep import FIGURES, Axis, DriftModel, GridSpec, evaluate, figure_preset, records_to_csv, run_sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSTABLE = 3


class UsageError(Exception):
    pass


def _atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def _add_overrides(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameter overrides (replace the config key of the same name)")
    for key in ALL_KEYS:
        g.add_argument(_flag(key), dest=f"ov_{key}", type=float, metavar="X")
    g.add_argument("--T-K", dest="ov_T_K", type=float, metavar="X", help="set both T_b_K and T_d_K")


def _add_drift(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=("derived", "printed"), default="derived", help="drift-matrix builder")
    p.add_argument(
        "--convention",
        choices=("drift", "operator"),
        default="drift",
        help="coupling convention of the derived builder",
    )
    p.add_argument(
        "--keep-qb-pa-typo",
        action="store_true",
        help="printed builder: keep the g entry at (q_b, p_a)",
    )


def _drift(args) -> DriftModel:
    return DriftModel(variant=args.variant, convention=args.convention, fix_qb_pa_typo=not args.keep_qb_pa_typo)


def _load_params(args):
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    for key in ALL_KEYS:
        val = getattr(args, f"ov_{key}", None)
        if val is not None:
            doc[key] = val
    if getattr(args, "ov_T_K", None) is not None:
        doc["T_b_K"] = doc["T_d_K"] = args.ov_T_K
    try:
        return params_from_dict(doc)
    except ConfigError as exc:
        raise UsageError(f"invalid config key {exc.key!r}: {exc}") from exc


def _parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"axis must be name:start:stop:count, got {text!r}")
    try:
        return Axis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise UsageError(f"bad axis {text!r}: {exc}") from exc


def cmd_point(args) -> int:
    params = _load_params(args)
    res = evaluate(params, _drift(args))
    out = res.report.to_dict()
    out["spectral_abscissa"] = res.stability.abscissa
    if res.uncertainty_eig is not None:
        out["uncertainty_eigenvalue"] = res.uncertainty_eig
    print(json.dumps(out, indent=2))
    return EXIT_OK if res.report.stable else EXIT_UNSTABLE


def cmd_sweep(args) -> int:
    params = _load_params(args)
    try:
        grid = GridSpec(tuple(_parse_axis(a) for a in args.axis))
    except CMMError as exc:
        raise UsageError(str(exc)) from exc
    records = run_sweep(params, grid, drift=_drift(args), jobs=args.jobs)
    _atomic_write(Path(args.output), records_to_csv(records, grid.ndim))
    return EXIT_OK


def _grid_meta(grid: GridSpec) -> list[dict]:
    return [dataclasses.asdict(a) for a in grid.axes]


def cmd_figure(args) -> int:
    if args.name not in FIGURES:
        raise UsageError(f"unknown figure {args.name!r}; choose from {', '.join(FIGURES)}")
    drift = _drift(args)
    base, panels = figure_preset(args.name)
    outdir = Path(args.outdir)
    texts: dict[str, str] = {}
    meta = {
        "figure": args.name,
        "drift_model": dataclasses.asdict(drift),
        "base_params": params_to_dict(base),
        "panels": [],
    }
    for panel in panels:
        records = run_sweep(panel.params, panel.grid, drift=drift, jobs=args.jobs)
        texts[f"{panel.label}.csv"] = records_to_csv(records, panel.grid.ndim)
        meta["panels"].append(
            {
                "label": panel.label,
                "csv": f"{panel.label}.csv",
                "params": params_to_dict(panel.params),
                "axes": _grid_meta(panel.grid),
            }
        )
    texts["meta.json"] = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    for fname, text in texts.items():
        _atomic_write(outdir / fname, text)
    return EXIT_OK


def cmd_dump_matrices(args) -> int:
    params = _load_params(args)
    res = evaluate(params, _drift(args), warn_unphysical=False)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = {"A.csv": res.A, "B.csv": res.B}
    if res.sigma is not None and args.sigma:
        files["sigma.csv"] = res.sigma
    for fname, M in files.items():
        fd, tmp = tempfile.mkstemp(dir=outdir, prefix=f".{fname}.", suffix=".tmp")
        os.close(fd)
        try:
            write_matrix_csv(tmp, M)
            os.replace(tmp, outdir / fname)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cmmfb",
        description="Steady-state Gaussian entanglement of a coherent-feedback cavity magnomechanical system.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("point", help="evaluate one parameter point, print a JSON report")
    p.add_argument("config", help="JSON parameter document")
    _add_overrides(p)
    _add_drift(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="evaluate a 1D or 2D grid, write CSV")
    p.add_argument("config")
    p.add_argument("--axis", action="append", required=True, metavar="NAME:START:STOP:COUNT")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    _add_overrides(p)
    _add_drift(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="compute a figure preset, one CSV per panel plus meta.json")
    p.add_argument("name", help=", ".join(FIGURES))
    p.add_argument("-o", "--outdir", default=".")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    _add_drift(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("dump-matrices", help="write drift (A.csv) and diffusion (B.csv) matrices")
    p.add_argument("config")
    p.add_argument("-o", "--outdir", default=".")
    p.add_argument("--sigma", action="store_true", help="also write sigma.csv when the point is stable")
    _add_overrides(p)
    _add_drift(p)
    p.set_defaults(func=cmd_dump_matrices)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CMMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
