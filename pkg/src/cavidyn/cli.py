"""Command-line interface: run / sweep / analyze / predict / convergence.

Configuration files are TOML with the sections system, electronic,
vibrational, cavity, relaxation, pulse, integrator, dark_bath; missing keys
fall back to the defaults and unknown keys are hard errors.  All results are
written atomically (temp file + rename): trajectory.csv / sweep.csv plus a
manifest.json that fully determines the run.

Exit codes: 0 success, 1 validation error, 2 runtime/integration failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import os
import sys
import time

import numpy as np

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .analytics import (
    default_resonance_weight,
    predicted_photon_gain,
    predicted_photon_gain_longtime,
    predicted_vibrational_gain,
)
from .dynamics import IntegrationError, Trajectory, convergence_check, integrate
from .observables import AnalysisError, fit_exponential_lifetime, rabi_splitting_from_trajectory
from .params import ParameterError, Params, Pulse
from .sweep import WORKERS_ENV_VAR, SweepSpec, detuning_scan, run_sweep
from .units import AU_TIME_TO_FS, HARTREE_TO_CM1, UnitError

# config layout: section -> {config key: Params field}
_CONFIG_LAYOUT = {
    "system": {
        "n_e": "n_e",
        "n_v": "n_v",
        "collective_term_factor": "collective_term_factor",
        "cross_term_factor": "cross_term_factor",
    },
    "electronic": {
        "omega_e": "omega_e",
        "d_eg": "d_eg",
        "d_gg": "d_gg",
        "d_ee": "d_ee",
    },
    "vibrational": {
        "omega_v": "omega_v",
        "d_v": "d_v",
    },
    "cavity": {
        "omega_c": "omega_c",
        "lambda_c": "lambda_c",
    },
    "relaxation": {
        "gamma_e": "gamma_e",
        "gamma_c": "gamma_c",
        "gamma_v_total": "gamma_v_total",
    },
    "pulse": {
        "E0": "pulse.E0",
        "t_start": "pulse.t_start",
        "sigma": "pulse.sigma",
    },
    "integrator": {
        "dt": "dt",
        "t_final": "t_final",
        "record_stride": "record_stride",
    },
    "dark_bath": {
        "n_dark": "n_dark",
        "omega_min": "dark_omega_min",
        "omega_max": "dark_omega_max",
        "sampling": "dark_sampling",
        "seed": "dark_seed",
    },
}

_INT_FIELDS = {"n_dark", "record_stride", "dark_seed",
               "collective_term_factor", "cross_term_factor"}
_STR_FIELDS = {"dark_sampling"}

TRAJECTORY_COLUMNS = (
    "t_au", "t_fs", "P_e", "re_rho_eg", "im_rho_eg",
    "E_e_cm1", "E_c_cm1", "E_B_cm1", "E_D_cm1",
    "q_c", "p_c", "q_B", "p_B",
)

SWEEP_COLUMNS = ("param_value", "E_D_5ps_cm1", "E_c_peak_cm1",
                 "P_e_max", "P_e_final", "status")


def parse_config(path) -> Params:
    """Read a TOML config; missing keys fall back to the defaults, unknown
    sections or keys are errors."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParameterError(f"{path}: parse error: {exc}") from exc

    fields: dict = {}
    pulse_fields: dict = {}
    for section, content in data.items():
        if section not in _CONFIG_LAYOUT:
            raise ParameterError(f"{path}: unknown section [{section}]")
        if not isinstance(content, dict):
            raise ParameterError(f"{path}: [{section}] must be a table")
        for key, value in content.items():
            if key not in _CONFIG_LAYOUT[section]:
                raise ParameterError(f"{path}: unknown key {section}.{key}")
            target = _CONFIG_LAYOUT[section][key]
            if key in _STR_FIELDS or target.endswith("sampling"):
                if not isinstance(value, str):
                    raise ParameterError(f"{path}: {section}.{key} must be a string")
            elif target.split(".")[-1] in _INT_FIELDS or key in _INT_FIELDS:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ParameterError(f"{path}: {section}.{key} must be an integer")
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ParameterError(f"{path}: {section}.{key} must be a number")
                value = float(value)
            if target.startswith("pulse."):
                pulse_fields[target.split(".", 1)[1]] = value
            else:
                fields[target] = value

    if pulse_fields:
        fields["pulse"] = dataclasses.replace(Pulse(), **pulse_fields)
    params = Params(**fields)
    params.validate()
    return params


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_config(params: Params) -> str:
    """Render Params as TOML text; parse_config(write_config(p)) == p."""
    lines = []
    for section, keys in _CONFIG_LAYOUT.items():
        lines.append(f"[{section}]")
        for key, target in keys.items():
            if target.startswith("pulse."):
                value = getattr(params.pulse, target.split(".", 1)[1])
            else:
                value = getattr(params, target)
            lines.append(f"{key} = {_fmt(value)}")
        lines.append("")
    return "\n".join(lines)


def _git_blob_sha1(text: str) -> str:
    data = text.encode()
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _params_to_jsonable(params: Params) -> dict:
    d = dataclasses.asdict(params)
    d["d_bar"] = params.d_bar
    d["delta_d"] = params.delta_d
    d["gamma_v"] = params.gamma_v
    return d


def write_manifest(path, params: Params, duration_s: float, extra: dict | None = None) -> None:
    manifest = {
        "tool": "cavidyn",
        "version": __version__,
        "params": _params_to_jsonable(params),
        "dt": params.dt,
        "record_stride": int(params.record_stride),
        "config_hash": _git_blob_sha1(write_config(params)),
        "wall_clock_s": duration_s,
    }
    if extra:
        manifest.update(extra)
    _atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def write_trajectory_csv(path, traj: Trajectory) -> None:
    """Columns in schema order, 17 significant digits (bit round-trippable)."""
    rows = [",".join(TRAJECTORY_COLUMNS)]
    cols = (
        traj.times, traj.times * AU_TIME_TO_FS, traj.P_e,
        traj.re_rho_eg, traj.im_rho_eg,
        traj.E_e * HARTREE_TO_CM1, traj.E_c * HARTREE_TO_CM1,
        traj.E_B * HARTREE_TO_CM1, traj.E_D * HARTREE_TO_CM1,
        traj.q_c, traj.p_c, traj.q_B, traj.p_B,
    )
    for i in range(len(traj.times)):
        rows.append(",".join(f"{c[i]:.17g}" for c in cols))
    _atomic_write(path, "\n".join(rows) + "\n")


def read_trajectory_csv(path) -> dict:
    """Read a trajectory.csv back into column arrays, validating the schema."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise AnalysisError(f"{path}: empty file") from None
        if tuple(header) != TRAJECTORY_COLUMNS:
            raise AnalysisError(f"{path}: unexpected columns {header}")
        data = []
        for i, row in enumerate(reader, start=2):
            if len(row) != len(TRAJECTORY_COLUMNS):
                raise AnalysisError(f"{path}: malformed row {i}")
            try:
                data.append([float(x) for x in row])
            except ValueError:
                raise AnalysisError(f"{path}: malformed row {i}") from None
    if not data:
        raise AnalysisError(f"{path}: no data rows")
    arr = np.array(data)
    return {name: arr[:, i] for i, name in enumerate(TRAJECTORY_COLUMNS)}


def write_sweep_csv(path, table) -> None:
    rows = [",".join(SWEEP_COLUMNS)]
    for r in table.rows:
        rows.append(",".join([
            f"{r.param_value:.17g}",
            f"{r.E_D_cm1:.17g}",
            f"{r.E_c_peak_cm1:.17g}",
            f"{r.P_e_max:.17g}",
            f"{r.P_e_final:.17g}",
            r.status,
        ]))
    _atomic_write(path, "\n".join(rows) + "\n")


def apply_overrides(params: Params, overrides) -> Params:
    """Apply key=value overrides; keys are Params fields or pulse.<field>."""
    for item in overrides or ():
        if "=" not in item:
            raise ParameterError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        try:
            if key in ("dark_sampling",):
                value: object = raw.strip()
            elif key in _INT_FIELDS:
                value = int(raw)
            else:
                value = float(raw)
        except ValueError:
            raise ParameterError(f"override {key}: cannot parse value {raw!r}") from None
        if key.startswith("pulse."):
            params = params.replace(
                pulse=dataclasses.replace(params.pulse, **{key.split(".", 1)[1]: value}))
        elif key == "E0":
            params = params.replace(pulse=dataclasses.replace(params.pulse, E0=value))
        elif hasattr(params, key):
            params = params.replace(**{key: value})
        else:
            raise ParameterError(f"unknown override key {key!r}")
    return params


def _load_params(args) -> Params:
    params = parse_config(args.config) if args.config else Params()
    return apply_overrides(params, getattr(args, "override", None))


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    params = _load_params(args)
    os.makedirs(args.out_dir, exist_ok=True)
    t0 = time.perf_counter()
    extra = {}
    try:
        traj = integrate(params)
    except IntegrationError as exc:
        write_manifest(os.path.join(args.out_dir, "manifest.json"), params,
                       time.perf_counter() - t0,
                       {"status": "aborted", "last_valid_time": exc.last_valid_time})
        print(f"integration aborted: {exc}", file=sys.stderr)
        return 2
    write_trajectory_csv(os.path.join(args.out_dir, "trajectory.csv"), traj)
    extra["status"] = "ok"
    extra["n_frames"] = len(traj.times)
    write_manifest(os.path.join(args.out_dir, "manifest.json"), params,
                   time.perf_counter() - t0, extra)
    print(f"wrote {args.out_dir}/trajectory.csv ({len(traj.times)} frames)")
    return 0


def _sweep_values(args):
    if args.values is not None:
        return tuple(float(v) for v in args.values.split(","))
    lo, hi, n = args.log_range
    if lo <= 0 or hi <= 0:
        raise ParameterError("log-range bounds must be positive")
    return tuple(np.geomspace(lo, hi, int(n)))


def cmd_sweep(args) -> int:
    params = _load_params(args)
    values = _sweep_values(args)
    fit_window = None
    if args.fit_window is not None:
        lo, hi = (int(x) for x in args.fit_window.split(":"))
        fit_window = (lo, hi)
    spec = SweepSpec(base=params, param_name=args.param, values=values,
                     observable_time=args.observable_time_ps * 1000.0 / AU_TIME_TO_FS,
                     fit_window=fit_window)
    os.makedirs(args.out_dir, exist_ok=True)
    t0 = time.perf_counter()
    extra: dict = {"sweep_param": args.param, "sweep_values": list(values)}
    if args.param == "omega_c" and args.resonance_summary:
        table, summary = detuning_scan(spec, workers=args.workers)
        extra["resonance_summary"] = summary
    else:
        table = run_sweep(spec, workers=args.workers)
    if table.fit is not None:
        extra["fit"] = table.fit
    write_sweep_csv(os.path.join(args.out_dir, "sweep.csv"), table)
    write_manifest(os.path.join(args.out_dir, "manifest.json"), params,
                   time.perf_counter() - t0, extra)
    n_fail = sum(1 for r in table.rows if r.status != "ok")
    print(f"wrote {args.out_dir}/sweep.csv ({len(table.rows)} rows, {n_fail} failed)")
    return 0 if n_fail == 0 else 2


def cmd_analyze(args) -> int:
    cols = read_trajectory_csv(args.trajectory)
    result: dict = {"input": str(args.trajectory)}
    if args.fit_lifetime:
        t_fs = cols["t_fs"]
        p_e = cols["P_e"]
        # fit the tail after the pulse; the window start is measured from the
        # signal maximum because the CSV does not carry the pulse parameters
        i0 = int(np.argmax(p_e))
        i0 = min(len(p_e) - 3, i0 + max(1, (len(p_e) - i0) // 50))
        fit = fit_exponential_lifetime(t_fs[i0:], p_e[i0:])
        result["lifetime"] = {
            "tau_fs": fit["tau"],
            "tau_ps": fit["tau"] / 1000.0,
            "r_squared": fit["r_squared"],
            "low_confidence": fit["low_confidence"],
        }
    if args.rabi or args.spectrum:
        traj = _trajectory_from_columns(cols, args.trajectory)
        rabi = rabi_splitting_from_trajectory(traj)
        result["rabi"] = rabi
    _atomic_write(args.output, json.dumps(result, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.output}")
    return 0


def _trajectory_from_columns(cols, csv_path) -> Trajectory:
    """Rebuild the Trajectory pieces the analyses need from CSV columns.

    The pulse timing (post-pulse window start) comes from the sibling
    manifest.json when present, otherwise from the defaults.
    """
    n = len(cols["t_au"])
    zeros = np.zeros(n)
    pulse = {"t_start": Pulse().t_start, "sigma": Pulse().sigma}
    manifest_path = os.path.join(os.path.dirname(os.path.abspath(csv_path)), "manifest.json")
    if os.path.exists(manifest_path):
        try:
            with open(manifest_path) as fh:
                pulse.update(json.load(fh)["params"]["pulse"])
        except (OSError, KeyError, json.JSONDecodeError):
            pass
    return Trajectory(
        times=cols["t_au"], P_e=cols["P_e"],
        re_rho_eg=cols["re_rho_eg"], im_rho_eg=cols["im_rho_eg"],
        E_e=cols["E_e_cm1"] / HARTREE_TO_CM1, E_c=cols["E_c_cm1"] / HARTREE_TO_CM1,
        E_B=cols["E_B_cm1"] / HARTREE_TO_CM1, E_D=cols["E_D_cm1"] / HARTREE_TO_CM1,
        q_c=cols["q_c"], p_c=cols["p_c"], q_B=cols["q_B"], p_B=cols["p_B"],
        trace_err=zeros, herm_defect=zeros, min_eig=zeros,
        metadata={"pulse": pulse},
    )


def cmd_predict(args) -> int:
    params = _load_params(args)
    p_e = args.pe
    if not 0.0 <= p_e <= 1.0:
        raise ParameterError(f"--pe must be within [0, 1] (got {p_e})")
    coh = args.coherence
    if abs(coh) > 0.5:
        raise ParameterError(f"--coherence must be within [-0.5, 0.5] (got {coh})")
    weight = default_resonance_weight(params)
    vib = predicted_vibrational_gain(params, p_e, weight)
    gain = predicted_photon_gain(params, p_e, coh)
    gain_lt = predicted_photon_gain_longtime(params, p_e)
    result = {
        "P_e": p_e,
        "re_rho_eg": coh,
        "photon_gain_au": gain,
        "photon_gain_cm1": gain * HARTREE_TO_CM1,
        "photon_gain_longtime_au": gain_lt,
        "photon_gain_longtime_cm1": gain_lt * HARTREE_TO_CM1,
        "vibrational_gain_total_au": vib["total"],
        "vibrational_gain_total_cm1": vib["total"] * HARTREE_TO_CM1,
        "vibrational_gain_per_oscillator_au": vib["per_oscillator"],
        "vibrational_gain_per_oscillator_cm1": vib["per_oscillator"] * HARTREE_TO_CM1,
        "resonance_weight": {
            "kind": vib["weight_kind"],
            "half_width_au": vib["weight_half_width"],
            "value_at_detuning": vib["weight_value"],
        },
    }
    text = json.dumps(result, indent=2, sort_keys=True)
    if args.output:
        _atomic_write(args.output, text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


def cmd_convergence(args) -> int:
    params = _load_params(args)
    report = convergence_check(params, observable=args.observable)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        _atomic_write(args.output, text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavidyn",
        description="Semiclassical electron-vibration-cavity dynamics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=False):
        p.add_argument("--config", required=config_required, default=None,
                       help="TOML config file (defaults used when omitted)")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE", help="override a parameter")

    p_run = sub.add_parser("run", help="integrate one trajectory")
    add_common(p_run)
    p_run.add_argument("--out-dir", required=True)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter")
    add_common(p_sweep)
    p_sweep.add_argument("--param", required=True)
    group = p_sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", help="comma-separated values")
    group.add_argument("--log-range", nargs=3, type=float,
                       metavar=("LO", "HI", "N"), help="N log-spaced values")
    p_sweep.add_argument("--out-dir", required=True)
    p_sweep.add_argument("--workers", type=int, default=None,
                         help=f"worker processes (default ${WORKERS_ENV_VAR} or 1)")
    p_sweep.add_argument("--observable-time-ps", type=float, default=5.0)
    p_sweep.add_argument("--fit-window", default=None, metavar="LO:HI",
                         help="row slice for the power-law fit")
    p_sweep.add_argument("--resonance-summary", action="store_true",
                         help="with --param omega_c, add the resonance summary")
    p_sweep.set_defaults(func=cmd_sweep)

    p_an = sub.add_parser("analyze", help="analyze a trajectory.csv")
    p_an.add_argument("trajectory")
    p_an.add_argument("--fit-lifetime", action="store_true")
    p_an.add_argument("--rabi", action="store_true")
    p_an.add_argument("--spectrum", action="store_true")
    p_an.add_argument("--output", default="analysis.json")
    p_an.set_defaults(func=cmd_analyze)

    p_pred = sub.add_parser("predict", help="closed-form energy-gain predictions")
    add_common(p_pred)
    p_pred.add_argument("--pe", type=float, required=True)
    p_pred.add_argument("--coherence", type=float, default=0.0)
    p_pred.add_argument("--output", default=None)
    p_pred.set_defaults(func=cmd_predict)

    p_conv = sub.add_parser("convergence", help="dt-halving self-convergence check")
    add_common(p_conv)
    p_conv.add_argument("--observable", default="E_D")
    p_conv.add_argument("--output", default=None)
    p_conv.set_defaults(func=cmd_convergence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, UnitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
