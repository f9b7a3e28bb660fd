"""Readers for the simulator's CSV schemas.

plotfig consumes the files only; it never imports the simulator.
"""

import csv

import numpy as np

TRAJECTORY_COLUMNS = (
    "t_au", "t_fs", "P_e", "re_rho_eg", "im_rho_eg",
    "E_e_cm1", "E_c_cm1", "E_B_cm1", "E_D_cm1",
    "q_c", "p_c", "q_B", "p_B",
)

SWEEP_COLUMNS = ("param_value", "E_D_5ps_cm1", "E_c_peak_cm1",
                 "P_e_max", "P_e_final", "status")


class SchemaError(ValueError):
    """Input file does not conform to the expected CSV schema."""


def read_trajectory(path):
    """Load a trajectory.csv; returns {column: array}."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        missing = [c for c in TRAJECTORY_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column {missing[0]!r}")
        idx = [header.index(c) for c in TRAJECTORY_COLUMNS]
        rows = []
        for i, row in enumerate(reader, start=2):
            try:
                rows.append([float(row[j]) for j in idx])
            except (ValueError, IndexError):
                raise SchemaError(f"{path}: malformed row {i}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    arr = np.array(rows)
    return {name: arr[:, k] for k, name in enumerate(TRAJECTORY_COLUMNS)}


def read_sweep(path):
    """Load a sweep.csv; returns {column: array} with status as strings."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        missing = [c for c in SWEEP_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column {missing[0]!r}")
        idx = {c: header.index(c) for c in SWEEP_COLUMNS}
        values, e_d, status = [], [], []
        for i, row in enumerate(reader, start=2):
            try:
                values.append(float(row[idx["param_value"]]))
                e_d.append(float(row[idx["E_D_5ps_cm1"]]))
                status.append(row[idx["status"]])
            except (ValueError, IndexError):
                raise SchemaError(f"{path}: malformed row {i}") from None
    if not values:
        raise SchemaError(f"{path}: no data rows")
    return {
        "param_value": np.array(values),
        "E_D_5ps_cm1": np.array(e_d),
        "status": status,
    }
