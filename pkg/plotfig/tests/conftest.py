import numpy as np
import pytest

TRAJ_HEADER = ("t_au,t_fs,P_e,re_rho_eg,im_rho_eg,"
               "E_e_cm1,E_c_cm1,E_B_cm1,E_D_cm1,q_c,p_c,q_B,p_B")
SWEEP_HEADER = "param_value,E_D_5ps_cm1,E_c_peak_cm1,P_e_max,P_e_final,status"


@pytest.fixture
def synthetic_trajectory(tmp_path):
    """A small schema-conformant trajectory.csv with smooth fake dynamics."""
    n = 200
    t_au = np.arange(n) * 25.0
    t_fs = t_au * 0.02418884
    p_e = 0.1 * np.exp(-t_au / 2e3)
    e_e = 1e8 * p_e
    e_c = 5e6 * np.exp(-t_au / 3e3) * (1 + 0.3 * np.cos(0.01 * t_au))
    e_b = 4e5 * np.exp(-t_au / 4e3)
    e_d = 1e5 * (1 - np.exp(-t_au / 2e3))
    rows = [TRAJ_HEADER]
    for i in range(n):
        rows.append(",".join(f"{v:.17g}" for v in (
            t_au[i], t_fs[i], p_e[i], 0.0, 0.0,
            e_e[i], e_c[i], e_b[i], e_d[i], 0.0, 0.0, 0.0, 0.0)))
    path = tmp_path / "trajectory.csv"
    path.write_text("\n".join(rows) + "\n")
    return path


def make_sweep_csv(path, values, e_d, status=None):
    status = status or ["ok"] * len(values)
    rows = [SWEEP_HEADER]
    for v, e, s in zip(values, e_d, status):
        rows.append(f"{v:.17g},{e:.17g},1e10,0.1,0.01,{s}")
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture
def synthetic_sweep(tmp_path):
    values = np.geomspace(1e-7, 1e-6, 8)
    return make_sweep_csv(tmp_path / "sweep.csv", values, 3e24 * values**2)
