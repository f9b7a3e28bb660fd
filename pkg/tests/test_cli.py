import json
import math

import numpy as np
import pytest

from cavidyn import Params, ParameterError, Pulse
from cavidyn.cli import (
    TRAJECTORY_COLUMNS,
    apply_overrides,
    main,
    parse_config,
    read_trajectory_csv,
    write_config,
)

SHORT_INTEGRATOR = """
[integrator]
t_final = 4000.0
"""


def write(tmp_path, text, name="config.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestParseConfig:
    def test_empty_config_gives_defaults(self, tmp_path):
        assert parse_config(write(tmp_path, "")) == Params()

    def test_partial_override(self, tmp_path):
        cfg = write(tmp_path, "[pulse]\nE0 = 0.02\n")
        assert parse_config(cfg) == Params(pulse=Pulse(E0=0.02))

    def test_negative_coupling_rejected(self, tmp_path):
        cfg = write(tmp_path, "[cavity]\nlambda_c = -1.0\n")
        with pytest.raises(ParameterError, match="lambda_c must be >= 0"):
            parse_config(cfg)

    def test_unknown_key_is_error(self, tmp_path):
        cfg = write(tmp_path, "[relaxation]\ngamma_v = 1e-6\n")
        with pytest.raises(ParameterError, match="unknown key relaxation.gamma_v"):
            parse_config(cfg)

    def test_unknown_section_is_error(self, tmp_path):
        cfg = write(tmp_path, "[misc]\nx = 1\n")
        with pytest.raises(ParameterError, match=r"unknown section \[misc\]"):
            parse_config(cfg)

    def test_parse_error_reports_location(self, tmp_path):
        cfg = write(tmp_path, "[cavity\nlambda_c = 1e-6\n")
        with pytest.raises(ParameterError, match="parse error"):
            parse_config(cfg)

    def test_type_errors(self, tmp_path):
        cfg = write(tmp_path, '[dark_bath]\nn_dark = "many"\n')
        with pytest.raises(ParameterError, match="n_dark must be an integer"):
            parse_config(cfg)

    def test_full_round_trip(self, tmp_path):
        p = Params(
            omega_e=0.11, d_eg=0.4, d_gg=0.05, d_ee=0.95, n_e=3e9, gamma_e=2e-5,
            omega_v=0.011, d_v=0.012, n_v=2e10, omega_c=0.009, lambda_c=1.5e-6,
            gamma_c=1e-5, gamma_v_total=3e-6, n_dark=73, dark_omega_min=0.006,
            dark_omega_max=0.014, dark_sampling="seeded-uniform", dark_seed=11,
            pulse=Pulse(E0=0.003, t_start=400.0, sigma=80.0),
            collective_term_factor=1, cross_term_factor=1,
            dt=0.25, t_final=1234.5, record_stride=10,
        )
        assert parse_config(write(tmp_path, write_config(p))) == p

    def test_default_round_trip(self, tmp_path):
        p = Params()
        assert parse_config(write(tmp_path, write_config(p))) == p


class TestOverrides:
    def test_pulse_and_plain(self):
        p = apply_overrides(Params(), ["lambda_c=1e-6", "E0=0.02", "pulse.sigma=50"])
        assert p.lambda_c == 1e-6 and p.pulse.E0 == 0.02 and p.pulse.sigma == 50.0

    def test_unknown_key(self):
        with pytest.raises(ParameterError, match="unknown override"):
            apply_overrides(Params(), ["nonsense=1"])

    def test_malformed(self):
        with pytest.raises(ParameterError, match="key=value"):
            apply_overrides(Params(), ["lambda_c"])


class TestCmdRun:
    def test_outputs_and_determinism(self, tmp_path, capsys):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", cfg, "--out-dir", str(out1)]) == 0
        assert main(["run", "--config", cfg, "--out-dir", str(out2)]) == 0

        csv1 = (out1 / "trajectory.csv").read_bytes()
        csv2 = (out2 / "trajectory.csv").read_bytes()
        assert csv1 == csv2

        m1 = json.loads((out1 / "manifest.json").read_text())
        m2 = json.loads((out2 / "manifest.json").read_text())
        m1.pop("wall_clock_s"), m2.pop("wall_clock_s")
        assert m1 == m2
        assert m1["status"] == "ok"
        assert m1["params"]["lambda_c"] == 2e-6
        assert "config_hash" in m1

    def test_csv_schema_and_round_trip(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out = tmp_path / "run"
        assert main(["run", "--config", cfg, "--out-dir", str(out)]) == 0
        text = (out / "trajectory.csv").read_text().splitlines()
        assert text[0] == ",".join(TRAJECTORY_COLUMNS)

        cols = read_trajectory_csv(out / "trajectory.csv")
        # 17 significant digits survive the text round trip bit-exactly
        from cavidyn import integrate, Params
        traj = integrate(Params(t_final=4000.0))
        assert np.array_equal(cols["t_au"], traj.times)
        assert np.array_equal(cols["P_e"], traj.P_e)
        assert np.array_equal(cols["q_B"], traj.q_B)

    def test_override_decouples_cavity(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out = tmp_path / "run"
        assert main(["run", "--config", cfg, "--out-dir", str(out),
                     "--override", "lambda_c=0"]) == 0
        cols = read_trajectory_csv(out / "trajectory.csv")
        assert np.all(cols["E_c_cm1"] == 0.0)
        assert np.all(cols["E_B_cm1"] == 0.0)
        assert np.all(cols["E_D_cm1"] == 0.0)

    def test_validation_failure_exit_code(self, tmp_path, capsys):
        cfg = write(tmp_path, "[cavity]\nlambda_c = -2.0\n")
        assert main(["run", "--config", cfg, "--out-dir", str(tmp_path / "x")]) == 1
        assert "lambda_c" in capsys.readouterr().err


class TestCmdSweep:
    def test_sweep_csv_and_failed_rows(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out = tmp_path / "sweep"
        code = main(["sweep", "--config", cfg, "--param", "lambda_c",
                     "--values", "0,1e-6", "--out-dir", str(out),
                     "--observable-time-ps", "0.1"])
        assert code == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "param_value,E_D_5ps_cm1,E_c_peak_cm1,P_e_max,P_e_final,status"
        assert len(lines) == 3
        assert lines[1].endswith(",ok")

    def test_log_range(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out = tmp_path / "sweep"
        code = main(["sweep", "--config", cfg, "--param", "n_e",
                     "--log-range", "1e9", "1e10", "3", "--out-dir", str(out),
                     "--observable-time-ps", "0.1"])
        assert code == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        values = [float(l.split(",")[0]) for l in lines[1:]]
        assert values == pytest.approx([1e9, math.sqrt(1e19), 1e10])

    def test_fit_window_lands_in_manifest(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out = tmp_path / "sweep"
        code = main(["sweep", "--config", cfg, "--param", "lambda_c",
                     "--values", "1e-7,2e-7,4e-7", "--fit-window", "0:3",
                     "--out-dir", str(out), "--observable-time-ps", "0.05"])
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert "fit" in manifest and "exponent" in manifest["fit"]

    def test_single_value_matches_run(self, tmp_path):
        cfg = write(tmp_path, SHORT_INTEGRATOR)
        out_r = tmp_path / "run"
        out_s = tmp_path / "sweep"
        assert main(["run", "--config", cfg, "--out-dir", str(out_r)]) == 0
        assert main(["sweep", "--config", cfg, "--param", "lambda_c",
                     "--values", "2e-6", "--out-dir", str(out_s),
                     "--observable-time-ps", str(4000.0 * 0.02418884 / 1000.0)]) == 0
        cols = read_trajectory_csv(out_r / "trajectory.csv")
        row = (out_s / "sweep.csv").read_text().splitlines()[1].split(",")
        assert float(row[1]) == cols["E_D_cm1"][-1]
        assert float(row[4]) == cols["P_e"][-1]


class TestCmdAnalyze:
    def test_lifetime_fit_on_decoupled_run(self, tmp_path):
        cfg = write(tmp_path, "[cavity]\nlambda_c = 0.0\n[integrator]\nt_final = 120000.0\n")
        out = tmp_path / "run"
        assert main(["run", "--config", cfg, "--out-dir", str(out)]) == 0
        analysis = tmp_path / "analysis.json"
        assert main(["analyze", str(out / "trajectory.csv"), "--fit-lifetime",
                     "--output", str(analysis)]) == 0
        result = json.loads(analysis.read_text())
        assert result["lifetime"]["tau_ps"] == pytest.approx(2.42, rel=0.05)
        assert result["lifetime"]["r_squared"] > 0.99

    def test_rabi_error_when_cavity_decoupled(self, tmp_path, capsys):
        cfg = write(tmp_path, "[cavity]\nlambda_c = 0.0\n[integrator]\nt_final = 30000.0\n")
        out = tmp_path / "run"
        assert main(["run", "--config", cfg, "--out-dir", str(out)]) == 0
        code = main(["analyze", str(out / "trajectory.csv"), "--rabi",
                     "--output", str(tmp_path / "a.json")])
        assert code == 2
        assert "no polariton beating" in capsys.readouterr().err

    def test_malformed_csv_reports_row(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text(",".join(TRAJECTORY_COLUMNS) + "\n1,2,3\n")
        assert main(["analyze", str(path), "--fit-lifetime",
                     "--output", str(tmp_path / "a.json")]) == 2
        assert "row 2" in capsys.readouterr().err


class TestCmdPredict:
    def test_zero_population(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["predict", "--pe", "0", "--output", str(out)]) == 0
        result = json.loads(out.read_text())
        assert result["photon_gain_au"] == 0.0
        assert result["vibrational_gain_total_au"] == 0.0

    def test_full_inversion_gain(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["predict", "--pe", "1", "--output", str(out)]) == 0
        result = json.loads(out.read_text())
        assert result["photon_gain_au"] == pytest.approx(2e8)

    def test_per_oscillator_prediction(self, tmp_path):
        out = tmp_path / "p.json"
        assert main(["predict", "--pe", "0.01", "--output", str(out)]) == 0
        result = json.loads(out.read_text())
        assert result["vibrational_gain_per_oscillator_cm1"] == pytest.approx(0.22, rel=0.01)
        assert result["resonance_weight"]["kind"] == "lorentzian"

    def test_invalid_population(self, capsys):
        assert main(["predict", "--pe", "1.5"]) == 1


class TestCmdConvergence:
    def test_fixed_point_config(self, tmp_path):
        cfg = write(tmp_path, "[pulse]\nE0 = 0.0\n[integrator]\nt_final = 1000.0\n")
        out = tmp_path / "c.json"
        assert main(["convergence", "--config", cfg, "--observable", "E_D",
                     "--output", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["mode"] == "absolute"
        assert report["relative_difference"] < 1e-12
