import numpy as np
import pytest

from plotfig import (
    FigureSpec,
    PanelSpec,
    SchemaError,
    plot_sweep_grid,
    plot_trajectory,
    read_sweep,
    read_trajectory,
)
from plotfig.cli import main, parse_panel

from conftest import TRAJ_HEADER, make_sweep_csv


class TestReaders:
    def test_trajectory_round_trip(self, synthetic_trajectory):
        cols = read_trajectory(synthetic_trajectory)
        assert len(cols["t_au"]) == 200
        assert cols["E_D_cm1"][-1] > 0

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t_au,t_fs,P_e\n0,0,0\n")
        with pytest.raises(SchemaError, match="missing column 're_rho_eg'"):
            read_trajectory(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(SchemaError, match="empty"):
            read_trajectory(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text(TRAJ_HEADER + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            read_trajectory(path)

    def test_malformed_row_position(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(TRAJ_HEADER + "\n" + ",".join(["0"] * 13) + "\nx,y\n")
        with pytest.raises(SchemaError, match="row 3"):
            read_trajectory(path)

    def test_sweep_reader(self, synthetic_sweep):
        data = read_sweep(synthetic_sweep)
        assert len(data["param_value"]) == 8
        assert data["status"] == ["ok"] * 8


class TestTrajectoryFigure:
    def test_renders_and_amplifies(self, synthetic_trajectory, tmp_path):
        out = tmp_path / "fig.png"
        spec = FigureSpec(kind="trajectory-panels", inputs=[str(synthetic_trajectory)],
                          output=str(out))
        _, curves = plot_trajectory(spec)
        cols = read_trajectory(synthetic_trajectory)
        assert np.allclose(curves["E_B_amplified"], 10.0 * cols["E_B_cm1"])
        assert np.allclose(curves["E_D_amplified"], 100.0 * cols["E_D_cm1"])
        assert out.exists() and out.stat().st_size > 0

    def test_deterministic_output(self, synthetic_trajectory, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        for out in (a, b):
            plot_trajectory(FigureSpec(kind="trajectory-panels",
                                       inputs=[str(synthetic_trajectory)],
                                       output=str(out)))
        assert a.read_bytes() == b.read_bytes()

    def test_input_not_mutated(self, synthetic_trajectory, tmp_path):
        before = synthetic_trajectory.read_bytes()
        plot_trajectory(FigureSpec(kind="trajectory-panels",
                                   inputs=[str(synthetic_trajectory)],
                                   output=str(tmp_path / "fig.png")))
        assert synthetic_trajectory.read_bytes() == before

    def test_empty_csv_error(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(SchemaError):
            plot_trajectory(FigureSpec(kind="trajectory-panels", inputs=[str(path)],
                                       output=str(tmp_path / "fig.png")))


class TestSweepGrid:
    def test_single_panel_with_asymptote(self, synthetic_sweep, tmp_path):
        out = tmp_path / "grid.svg"
        spec = FigureSpec(kind="sweep-grid",
                          inputs=[PanelSpec(path=str(synthetic_sweep),
                                            label="coupling", asymptote_exponent=2.0)],
                          output=str(out))
        _, dropped = plot_sweep_grid(spec)
        assert dropped == 0
        assert out.exists()

    def test_nonpositive_points_dropped_with_warning(self, tmp_path):
        values = np.array([1e-7, 2e-7, 4e-7, 8e-7])
        e_d = np.array([1.0, -2.0, 0.0, 8.0])
        path = make_sweep_csv(tmp_path / "s.csv", values, e_d)
        spec = FigureSpec(kind="sweep-grid", inputs=[PanelSpec(path=str(path))],
                          output=str(tmp_path / "g.png"))
        with pytest.warns(UserWarning, match="dropped 2"):
            _, dropped = plot_sweep_grid(spec)
        assert dropped == 2

    def test_failed_rows_dropped(self, tmp_path):
        values = np.array([1e-7, 2e-7, 4e-7])
        path = make_sweep_csv(tmp_path / "s.csv", values, [1.0, 2.0, 4.0],
                              status=["ok", "failed:boom", "ok"])
        spec = FigureSpec(kind="sweep-grid", inputs=[PanelSpec(path=str(path))],
                          output=str(tmp_path / "g.png"))
        with pytest.warns(UserWarning, match="dropped 1"):
            plot_sweep_grid(spec)

    def test_detuning_panel_symlog(self, tmp_path):
        # a detuning scan crosses zero once re-centred; must still render
        omega_v = 0.01
        values = omega_v + np.array([-3e-3, -1e-3, 0.0, 1e-3, 3e-3])
        path = make_sweep_csv(tmp_path / "det.csv", values, [1e9, 5e9, 1e10, 6e9, 2e9])
        spec = FigureSpec(kind="sweep-grid",
                          inputs=[PanelSpec(path=str(path), label="detuning",
                                            detune_about=omega_v)],
                          output=str(tmp_path / "det.png"))
        _, dropped = plot_sweep_grid(spec)
        assert dropped == 0

    def test_too_many_panels(self, synthetic_sweep, tmp_path):
        spec = FigureSpec(kind="sweep-grid",
                          inputs=[PanelSpec(path=str(synthetic_sweep))] * 7,
                          output=str(tmp_path / "g.png"))
        with pytest.raises(ValueError, match="1-6 panels"):
            plot_sweep_grid(spec)


class TestCli:
    def test_panel_parsing(self):
        panel = parse_panel("s.csv:coupling:2:anchor=1")
        assert panel.path == "s.csv" and panel.label == "coupling"
        assert panel.asymptote_exponent == 2.0 and panel.anchor_index == 1
        det = parse_panel("d.csv:detuning:detune=0.01")
        assert det.detune_about == 0.01 and det.asymptote_exponent is None

    def test_trajectory_command(self, synthetic_trajectory, tmp_path, capsys):
        out = tmp_path / "fig.png"
        assert main(["trajectory", str(synthetic_trajectory), "-o", str(out)]) == 0
        assert out.exists()

    def test_sweep_grid_command(self, synthetic_sweep, tmp_path):
        out = tmp_path / "grid.png"
        assert main(["sweep-grid", f"{synthetic_sweep}:coupling:2", "-o", str(out)]) == 0
        assert out.exists()

    def test_relaxation_grid_command(self, synthetic_sweep, tmp_path):
        out = tmp_path / "rates.png"
        assert main(["relaxation-grid", f"{synthetic_sweep}:1/gamma_e",
                     f"{synthetic_sweep}:1/gamma_c", "-o", str(out)]) == 0
        assert out.exists()

    def test_relaxation_grid_panel_cap(self, synthetic_sweep, tmp_path):
        from plotfig import plot_relaxation_grid
        spec = FigureSpec(kind="relaxation-grid",
                          inputs=[PanelSpec(path=str(synthetic_sweep))] * 4,
                          output=str(tmp_path / "g.png"))
        with pytest.raises(ValueError, match="1-3 panels"):
            plot_relaxation_grid(spec)

    def test_schema_error_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        assert main(["trajectory", str(path), "-o", str(tmp_path / "f.png")]) == 1
        assert "missing column" in capsys.readouterr().err
