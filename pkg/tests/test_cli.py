"""CLI subcommands, exit codes, and their on-disk artifacts.

`main(argv)` is exercised in-process; one subprocess test covers the
installed console script.
"""

import json
import subprocess

import numpy as np
import pytest

from sgn2d.cli import main
from sgn2d.dynamics import PhysicalParams, State
from sgn2d.initdata import line_wave_2d
from sgn2d.snapshot import read_snapshot, write_snapshot
from sgn2d.spectral import make_grid


def test_no_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_console_script_help():
    proc = subprocess.run(["sgn2d", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "run" in proc.stdout and "fit-radial" in proc.stdout


class TestRun:
    def test_custom_run_writes_artifacts(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main([
            "run", "--nx", "16", "--ny", "16", "--tmax", "0.1", "--nt", "5",
            "--snap", "0,0.1", "--out", str(out),
        ])
        captured = capsys.readouterr()
        assert code == 0
        assert "steps=5/5" in captured.out
        assert "drift" in captured.out
        assert (out / "diagnostics.csv").exists()
        assert (out / "summary.json").exists()
        assert (out / "custom-t0.sgn2").exists()
        assert (out / "custom-t0.1.sgn2").exists()

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("nx = 32\nny = 16\ntmax = 0.1\nnt = 2\n")
        code = main(["run", "--config", str(cfgfile), "--nx", "16"])
        assert code == 0
        assert "grid=16x16" in capsys.readouterr().out

    def test_preset_flag(self, capsys):
        # the short horizon needs the preset's snapshot schedule cleared
        code = main([
            "run", "--preset", "line", "--nx", "64", "--ny", "8",
            "--tmax", "0.02", "--nt", "2", "--snap", "",
        ])
        assert code == 0
        assert "preset=line" in capsys.readouterr().out

    def test_bad_config_key_exits_2(self, tmp_path, capsys):
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("warp = 9\n")
        assert main(["run", "--config", str(cfgfile)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "none.cfg")]) == 2

    def test_bad_flag_value_exits_2(self, capsys):
        assert main(["run", "--nx", "plenty"]) == 2
        assert "bad value" in capsys.readouterr().err

    def test_solver_abort_exits_3(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = main([
            "run", "--preset", "gauss", "--nx", "16", "--ny", "16",
            "--tmax", "5", "--nt", "50", "--snap", "", "--out", str(out),
        ])
        captured = capsys.readouterr()
        assert code == 3
        assert "aborted" in captured.err
        assert (out / "error.txt").exists()

    def test_cavitated_initial_data_exits_3(self, capsys):
        code = main([
            "run", "--preset", "gauss", "--nx", "16", "--ny", "16",
            "--alpha", "1e-7", "--tmax", "0.1", "--nt", "2", "--snap", "",
        ])
        captured = capsys.readouterr()
        assert code == 3
        assert "error:" in captured.err


class TestDiffLine:
    @pytest.fixture(scope="class")
    @staticmethod
    def wave_file(tmp_path_factory):
        grid = make_grid(256, 8, 10.0, 1.0)
        state = line_wave_2d(grid, c=1.7, x0=2.0)
        path = tmp_path_factory.mktemp("snaps") / "wave.sgn2"
        write_snapshot(path, state)
        return path

    def test_defaults_locate_and_fit(self, wave_file, capsys):
        code = main(["diff-line", str(wave_file)])
        out = capsys.readouterr().out
        assert code == 0
        crest = float(out.split("crest x=")[1].split()[0])
        c = float(out.split("c=")[1].split()[0])
        assert crest == pytest.approx(2.0, abs=0.02)
        assert c == pytest.approx(1.7, abs=0.005)
        # defaults carry the crest-refinement error, nothing larger
        norm = float(out.split("max|dh|=")[1].split()[0])
        assert norm < 0.05

    def test_explicit_parameters_and_output(self, wave_file, tmp_path, capsys):
        diff_out = tmp_path / "diff.sgn2"
        code = main([
            "diff-line", str(wave_file), "--c", "1.7", "--xs", "2.0",
            "--out", str(diff_out),
        ])
        assert code == 0
        state, _ = read_snapshot(diff_out)
        assert np.abs(state.h).max() < 1e-9  # dh stored in the h slot
        assert np.all(state.vy == 0.0)

    def test_missing_snapshot_exits_2(self, tmp_path, capsys):
        assert main(["diff-line", str(tmp_path / "none.sgn2")]) == 2

    def test_flat_snapshot_exits_2(self, tmp_path, capsys):
        # crest fit is impossible when h is constant: config-style error
        grid = make_grid(16, 8, 1.0, 1.0)
        state = State(grid=grid, t=0.0, h=np.ones(grid.shape),
                      vx=np.zeros(grid.shape), vy=np.zeros(grid.shape))
        path = tmp_path / "flat.sgn2"
        write_snapshot(path, state)
        assert main(["diff-line", str(path)]) == 2
        assert "error:" in capsys.readouterr().err


class TestFitRadial:
    @staticmethod
    def _write_csv(path, t, hmin):
        lines = ["t,mass,px,py,energy,hmin,hmax,gmres_iters"]
        for tk, hk in zip(t, hmin):
            lines.append(f"{tk},1,0,0,1,{hk},4,3")
        path.write_text("\n".join(lines) + "\n")

    def test_fit_from_csv(self, tmp_path, capsys):
        t = np.linspace(2.5, 5.0, 101)
        self._write_csv(tmp_path / "diag.csv", t, 0.2 / (1.0 - 0.5 * t) ** 2)
        json_out = tmp_path / "fit.json"
        code = main([
            "fit-radial", str(tmp_path / "diag.csv"), "--out", str(json_out),
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert "a=0.2" in out
        record = json.loads(json_out.read_text())
        assert record["a"] == pytest.approx(0.2, abs=1e-6)
        assert record["b"] == pytest.approx(-0.5, abs=1e-6)
        assert record["t_min"] == 3.75

    def test_tmin_flag(self, tmp_path, capsys):
        t = np.linspace(3.0, 5.0, 41)
        self._write_csv(tmp_path / "diag.csv", t, 0.3 / (1.0 - 0.4 * t) ** 2)
        code = main(["fit-radial", str(tmp_path / "diag.csv"), "--tmin", "3.5"])
        out = capsys.readouterr().out
        assert code == 0
        assert "t_min=3.5" in out

    def test_missing_columns_exits_2(self, tmp_path, capsys):
        (tmp_path / "diag.csv").write_text("time,depth\n1,2\n")
        assert main(["fit-radial", str(tmp_path / "diag.csv")]) == 2
        assert "expected columns" in capsys.readouterr().err

    def test_degenerate_window_exits_3(self, tmp_path, capsys):
        self._write_csv(tmp_path / "diag.csv", [4.0, 4.5], [0.2, 0.1])
        assert main(["fit-radial", str(tmp_path / "diag.csv")]) == 3
        assert "at least 4" in capsys.readouterr().err


class TestInfo:
    def test_prints_header_and_ranges(self, tmp_path, capsys):
        grid = make_grid(16, 8, 1.0, 2.0)
        state = State(grid=grid, t=0.75, h=np.full(grid.shape, 2.0),
                      vx=np.zeros(grid.shape), vy=np.zeros(grid.shape),
                      sigma=np.ones(grid.shape))
        path = tmp_path / "s.sgn2"
        write_snapshot(path, state, PhysicalParams(g=9.81, h_inf=2.0))
        code = main(["info", str(path)])
        out = capsys.readouterr().out
        assert code == 0
        assert "grid 16x8" in out
        assert "t=0.75" in out
        assert "g=9.81" in out
        assert "h: min=2 max=2" in out
        assert "sigma:" in out

    def test_corrupt_file_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.sgn2"
        path.write_bytes(b"JUNKJUNKJUNK")
        assert main(["info", str(path)]) == 2
