"""Command-line interface: exit codes, output schemas, config precedence."""

import math

import pytest

from bifloquet.cli import (
    DELTASCAN_HEADER,
    FASTSCAN_HEADER,
    LINE_HEADER,
    SWEEP2D_HEADER,
    run,
)
from bifloquet.serialize import read_csv, read_json


class TestExitCodes:
    def test_gap_ok(self, capsys):
        assert run(["gap", "--b", "0.1", "--omega", "1.3"]) == 0
        out = capsys.readouterr().out
        assert "gap =" in out

    def test_runtime_error_is_one(self, capsys):
        # collapsing omega* fixed point -> FixedPointError -> exit 1
        code = run(["optimal-omega", "--b", "0.2", "--Omega", "50.0",
                    "--nu", "1.4"])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_value_error_is_one(self, capsys):
        # nu outside [0, pi/2]
        assert run(["gap", "--nu", "3.0"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_usage_error_is_two(self):
        with pytest.raises(SystemExit) as exc:
            run(["gap", "--omega", "not-a-number"])
        assert exc.value.code == 2

    def test_unknown_command_is_two(self):
        with pytest.raises(SystemExit) as exc:
            run(["frobnicate"])
        assert exc.value.code == 2


class TestOutputs:
    def test_gap_csv_and_json(self, tmp_path, capsys):
        csv_path = tmp_path / "gap.csv"
        json_path = tmp_path / "gap.json"
        assert run(["gap", "--b", "0.2", "--Omega", "0.1", "--nu", "0.4",
                    "-o", str(csv_path)]) == 0
        assert run(["gap", "--b", "0.2", "--Omega", "0.1", "--nu", "0.4",
                    "-o", str(json_path), "--format", "json"]) == 0
        cols = read_csv(csv_path)
        payload = read_json(json_path)
        assert cols["gap"][0] == payload["gap"]
        assert set(cols) == {"gap", "eps_plus", "eps_minus", "omega", "n_max"}

    def test_weights_csv_symmetric(self, tmp_path, capsys):
        path = tmp_path / "w.csv"
        assert run(["weights", "--b", "0.3", "--Omega", "0.2", "--nu", "0.5",
                    "-o", str(path)]) == 0
        cols = read_csv(path)
        ks = cols["k"]
        gk = dict(zip(ks, cols["g_k"]))
        assert 0.0 in gk
        for k in ks:
            if k > 0:
                assert gk[k] == pytest.approx(gk[-k], abs=1e-12)

    def test_line_schema(self, tmp_path, capsys):
        path = tmp_path / "line.csv"
        assert run(["line", "--Omega", "0.1", "--nu", "0.3",
                    "--b-min", "-0.2", "--b-max", "0.2", "--count", "5",
                    "-o", str(path)]) == 0
        cols = read_csv(path)
        assert list(cols) == LINE_HEADER
        assert len(cols["b"]) == 5

    def test_sweep2d_schema_and_sweet_report(self, tmp_path, capsys):
        path = tmp_path / "grid.csv"
        report = tmp_path / "sweet.json"
        assert run(["sweep2d", "--Omega", "0.1",
                    "--b-min", "0.01", "--b-max", "0.2", "--b-count", "3",
                    "--nu-min", "0.1", "--nu-max", "0.5", "--nu-count", "2",
                    "-o", str(path), "--sweet-report", str(report)]) == 0
        cols = read_csv(path)
        assert list(cols) == SWEEP2D_HEADER
        assert len(cols["b"]) == 6  # 2 x 3 grid, row-major in nu
        rep = read_json(report)
        assert set(rep) == {"dc_sweet", "doubly_sweet", "sour"}

    def test_fastscan_schema(self, tmp_path, capsys):
        path = tmp_path / "fast.csv"
        assert run(["fastscan", "--omega1-min", "5", "--omega1-max", "20",
                    "--count", "4", "-o", str(path)]) == 0
        cols = read_csv(path)
        assert list(cols) == FASTSCAN_HEADER
        assert len(cols["Omega1"]) == 4

    def test_deltascan_schema(self, tmp_path, capsys):
        path = tmp_path / "delta.csv"
        assert run(["deltascan", "--delta-min", "1e-3", "--delta-max", "1e-1",
                    "--count", "3", "-o", str(path)]) == 0
        cols = read_csv(path)
        assert list(cols) == DELTASCAN_HEADER
        assert cols["inv_delta"][0] == pytest.approx(1e3)

    def test_optimal_omega_value(self, tmp_path, capsys):
        path = tmp_path / "om.json"
        assert run(["optimal-omega", "--b", "0.0", "--Omega", "0.0",
                    "-o", str(path), "--format", "json"]) == 0
        payload = read_json(path)
        assert payload["omega_star"] == pytest.approx(1.0, abs=1e-9)


class TestConfig:
    def test_config_sets_defaults_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("b = 0.3  # bias\nOmega = 0.1\nnu = 0.4\n")
        out_cfg = tmp_path / "a.json"
        out_mix = tmp_path / "b.json"
        assert run(["--config", str(cfg), "gap", "--format", "json",
                    "-o", str(out_cfg)]) == 0
        assert run(["--config", str(cfg), "gap", "--b", "0.0",
                    "--format", "json", "-o", str(out_mix)]) == 0
        direct = tmp_path / "c.json"
        assert run(["gap", "--b", "0.3", "--Omega", "0.1", "--nu", "0.4",
                    "--format", "json", "-o", str(direct)]) == 0
        assert read_json(out_cfg)["gap"] == read_json(direct)["gap"]
        # explicit flag overrides the config value
        assert read_json(out_mix)["gap"] != read_json(out_cfg)["gap"]

    def test_unknown_key_is_usage_error(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("bogus_knob = 1\n")
        with pytest.raises(SystemExit) as exc:
            run(["--config", str(cfg), "gap"])
        assert exc.value.code == 2

    def test_malformed_line_is_usage_error(self, tmp_path):
        cfg = tmp_path / "bad2.cfg"
        cfg.write_text("just some words\n")
        with pytest.raises(SystemExit) as exc:
            run(["--config", str(cfg), "gap"])
        assert exc.value.code == 2


class TestSelftest:
    def test_quick_passes(self, capsys):
        assert run(["selftest", "--quick"]) == 0
        out = capsys.readouterr().out
        assert "selftest: PASS" in out
        assert "propagator oracle" in out
        assert "weight identity" in out
