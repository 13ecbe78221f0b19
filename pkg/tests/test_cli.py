"""End-to-end command-line runner tests on reduced grids."""

import json

import pytest

from dunklops import report
from dunklops.cli import main


def run_cli(*args):
    return main(list(args))


def write_config(tmp_path, **overrides):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(overrides))
    return str(path)


class TestEval:
    def test_normalization_over_grid(self, tmp_path):
        cfg = write_config(
            tmp_path,
            function="one",
            n_list=[6, 12, 40],
            x_list=[0.1, 1.0, 5.0],
            nu_list=[0.0, 0.5, 2.5],
        )
        out = tmp_path / "eval.csv"
        assert run_cli("eval", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        rows = report.read_rows(out)
        assert len(rows) == 27
        for row in rows:
            assert row["status"] == "ok"
            assert abs(row["value"] - 1.0) <= 1e-10

    def test_growth_violations_become_skips(self, tmp_path):
        cfg = write_config(tmp_path, function="s4", n_list=[4, 8], x_list=[1.0],
                           nu_list=[0.0])
        out = tmp_path / "eval.csv"
        assert run_cli("eval", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        rows = {r["n"]: r for r in report.read_rows(out)}
        assert rows[4]["status"] == "skipped_domain"
        assert rows[8]["status"] == "ok"

    def test_sampled_function_input(self, tmp_path):
        table = tmp_path / "g.txt"
        table.write_text("0 1\n5 1\n")
        cfg = write_config(tmp_path, function_file=str(table), n_list=[6],
                           x_list=[1.0], nu_list=[0.0])
        out = tmp_path / "eval.csv"
        assert run_cli("eval", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        (row,) = report.read_rows(out)
        assert abs(row["value"] - 1.0) <= 1e-9


class TestBounds:
    def test_spec_point(self, tmp_path):
        cfg = write_config(tmp_path, n_list=[4], x_list=[1.0], nu_list=[0.0])
        out = tmp_path / "bounds.csv"
        assert run_cli("bounds", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        rows = report.read_rows(out)
        row = next(r for r in rows if r["inequality_id"] == "L2_E101")
        assert row["lhs"] == pytest.approx(1.0, rel=1e-12)
        assert row["rhs"] == pytest.approx(1.0, rel=1e-15)
        assert row["pass"] is True

    def test_quartic_bound_skipped_below_domain(self, tmp_path):
        cfg = write_config(tmp_path, n_list=[6], x_list=[1.0], nu_list=[0.5])
        out = tmp_path / "bounds.csv"
        assert run_cli("bounds", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        rows = report.read_rows(out)
        psi4 = next(r for r in rows if r["inequality_id"] == "L3_psi3_B")
        assert psi4["status"] == "skipped_domain"


class TestRates:
    def test_reduced_suite_passes(self, tmp_path):
        cfg = write_config(
            tmp_path,
            nu_list=[0.5],
            n_list=[6, 12, 24],
            x_list=[0.5, 2.0],
            korovkin_n_list=[25, 50, 100, 200, 400],
            rates_n_list=[8, 16, 32],
            b_far=100.0,
        )
        out = tmp_path / "rates.csv"
        assert run_cli("rates", "--config", cfg, "--out", str(out),
                       "--no-figures") == 0
        rows = report.read_rows(out)
        theorems = {r["theorem_id"] for r in rows}
        assert theorems == {"T4", "T5", "T6", "T7", "L8", "T9", "T10"}
        fitted = [r for r in rows if r.get("fitted_constant") is not None]
        assert fitted and all(r["fitted_constant"] < 1e6 for r in fitted)


class TestConfigHandling:
    def test_unknown_key(self, tmp_path):
        cfg = write_config(tmp_path, nn_list=[4])
        assert run_cli("bounds", "--config", cfg, "--no-figures") == 2

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert run_cli("bounds", "--config", str(path), "--no-figures") == 2

    def test_unknown_function(self, tmp_path):
        cfg = write_config(tmp_path, function="madeup", n_list=[6], x_list=[1.0],
                           nu_list=[0.0])
        out = tmp_path / "x.csv"
        assert run_cli("eval", "--config", cfg, "--out", str(out),
                       "--no-figures") == 2

    def test_empty_list_rejected(self, tmp_path):
        cfg = write_config(tmp_path, n_list=[])
        assert run_cli("bounds", "--config", cfg, "--no-figures") == 2

    def test_negative_nu_rejected(self, tmp_path):
        cfg = write_config(tmp_path, nu_list=[-0.2])
        assert run_cli("bounds", "--config", cfg, "--no-figures") == 2

    def test_malformed_table_rejected(self, tmp_path):
        table = tmp_path / "bad.txt"
        table.write_text("0 1\n0.5 2 3\n")
        cfg = write_config(tmp_path, function_file=str(table), n_list=[6],
                           x_list=[1.0], nu_list=[0.0])
        assert run_cli("eval", "--config", cfg, "--out",
                       str(tmp_path / "o.csv"), "--no-figures") == 2


class TestDeterminismAndFigures:
    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, n_list=[6, 8], x_list=[0.5, 2.0],
                           nu_list=[0.0, 1.0])
        out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        assert run_cli("bounds", "--config", cfg, "--out", str(out1),
                       "--no-figures") == 0
        assert run_cli("bounds", "--config", cfg, "--out", str(out2),
                       "--no-figures") == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_figures_written_alongside_table(self, tmp_path):
        cfg = write_config(tmp_path, n_list=[6, 8], x_list=[0.5, 2.0],
                           nu_list=[0.5])
        out = tmp_path / "bounds.csv"
        assert run_cli("bounds", "--config", cfg, "--out", str(out)) == 0
        figure = tmp_path / "bounds_bounds.png"
        assert figure.exists() and figure.stat().st_size > 2000

    def test_json_output(self, tmp_path):
        cfg = write_config(tmp_path, function="s", n_list=[6], x_list=[1.0],
                           nu_list=[0.0])
        out = tmp_path / "eval.json"
        assert run_cli("eval", "--config", cfg, "--out", str(out), "--format",
                       "json", "--no-figures") == 0
        rows = report.read_rows(out)
        assert rows[0]["value"] == pytest.approx(1.5, rel=1e-10)
