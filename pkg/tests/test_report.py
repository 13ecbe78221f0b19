"""Serialization round-trips, deterministic ordering, and figures."""

import math

import pytest

from dunklops.core import DunklParams, SeriesPolicy
from dunklops.figures import render_figures
from dunklops.kernels import QuadraturePolicy
from dunklops.moments import bound_sweep, central_moments
from dunklops.operators import OperatorQuery
from dunklops.rates import check_korovkin
from dunklops import report


@pytest.fixture(scope="module")
def fingerprint():
    return report.fingerprint(SeriesPolicy(), QuadraturePolicy())


@pytest.fixture(scope="module")
def sample_rows(fingerprint):
    rows = report.bound_rows(bound_sweep([6, 8], [0.5, 2.0], [0.0, 1.0]), fingerprint)
    rows += report.moment_rows(
        [central_moments(OperatorQuery(8, 2.0, DunklParams(0.5))), (4, 1.0, 0.5)],
        fingerprint,
    )
    rows += report.rate_rows(check_korovkin([25, 50], 0.0), fingerprint)
    rows.append(report.eval_row("s", 0.5, 6, 1.0 / 3.0, 0.1 + 0.2, fingerprint))
    return rows


AWKWARD = [0.1, 1.0 / 3.0, math.pi, 1e-300, 1e300, 2.0 / 3.0, 5e-324]


class TestFormatting:
    @pytest.mark.parametrize("value", AWKWARD)
    def test_17g_round_trips(self, value):
        assert float(format(value, ".17g")) == value


class TestRoundTrip:
    def test_csv(self, tmp_path, sample_rows):
        path = report.write_rows(tmp_path / "t.csv", sample_rows, "csv")
        back = report.read_rows(path)
        original = report.sort_rows(sample_rows)
        assert len(back) == len(original)
        for a, b in zip(original, back):
            for key, value in a.items():
                got = b.get(key)
                if isinstance(value, float):
                    if math.isnan(value):
                        assert got is None
                    else:
                        assert got == value, key
                elif value is not None:
                    assert got == value or str(value) == str(got), key

    def test_json(self, tmp_path, sample_rows):
        path = report.write_rows(tmp_path / "t.json", sample_rows, "json")
        back = report.read_rows(path)
        original = report.sort_rows(sample_rows)
        for a, b in zip(original, back):
            for key, value in a.items():
                if isinstance(value, float) and not math.isnan(value):
                    assert b[key] == value, key

    def test_unknown_format(self, tmp_path, sample_rows):
        with pytest.raises(ValueError):
            report.write_rows(tmp_path / "t.xml", sample_rows, "xml")


class TestDeterminism:
    def test_sort_is_total_and_stable(self, sample_rows):
        import random

        shuffled = list(sample_rows)
        random.Random(7).shuffle(shuffled)
        assert report.sort_rows(shuffled) == report.sort_rows(sample_rows)

    def test_identical_bytes(self, tmp_path, sample_rows):
        p1 = report.write_rows(tmp_path / "a.csv", sample_rows, "csv")
        p2 = report.write_rows(tmp_path / "b.csv", list(reversed(sample_rows)), "csv")
        assert p1.read_bytes() == p2.read_bytes()


class TestFigures:
    def test_figures_rendered_per_command(self, tmp_path, sample_rows):
        table = report.write_rows(tmp_path / "suite.csv", sample_rows, "csv")
        written = render_figures(report.sort_rows(sample_rows), table)
        names = {p.name for p in written}
        assert names == {
            "suite_eval.png",
            "suite_moments.png",
            "suite_bounds.png",
            "suite_rates.png",
        }
        for p in written:
            assert p.stat().st_size > 2000

    def test_figure_bytes_deterministic(self, tmp_path, sample_rows):
        rows = report.sort_rows(sample_rows)
        t1 = report.write_rows(tmp_path / "r1.csv", rows, "csv")
        t2 = report.write_rows(tmp_path / "r2.csv", rows, "csv")
        f1 = render_figures(rows, t1)
        f2 = render_figures(rows, t2)
        for a, b in zip(sorted(f1), sorted(f2)):
            assert a.read_bytes() == b.read_bytes()
