"""
Tests for estimate export and plot series
"""

import json

import pytest

from greenvar.estimators.curve import build_curve
from greenvar.exporter.estimate_exporter import (
    EstimateExporter,
    build_export,
    format_number,
    render_csv,
    write_atomic,
)
from greenvar.exporter.plotter import CurvePlotter, last_defined_time, step_series
from greenvar.lifetable.builder import build_risk_table


class TestFormatting:
    """Test number rendering"""

    def test_shortest_round_trip(self):
        value = 21 / 256 * 0.1
        assert float(format_number(value)) == value
        assert format_number(0.1) == "0.1"
        assert format_number(3) == "3"
        assert format_number(None) == ""

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            format_number(float("nan"))


class TestEstimateExporter:
    """Test export assembly and writing"""

    def test_build_export(self, worked_table):
        export = build_export(worked_table, build_curve(worked_table), "ab" * 32)
        assert [p.c for p in export.points] == [1, 1]
        assert export.meta.total == 4
        assert export.meta.checksum == "ab" * 32

    def test_mismatched_curve(self, worked_table, single_event_table):
        with pytest.raises(ValueError):
            build_export(worked_table, build_curve(single_event_table), "0" * 64)

    def test_csv_header(self, worked_table):
        text = render_csv(build_export(worked_table, build_curve(worked_table), "0" * 64))
        lines = text.splitlines()
        assert lines[0] == "# alpha=0.05"
        assert "t,n,d,c,s,g,r,ci_lo,ci_hi" in lines

    def test_json_export(self, worked_table, tmp_path):
        export = build_export(worked_table, build_curve(worked_table), "0" * 64)
        path = EstimateExporter(tmp_path).export_estimate(export, "json")
        assert path == tmp_path / "estimate.json"
        assert json.loads(path.read_text(encoding="utf-8"))["points"][0]["s"] == 0.75

    def test_unknown_format(self, worked_table, tmp_path):
        export = build_export(worked_table, build_curve(worked_table), "0" * 64)
        with pytest.raises(ValueError):
            EstimateExporter(tmp_path).export_estimate(export, "xml")

    def test_atomic_write_leaves_no_temp_file(self, tmp_path):
        path = write_atomic(tmp_path / "nested" / "out.txt", "data\n")
        assert path.read_text(encoding="utf-8") == "data\n"
        assert [p.name for p in path.parent.iterdir()] == ["out.txt"]

    def test_atomic_write_uses_move(self, tmp_path, mocker):
        move = mocker.patch("greenvar.exporter.estimate_exporter.shutil.move")
        write_atomic(tmp_path / "out.txt", "x")
        move.assert_called_once_with(str(tmp_path / "out.txt.tmp"), str(tmp_path / "out.txt"))


class TestStepSeries:
    """Test plot vertices"""

    def test_worked_survival_has_two_drops(self, worked_table):
        curve = build_curve(worked_table)
        series = step_series(curve.times, [p.s for p in curve.points], 1.0, horizon=4.0)
        assert series.x == [0.0, 1.0, 3.0, 4.0]
        assert series.y == [1.0, 0.75, 0.375, 0.375]
        drops = sum(1 for a, b in zip(series.y, series.y[1:]) if b < a)
        assert drops == 2

    def test_no_events_is_flat(self):
        curve = build_curve(build_risk_table([(5.0, 0), (7.0, 0)]))
        assert step_series(curve.times, [], 1.0, horizon=7.0) == ([0.0, 7.0], [1.0, 1.0])
        assert step_series(curve.times, [], 0.0, horizon=7.0).y == [0.0, 0.0]

    def test_truncated_at_undefined(self, terminal_table):
        curve = build_curve(terminal_table)
        series = step_series(curve.times, [p.g for p in curve.points], 0.0, horizon=2.0)
        assert series.x == [0.0, 1.0]
        assert last_defined_time(curve) == 1.0

    def test_fully_defined_curve_has_no_cutoff(self, worked_table):
        assert last_defined_time(build_curve(worked_table)) is None


class TestCurvePlotter:
    def test_no_event_dataset(self, tmp_path):
        curve = build_curve(build_risk_table([(5.0, 0), (7.0, 0)]))
        written = CurvePlotter(tmp_path, horizon=7.0).plot_all(curve)
        assert set(written) == {"survival", "greenwood", "r_hat", "survival_ci", "greenwood_ci",
                                "plot_points"}
        assert (tmp_path / "plot_points.csv").read_text(encoding="utf-8").count("\n") == 2
