"""
Tests for curve assembly, step lookup and the survival band
"""

import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from greenvar.errors import InvalidAlpha
from greenvar.estimators.curve import (
    BEFORE_FIRST_EVENT,
    build_curve,
    sample_columns,
    summarize,
    survival_band,
    value_at,
)
from greenvar.estimators.kaplan_meier import compute_columns
from greenvar.estimators.quantile import z_value
from greenvar.lifetable.builder import build_risk_table


class TestBuildCurve:
    """Test EstimateCurve assembly"""

    def test_worked_example(self, worked_table):
        curve = build_curve(worked_table, alpha=0.05, convention="two_sided")
        assert len(curve.points) == 2
        point = curve.points[1]
        assert point.t == 3.0
        assert point.s == 0.375
        assert point.g == pytest.approx(0.0820313, abs=1e-7)
        assert point.r == pytest.approx(float(Fraction(45603, 1769472)), rel=1e-12)
        half = z_value(0.05, "two_sided") * math.sqrt(point.r)
        assert point.ci_lo == pytest.approx(point.g - half)
        assert point.ci_hi == pytest.approx(point.g + half)

    def test_no_events(self):
        curve = build_curve(build_risk_table([(5.0, 0), (7.0, 0)]))
        assert curve.points == []
        assert curve.first_undefined() is None

    def test_terminal_row(self, terminal_table, caplog):
        with caplog.at_level(logging.WARNING, logger="greenvar.estimators.curve"):
            curve = build_curve(terminal_table)
        last = curve.points[-1]
        assert last.s == 0.0
        assert last.g is None and last.r is None
        assert last.ci_lo is None and last.ci_hi is None
        assert curve.first_undefined() is last
        assert "Risk set exhausted at t=2.0" in caplog.text

    def test_clamp(self, single_event_table):
        raw = build_curve(single_event_table, alpha=0.05)
        clamped = build_curve(single_event_table, alpha=0.05, clamp=True)
        assert raw.points[0].ci_lo < 0
        assert clamped.points[0].ci_lo == 0.0
        assert clamped.points[0].ci_hi == raw.points[0].ci_hi

    def test_invalid_alpha(self, worked_table):
        with pytest.raises(InvalidAlpha):
            build_curve(worked_table, alpha=1.0)


class TestValueAt:
    """Right-continuous lookup"""

    def test_before_first_event(self, worked_table):
        curve = build_curve(worked_table)
        assert value_at(curve, 0.5) == BEFORE_FIRST_EVENT

    def test_at_and_between_events(self, worked_table):
        curve = build_curve(worked_table)
        assert value_at(curve, 1.0).s == 0.75
        assert value_at(curve, 2.9).s == 0.75
        assert value_at(curve, 3.0).s == 0.375
        assert value_at(curve, 100.0).g == curve.points[1].g

    def test_sample_columns_matches_value_at(self, worked_table):
        curve = build_curve(worked_table)
        at = [0.0, 0.5, 1.0, 2.0, 3.0, 9.0]
        sampled = sample_columns(worked_table.times, compute_columns(worked_table), at)
        for i, t in enumerate(at):
            expected = value_at(curve, t)
            assert sampled.s[i] == expected.s
            assert sampled.g[i] == pytest.approx(expected.g)
            assert sampled.r[i] == pytest.approx(expected.r)

    def test_sample_columns_without_events(self):
        table = build_risk_table([(5.0, 0)])
        sampled = sample_columns(table.times, compute_columns(table), [1.0, 10.0])
        np.testing.assert_array_equal(sampled.s, [1.0, 1.0])
        np.testing.assert_array_equal(sampled.g, [0.0, 0.0])


class TestSurvivalBand:
    """Test S -/+ z sqrt(G)"""

    def test_band(self, worked_table):
        curve = build_curve(worked_table, alpha=0.05, convention="two_sided")
        band = survival_band(curve)
        half = z_value(0.05, "two_sided") * math.sqrt(curve.points[1].g)
        assert band[1] == pytest.approx((0.375 - half, 0.375 + half))

    def test_clamped_band(self, single_event_table):
        curve = build_curve(single_event_table, alpha=0.01, clamp=True)
        lo, hi = survival_band(curve)[0]
        assert 0.0 <= lo <= hi <= 1.0

    def test_undefined_band(self, terminal_table):
        band = survival_band(build_curve(terminal_table))
        assert band[0] is not None
        assert band[1] is None


class TestSummarize:
    def test_summary(self, worked_table):
        stats = summarize(worked_table, build_curve(worked_table))
        assert stats["subjects"] == 4
        assert stats["events"] == 2
        assert stats["final_s"] == 0.375
        assert stats["last_defined_t"] == 3.0
