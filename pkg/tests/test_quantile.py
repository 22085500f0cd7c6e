"""
Tests for the normal quantile and Wald intervals
"""

import numpy as np
import pytest
from scipy.stats import norm

from greenvar.errors import InvalidAlpha, InvalidVariance
from greenvar.estimators.quantile import normal_ppf, wald_ci, z_value


class TestNormalPpf:
    """Compare against scipy as the reference implementation"""

    @pytest.mark.parametrize("p", np.concatenate([
        np.logspace(-12, -1, 23),
        np.linspace(0.02, 0.98, 49),
        1.0 - np.logspace(-12, -1, 23),
    ]).tolist())
    def test_against_scipy(self, p):
        assert normal_ppf(p) == pytest.approx(norm.ppf(p), rel=1e-12, abs=1e-12)

    def test_median(self):
        assert normal_ppf(0.5) == 0.0

    def test_symmetry(self):
        for p in (0.001, 0.1, 0.3):
            assert normal_ppf(p) == pytest.approx(-normal_ppf(1.0 - p), rel=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
    def test_out_of_range(self, p):
        with pytest.raises(ValueError):
            normal_ppf(p)


class TestZValue:
    """Test the two interval conventions"""

    def test_paper_convention(self):
        assert z_value(0.05, "paper") == pytest.approx(1.644854, abs=1e-6)

    def test_two_sided_convention(self):
        assert z_value(0.05, "two_sided") == pytest.approx(1.959964, abs=1e-6)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.05, 1.2, float("nan")])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(InvalidAlpha):
            z_value(alpha)

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            z_value(0.05, "three_sided")


class TestWaldCi:
    """Test g -/+ z sqrt(r)"""

    def test_zero_variance(self):
        assert wald_ci(0.3, 0.0, 0.05) == (0.3, 0.3)
        assert wald_ci(0.3, 0.0, 0.05, "two_sided") == (0.3, 0.3)

    def test_median_alpha(self):
        g = 21 / 256
        assert wald_ci(g, 0.0257727, 0.5) == (g, g)

    def test_worked_example(self):
        lo, hi = wald_ci(21 / 256, 45603 / 1769472, 0.05, "paper")
        assert lo == pytest.approx(-0.1820284, abs=1e-6)
        assert hi == pytest.approx(0.3460909, abs=1e-6)

    def test_negative_variance(self):
        with pytest.raises(InvalidVariance):
            wald_ci(0.1, -1e-9, 0.05)

    def test_invalid_alpha(self):
        with pytest.raises(InvalidAlpha):
            wald_ci(0.1, 0.01, 0.0)
