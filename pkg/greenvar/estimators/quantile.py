"""
Standard normal quantile and Wald intervals
"""

import math
from typing import Tuple

from greenvar.errors import InvalidAlpha, InvalidVariance

CONVENTIONS = ("paper", "two_sided")

# Acklam's rational approximation coefficients
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)

_P_LOW = 0.02425
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def normal_ppf(p: float) -> float:
    """Inverse CDF of the standard normal distribution for p in (0, 1).

    Acklam's rational approximation on the lower half, refined by one Halley
    step against ``erfc``; the upper half follows by symmetry.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    q = min(p, 1.0 - p)
    x = _lower_half(q)

    e = 0.5 * math.erfc(-x / _SQRT2) - q
    u = e * _SQRT2PI * math.exp(0.5 * x * x)
    x = x - u / (1.0 + 0.5 * x * u)

    return x if p < 0.5 else -x


def _lower_half(q: float) -> float:
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        return ((((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5])
                / ((((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0))
    t = q - 0.5
    r = t * t
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * t
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


def z_value(alpha: float, convention: str = "paper") -> float:
    """Normal quantile for the interval: 1 - alpha (paper) or 1 - alpha/2 (two_sided)"""
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha < 1.0):
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha!r}")
    if convention == "paper":
        return normal_ppf(1.0 - alpha)
    if convention == "two_sided":
        return normal_ppf(1.0 - alpha / 2.0)
    raise ValueError(f"unknown convention {convention!r}, expected one of {CONVENTIONS}")


def wald_ci(g: float, r: float, alpha: float, convention: str = "paper") -> Tuple[float, float]:
    """Wald interval g -/+ z sqrt(r)"""
    if not r >= 0.0:
        raise InvalidVariance(f"variance must be >= 0, got {r!r}")
    half = z_value(alpha, convention) * math.sqrt(r)
    return g - half, g + half
