"""
Curve assembly and right-continuous step lookup
"""

import bisect
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from greenvar.estimators.kaplan_meier import CurveColumns, compute_columns
from greenvar.estimators.quantile import wald_ci, z_value
from greenvar.models.schema import EstimateCurve, EstimatePoint, RiskTable

logger = logging.getLogger(__name__)


class StepValues(NamedTuple):
    s: float
    w: Optional[float]
    g: Optional[float]
    r: Optional[float]


BEFORE_FIRST_EVENT = StepValues(s=1.0, w=0.0, g=0.0, r=0.0)


def _defined(value: float) -> Optional[float]:
    return None if math.isnan(value) else float(value)


def build_curve(table: RiskTable, alpha: float = 0.05, convention: str = "paper",
                clamp: bool = False) -> EstimateCurve:
    """One EstimatePoint per risk-table row, with Wald intervals on G.

    With ``clamp`` the lower bound is floored at 0.
    """
    z_value(alpha, convention)
    cols = compute_columns(table)

    points = []
    for j, t in enumerate(table.times):
        r = _defined(cols.r[j])
        g = _defined(cols.g[j])
        ci_lo = ci_hi = None
        if r is not None:
            ci_lo, ci_hi = wald_ci(g, r, alpha, convention)
            if clamp:
                ci_lo = max(ci_lo, 0.0)
        points.append(EstimatePoint(
            t=t,
            s=float(cols.s[j]),
            w=_defined(cols.w[j]),
            g=g,
            csum=_defined(cols.csum[j]),
            r=r,
            ci_lo=ci_lo,
            ci_hi=ci_hi,
        ))

    curve = EstimateCurve(points=points, alpha=alpha, convention=convention, clamp=clamp)
    undefined = curve.first_undefined()
    if undefined is not None:
        logger.warning(f"Risk set exhausted at t={undefined.t}: g, r and intervals undefined from there on")
    logger.info(f"Curve built: {len(points)} points, alpha={alpha}, convention={convention}")
    return curve


def value_at(curve: EstimateCurve, t: float) -> StepValues:
    """Curve values at the largest event time <= t"""
    j = bisect.bisect_right(curve.times, t) - 1
    if j < 0:
        return BEFORE_FIRST_EVENT
    point = curve.points[j]
    return StepValues(s=point.s, w=point.w, g=point.g, r=point.r)


def sample_columns(times: Sequence[float], cols: CurveColumns,
                   at: Sequence[float]) -> CurveColumns:
    """Vectorised right-continuous lookup of estimator columns at ``at``"""
    idx = np.searchsorted(np.asarray(times, dtype=float), np.asarray(at, dtype=float), side="right") - 1
    before = idx < 0
    safe = np.where(before, 0, idx)

    def pick(column: np.ndarray, initial: float) -> np.ndarray:
        if column.size == 0:
            return np.full(idx.shape, initial)
        return np.where(before, initial, column[safe])

    return CurveColumns(
        s=pick(cols.s, 1.0),
        w=pick(cols.w, 0.0),
        csum=pick(cols.csum, 0.0),
        g=pick(cols.g, 0.0),
        r=pick(cols.r, 0.0),
        a=pick(cols.a, np.nan),
    )


def survival_band(curve: EstimateCurve) -> List[Optional[Tuple[float, float]]]:
    """Greenwood Wald band S -/+ z sqrt(G) per point, None where G is undefined.

    The curve's clamp flag also bounds the band to [0, 1].
    """
    band: List[Optional[Tuple[float, float]]] = []
    for point in curve.points:
        if point.g is None:
            band.append(None)
            continue
        lo, hi = wald_ci(point.s, point.g, curve.alpha, curve.convention)
        if curve.clamp:
            lo, hi = max(lo, 0.0), min(hi, 1.0)
        band.append((lo, hi))
    return band


def summarize(table: RiskTable, curve: EstimateCurve) -> dict:
    """Headline numbers for logs and CLI status lines"""
    defined = [p for p in curve.points if p.defined]
    last = defined[-1] if defined else None
    return {
        "subjects": table.total,
        "events": int(sum(table.events)),
        "event_times": len(table),
        "final_s": curve.points[-1].s if curve.points else 1.0,
        "max_g": max((p.g for p in defined), default=0.0),
        "max_r": max((p.r for p in defined), default=0.0),
        "last_defined_t": last.t if last else None,
    }
