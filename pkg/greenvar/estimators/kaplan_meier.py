"""
Closed-form estimators over a risk table.

For event rows j = 0..k with risk sets n_j and event counts d_j:

    S(t_j)    = prod_{i<=j} (1 - d_i / n_i)                  Kaplan-Meier
    W(t_j)    = sum_{i<=j} d_i / (n_i (n_i - d_i))           A.Var(log S)
    G(t_j)    = S^2 W                                        Greenwood
    Csum(t_j) = sum_{i<=j} d_i / (n_i (n_i - d_i)^3)
    R(t_j)    = S^4 (4 W^3 + Csum)                           A.Var(G)
    A(t_j)    = 4 W + B,  B = W^-2 Csum                      A.Var(log G)

A row with n = d zeroes S and makes every W/Csum term from there on
singular; those values are reported as undefined (None, NaN in columns).
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from greenvar.estimators._kernels import compensated_cumsum
from greenvar.models.schema import HazardEstimate, RiskRow, RiskTable

logger = logging.getLogger(__name__)


class CurveColumns(NamedTuple):
    """Per-row estimator columns; NaN marks undefined entries"""

    s: np.ndarray
    w: np.ndarray
    csum: np.ndarray
    g: np.ndarray
    r: np.ndarray
    a: np.ndarray


def compute_columns(table: RiskTable) -> CurveColumns:
    """Evaluate every estimator at every row of ``table``"""
    n = np.asarray(table.at_risk, dtype=float)
    d = np.asarray(table.events, dtype=float)
    c = np.asarray(table.censored, dtype=float)
    if n.size == 0:
        empty = np.empty(0, dtype=float)
        return CurveColumns(empty, empty, empty, empty, empty, empty)

    s = _survival(n, d, c)

    survivors = n - d
    singular = np.logical_or.accumulate(survivors == 0)
    safe = np.where(survivors == 0, 1.0, survivors)
    w_terms = np.where(survivors == 0, 0.0, d / (n * safe))
    c_terms = np.where(survivors == 0, 0.0, d / (n * (safe * safe * safe)))

    w = compensated_cumsum(w_terms)
    csum = compensated_cumsum(c_terms)
    w[singular] = np.nan
    csum[singular] = np.nan

    s2 = s * s
    g = s2 * w
    r = (s2 * s2) * (4.0 * (w * w * w) + csum)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(w > 0, 4.0 * w + csum / (w * w), np.nan)

    if singular.any():
        first = int(np.argmax(singular))
        logger.debug(f"Risk set exhausted at t={table.times[first]}: variances undefined from row {first}")
    return CurveColumns(s=s, w=w, csum=csum, g=g, r=r, a=a)


def _survival(n: np.ndarray, d: np.ndarray, c: np.ndarray) -> np.ndarray:
    # Between censorings the product telescopes: prod (n_i - d_i)/n_i = (n_j - d_j)/n_start.
    k = n.size
    run_start = np.empty(k, dtype=bool)
    run_start[0] = True
    run_start[1:] = c[:-1] > 0
    run_id = np.cumsum(run_start) - 1

    starts = np.flatnonzero(run_start)
    within = (n - d) / n[starts][run_id]
    run_last = np.append(starts[1:] - 1, k - 1)
    carried = np.concatenate(([1.0], np.cumprod(within[run_last])[:-1]))
    return carried[run_id] * within


def _value(column: np.ndarray, table: RiskTable, j: int) -> Optional[float]:
    table.row(j)
    value = column[j]
    return None if np.isnan(value) else float(value)


def km_survival(table: RiskTable, j: int) -> float:
    """Kaplan-Meier survival at the j-th event time"""
    table.row(j)
    return float(compute_columns(table).s[j])


def greenwood_sum(table: RiskTable, j: int) -> Optional[float]:
    """Cumulative Greenwood sum W(t_j), None once a row has n = d"""
    return _value(compute_columns(table).w, table, j)


def log_survival_avar(table: RiskTable, j: int) -> Optional[float]:
    """Asymptotic variance of log S(t_j); equal to the Greenwood sum"""
    return greenwood_sum(table, j)


def greenwood(table: RiskTable, j: int) -> Optional[float]:
    return _value(compute_columns(table).g, table, j)


def c_sum(table: RiskTable, j: int) -> Optional[float]:
    return _value(compute_columns(table).csum, table, j)


def r_hat(table: RiskTable, j: int) -> Optional[float]:
    """Asymptotic variance of the Greenwood estimator at t_j"""
    return _value(compute_columns(table).r, table, j)


def a_hat(table: RiskTable, j: int) -> Optional[float]:
    return _value(compute_columns(table).a, table, j)


def b_hat(table: RiskTable, j: int) -> Optional[float]:
    cols = compute_columns(table)
    table.row(j)
    w, csum = cols.w[j], cols.csum[j]
    if np.isnan(w) or w == 0:
        return None
    return float(csum / (w * w))


def r_hat_chain(table: RiskTable, j: int) -> Optional[float]:
    """R-hat through the substitution chain S^4 W^2 A"""
    cols = compute_columns(table)
    table.row(j)
    s, w, a = cols.s[j], cols.w[j], cols.a[j]
    if np.isnan(a):
        return None
    return float((s * s) * (s * s) * (w * w) * a)


def c_term(row: RiskRow) -> Optional[float]:
    """Asymptotic variance of the row's Greenwood summand d/(n(n-d))"""
    survivors = row.n - row.d
    if survivors == 0:
        return None
    return row.d / (row.n * survivors ** 3)


def hazard_estimate(row: RiskRow) -> HazardEstimate:
    lam = row.d / row.n
    return HazardEstimate(lambda_hat=lam, avar=lam * (1.0 - lam) / row.n)
