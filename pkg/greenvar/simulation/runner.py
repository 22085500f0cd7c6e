"""
Validation runner - replays the estimators over seeded replications and
compares empirical sampling variances with the analytic ones
"""

import logging
from multiprocessing import Pool
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from greenvar import __version__
from greenvar.errors import DegenerateBin, InvalidBins, InvalidConfig
from greenvar.estimators.curve import sample_columns
from greenvar.estimators.kaplan_meier import compute_columns
from greenvar.lifetable.builder import tabulate
from greenvar.models.schema import EvalTimeSummary, RiskTable, SimConfig, SimReport
from greenvar.simulation.generator import generate_arrays

logger = logging.getLogger(__name__)

MIN_DIAGNOSTIC_REPS = 30
DEFAULT_EVAL_QUANTILES = (0.125, 0.375, 0.625, 0.875)

Bin = Tuple[float, float]


class ReplicationSample(NamedTuple):
    s: np.ndarray
    w: np.ndarray
    g: np.ndarray
    r: np.ndarray
    increments: np.ndarray


def default_eval_times(config: SimConfig) -> Tuple[float, ...]:
    """Centres of the four quartile bins of the first replication's event times"""
    times, status = generate_arrays(config, 0)
    event_times = times[status == 1]
    if event_times.size == 0:
        raise InvalidConfig("eval_times", "first replication has no events to derive defaults from")
    quantiles = np.unique(np.quantile(event_times, DEFAULT_EVAL_QUANTILES))
    return tuple(float(q) for q in quantiles if q > 0)


def bin_increment(table: RiskTable, bin_: Bin) -> float:
    """Greenwood increment sum of d/(n(n-d)) over rows with lo < t <= hi; NaN if singular"""
    lo, hi = bin_
    t = np.asarray(table.times, dtype=float)
    mask = (t > lo) & (t <= hi)
    n = np.asarray(table.at_risk, dtype=float)[mask]
    d = np.asarray(table.events, dtype=float)[mask]
    if np.any(n == d):
        return float("nan")
    return float(np.sum(d / (n * (n - d))))


def _replicate(task: Tuple[SimConfig, int, Tuple[float, ...], Tuple[Bin, ...]]) -> ReplicationSample:
    config, rep_index, eval_times, bins = task
    times, status = generate_arrays(config, rep_index)
    table = tabulate(times, status)
    sampled = sample_columns(table.times, compute_columns(table), eval_times)
    increments = np.array([bin_increment(table, b) for b in bins], dtype=float)
    return ReplicationSample(s=sampled.s, w=sampled.w, g=sampled.g, r=sampled.r, increments=increments)


def _run_replications(config: SimConfig, eval_times: Tuple[float, ...],
                      bins: Tuple[Bin, ...]) -> List[ReplicationSample]:
    """Samples in replication-index order, whatever the worker count"""
    tasks = [(config, i, eval_times, bins) for i in range(config.reps)]
    if config.workers == 1:
        return [_replicate(task) for task in tasks]

    chunksize = max(1, config.reps // (config.workers * 8))
    logger.debug(f"Running {config.reps} replications on {config.workers} workers")
    with Pool(processes=config.workers) as pool:
        return pool.map(_replicate, tasks, chunksize=chunksize)


def _sample_variance(values: np.ndarray) -> Optional[float]:
    if values.size < 2:
        return None
    if np.all(values == values[0]):
        return 0.0
    return float(np.var(values, ddof=1))


def _mean(values: np.ndarray) -> Optional[float]:
    return float(np.mean(values)) if values.size else None


def _ratio(num: Optional[float], den: Optional[float]) -> Optional[float]:
    if num is None or den is None or den <= 0:
        return None
    return num / den


def _correlation(x: np.ndarray, y: np.ndarray) -> Optional[float]:
    finite = np.isfinite(x) & np.isfinite(y)
    x, y = x[finite], y[finite]
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    return float(np.corrcoef(x, y)[0, 1])


def _summarize(t: float, s: np.ndarray, w: np.ndarray, g: np.ndarray, r: np.ndarray) -> EvalTimeSummary:
    defined = np.isfinite(s) & np.isfinite(g) & np.isfinite(r)
    s, w, g, r = s[defined], w[defined], g[defined], r[defined]

    emp_var_s = _sample_variance(s)
    emp_var_g = _sample_variance(g)
    mean_g = _mean(g)
    mean_r = _mean(r)

    positive = s > 0
    emp_var_log_s = _sample_variance(np.log(s[positive]))
    mean_w = _mean(w[positive])

    return EvalTimeSummary(
        t=t,
        defined_count=int(defined.sum()),
        mean_s=_mean(s),
        emp_var_s=emp_var_s,
        mean_g=mean_g,
        emp_var_g=emp_var_g,
        mean_r=mean_r,
        ratio_g=_ratio(emp_var_s, mean_g),
        ratio_r=_ratio(emp_var_g, mean_r),
        emp_var_log_s=emp_var_log_s,
        mean_w=mean_w,
        ratio_w=_ratio(emp_var_log_s, mean_w),
    )


def run_validation(config: SimConfig) -> SimReport:
    """Empirical variance of S and G against mean Greenwood and mean R-hat at each eval time"""
    eval_times = config.eval_times or default_eval_times(config)
    bins: Tuple[Bin, ...] = ()
    if len(eval_times) >= 2:
        bins = ((0.0, eval_times[0]), (eval_times[-2], eval_times[-1]))

    logger.info(f"Running validation: n={config.n}, reps={config.reps}, censor={config.censor}, "
                f"seed={config.seed}, eval_times={list(eval_times)}")
    samples = _run_replications(config, eval_times, bins)

    S = np.vstack([x.s for x in samples])
    W = np.vstack([x.w for x in samples])
    G = np.vstack([x.g for x in samples])
    R = np.vstack([x.r for x in samples])

    points = []
    for i, t in enumerate(eval_times):
        summary = _summarize(t, S[:, i], W[:, i], G[:, i], R[:, i])
        if summary.defined_count == 0:
            logger.warning(f"No replication defined at t={t}")
        logger.info(f"t={t:.6g}: ratio_g={summary.ratio_g}, ratio_r={summary.ratio_r}, "
                    f"ratio_w={summary.ratio_w}, defined={summary.defined_count}/{config.reps}")
        points.append(summary)

    correlation = None
    if bins:
        increments = np.vstack([x.increments for x in samples])
        correlation = _correlation(increments[:, 0], increments[:, 1])

    return SimReport(
        version=__version__,
        config=config.model_copy(update={"eval_times": tuple(eval_times)}),
        reps=config.reps,
        points=points,
        increment_bins=list(bins) or None,
        increment_correlation=correlation,
    )


def _check_bins(bin_a: Bin, bin_b: Bin) -> None:
    for name, (lo, hi) in (("bin_a", bin_a), ("bin_b", bin_b)):
        if not 0 <= lo < hi:
            raise InvalidBins(f"{name} must satisfy 0 <= lo < hi, got ({lo}, {hi})")
    if not (bin_a[1] <= bin_b[0] or bin_b[1] <= bin_a[0]):
        raise InvalidBins(f"bins {bin_a} and {bin_b} overlap")


def hazard_independence_check(config: SimConfig, bin_a: Sequence[float], bin_b: Sequence[float]) -> float:
    """Correlation across replications of Greenwood increments over two disjoint bins (lo, hi]"""
    a = (float(bin_a[0]), float(bin_a[1]))
    b = (float(bin_b[0]), float(bin_b[1]))
    _check_bins(a, b)
    if config.reps < MIN_DIAGNOSTIC_REPS:
        logger.warning(f"Correlation over {config.reps} replications is unreliable; "
                       f"use at least {MIN_DIAGNOSTIC_REPS}")

    samples = _run_replications(config, (), (a, b))
    increments = np.vstack([x.increments for x in samples])
    correlation = _correlation(increments[:, 0], increments[:, 1])
    if correlation is None:
        raise DegenerateBin(f"increments over {a} or {b} do not vary across replications")

    logger.info(f"Greenwood increment correlation over {a} and {b}: {correlation:.4f}")
    return correlation
