"""
Seeded generation of right-censored survival datasets
"""

import logging
from typing import List, Tuple

import numpy as np

from greenvar.models.schema import ObservationRecord, SimConfig

logger = logging.getLogger(__name__)

# Synthetic stand-in for the diabetes-trial placebo arm
LEADER_COHORT_SIZE = 9344
LEADER_EVENT_RATE = 0.02        # deaths per year
LEADER_DROPOUT_RATE = 0.01      # losses to follow-up per year
LEADER_ADMIN_WINDOW = (3.5, 5.0)  # administrative censoring, years
DAYS_PER_YEAR = 365.25


def replication_rng(seed: int, rep_index: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, rep_index) only"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, rep_index])))


def generate_arrays(config: SimConfig, rep_index: int) -> Tuple[np.ndarray, np.ndarray]:
    """Observed times and event flags for one replication"""
    if not 0 <= rep_index < config.reps:
        raise IndexError(f"rep_index {rep_index} out of range for {config.reps} replications")
    key = rep_index if config.replay_rep is None else config.replay_rep
    rng = replication_rng(config.seed, key)

    events = rng.exponential(1.0 / config.event_rate, size=config.n)
    censor = config.censor
    if censor.kind == "uniform":
        censoring = rng.uniform(0.0, censor.param, size=config.n)
    elif censor.kind == "exponential":
        censoring = rng.exponential(1.0 / censor.param, size=config.n)
    else:
        censoring = np.full(config.n, np.inf)

    times = np.minimum(events, censoring)
    status = (events <= censoring).astype(np.int64)
    return times, status


def generate_dataset(config: SimConfig, rep_index: int) -> List[ObservationRecord]:
    times, status = generate_arrays(config, rep_index)
    return _to_records(times, status)


def leader_like_dataset(seed: int, n: int = LEADER_COHORT_SIZE) -> List[ObservationRecord]:
    """Large cohort with few events and heavy late censoring.

    Times are rounded up to whole days, so tied event times occur.
    """
    rng = replication_rng(seed, 0)
    events = rng.exponential(1.0 / LEADER_EVENT_RATE, size=n)
    dropout = rng.exponential(1.0 / LEADER_DROPOUT_RATE, size=n)
    admin = rng.uniform(*LEADER_ADMIN_WINDOW, size=n)
    censoring = np.minimum(dropout, admin)

    times = np.ceil(np.minimum(events, censoring) * DAYS_PER_YEAR) / DAYS_PER_YEAR
    status = (events <= censoring).astype(np.int64)
    logger.info(f"Generated stand-in cohort: {n} subjects, {int(status.sum())} events")
    return _to_records(times, status)


def _to_records(times: np.ndarray, status: np.ndarray) -> List[ObservationRecord]:
    return [ObservationRecord(time=t, status=s) for t, s in zip(times.tolist(), status.tolist())]
