"""
Risk table builder - turns (time, status) observations into event rows
"""

import logging
from typing import Any, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from greenvar.errors import EmptyDataset, InvalidRecord
from greenvar.models.schema import ObservationRecord, RiskTable

logger = logging.getLogger(__name__)


def build_risk_table(records: Sequence[Any]) -> RiskTable:
    """Build the risk table for a dataset.

    ``records`` holds ObservationRecord instances or ``(time, status)`` pairs.
    Censorings tied with an event time stay at risk for that event.
    """
    if len(records) == 0:
        raise EmptyDataset()

    times = np.empty(len(records), dtype=float)
    status = np.empty(len(records), dtype=np.int64)
    for index, record in enumerate(records):
        times[index], status[index] = _coerce(index, record)

    return tabulate(times, status)


def tabulate(times: np.ndarray, status: np.ndarray) -> RiskTable:
    """Array form of build_risk_table, used on simulated replications"""
    times = np.asarray(times, dtype=float)
    status = np.asarray(status)
    if times.size == 0:
        raise EmptyDataset()
    if times.shape != status.shape:
        raise ValueError("times and status must have the same length")
    _validate_arrays(times, status)

    total = int(times.size)
    is_event = status == 1
    event_times, event_counts = np.unique(times[is_event], return_counts=True)
    if event_times.size == 0:
        logger.debug(f"No events among {total} records")
        return RiskTable(total=total, pre_first_censored=total)

    censor_times = times[~is_event]
    # index of the last event time <= each censoring time, -1 before the first event
    slot = np.searchsorted(event_times, censor_times, side="right") - 1
    pre_first = int(np.count_nonzero(slot < 0))
    censored = np.bincount(slot[slot >= 0], minlength=event_times.size)

    ordered = np.sort(times)
    at_risk = total - np.searchsorted(ordered, event_times, side="left")

    table = RiskTable(
        times=tuple(event_times.tolist()),
        at_risk=tuple(at_risk.tolist()),
        events=tuple(event_counts.tolist()),
        censored=tuple(censored.tolist()),
        total=total,
        pre_first_censored=pre_first,
    )
    logger.debug(f"Risk table: {len(table)} event times from {total} records")
    return table


def _coerce(index: int, record: Any) -> Tuple[float, int]:
    if isinstance(record, ObservationRecord):
        return record.time, record.status
    try:
        time, status = record
    except (TypeError, ValueError):
        raise InvalidRecord(index, "expected a (time, status) pair") from None
    try:
        checked = ObservationRecord(time=time, status=status)
    except ValidationError as e:
        raise InvalidRecord(index, _first_message(e)) from None
    return checked.time, checked.status


def _validate_arrays(times: np.ndarray, status: np.ndarray) -> None:
    bad_time = ~np.isfinite(times) | (times < 0)
    if bad_time.any():
        index = int(np.argmax(bad_time))
        raise InvalidRecord(index, f"time must be finite and >= 0, got {times[index]!r}")
    bad_status = (status != 0) & (status != 1)
    if bad_status.any():
        index = int(np.argmax(bad_status))
        raise InvalidRecord(index, f"status must be 0 or 1, got {status[index]!r}")


def _first_message(error: ValidationError) -> str:
    detail = error.errors()[0]
    field = ".".join(str(part) for part in detail.get("loc", ()))
    message = detail.get("msg", "invalid value").removeprefix("Value error, ")
    return f"{field}: {message}" if field else message
