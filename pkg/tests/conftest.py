"""
Shared fixtures: the small hand-checked datasets used across suites
"""

from pathlib import Path
from typing import Iterable, Tuple

import pytest

from greenvar.lifetable.builder import build_risk_table

WORKED_RECORDS = [(1.0, 1), (2.0, 0), (3.0, 1), (4.0, 0)]
SINGLE_EVENT_RECORDS = [(1.0, 1), (2.0, 0), (3.0, 0)]
TERMINAL_RECORDS = [(1.0, 1), (2.0, 1)]


def write_dataset(path: Path, records: Iterable[Tuple[float, int]]) -> Path:
    lines = ["time,status"] + [f"{t},{s}" for t, s in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def worked_table():
    return build_risk_table(WORKED_RECORDS)


@pytest.fixture
def single_event_table():
    return build_risk_table(SINGLE_EVENT_RECORDS)


@pytest.fixture
def terminal_table():
    """Last row has n = d"""
    return build_risk_table(TERMINAL_RECORDS)


@pytest.fixture
def worked_csv(tmp_path):
    return write_dataset(tmp_path / "data.csv", WORKED_RECORDS)
