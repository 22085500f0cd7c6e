"""
CSV ingestion and emission for ``time,status`` datasets
"""

import csv
import hashlib
import io
import logging
import math
import re
from pathlib import Path
from typing import Iterable, List, Union

from greenvar.errors import DatasetUnreadable, EmptyDataset, InvalidRecord
from greenvar.models.schema import ObservationRecord

logger = logging.getLogger(__name__)

HEADER = ("time", "status")
DECIMAL = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")

PathLike = Union[str, Path]


def read_bytes(path: PathLike) -> bytes:
    """Read a dataset file, mapping OS failures to DatasetUnreadable"""
    file_path = Path(path)
    try:
        return file_path.read_bytes()
    except (IOError, OSError) as e:
        logger.error(f"Failed to read dataset {file_path}: {e}")
        raise DatasetUnreadable(f"cannot read {file_path}: {e.strerror or e}") from e


def file_checksum(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def read_records(path: PathLike) -> List[ObservationRecord]:
    return parse_records(decode(read_bytes(path), path))


def decode(data: bytes, path: PathLike = "<input>") -> str:
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise DatasetUnreadable(f"{path} is not valid UTF-8: {e.reason}") from e


def parse_records(text: str) -> List[ObservationRecord]:
    """Parse CSV text with a ``time,status`` header.

    Blank lines are skipped. Errors name the 1-based line of the offending row.
    """
    reader = csv.reader(io.StringIO(text, newline=""))
    header = None
    records: List[ObservationRecord] = []

    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = [cell.strip().lower() for cell in row]
            if sorted(header) != sorted(HEADER):
                raise InvalidRecord(-1, "expected header 'time,status'", line=reader.line_num)
            continue
        records.append(_parse_row(row, header, len(records), reader.line_num))

    if not records:
        raise EmptyDataset()

    logger.info(f"Parsed {len(records)} records")
    return records


def _parse_row(row: List[str], header: List[str], index: int, line: int) -> ObservationRecord:
    if len(row) != len(header):
        raise InvalidRecord(index, f"expected {len(header)} fields, found {len(row)}", line=line)
    fields = dict(zip(header, (cell.strip() for cell in row)))

    if not DECIMAL.fullmatch(fields["time"]):
        raise InvalidRecord(index, f"time {fields['time']!r} is not a number", line=line)
    time = float(fields["time"])
    if not math.isfinite(time) or time < 0:
        raise InvalidRecord(index, f"time must be finite and >= 0, got {fields['time']!r}", line=line)

    if fields["status"] not in ("0", "1"):
        raise InvalidRecord(index, f"status must be 0 or 1, got {fields['status']!r}", line=line)

    return ObservationRecord(time=time, status=int(fields["status"]))


def format_records(records: Iterable[ObservationRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(HEADER)
    for record in records:
        writer.writerow([repr(float(record.time)), record.status])
    return buffer.getvalue()


def write_records(path: PathLike, records: Iterable[ObservationRecord]) -> Path:
    """Write a dataset as ``time,status`` CSV"""
    out_path = Path(path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(format_records(records), encoding="utf-8")
    logger.info(f"Dataset written to {out_path}")
    return out_path
