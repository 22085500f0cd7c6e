"""
Estimate export: CSV and JSON renderings of an EstimateCurve with its risk table
"""

import csv
import io
import json
import logging
import math
import shutil
from pathlib import Path
from typing import Optional, Union

import jsonschema
from pydantic import BaseModel

from greenvar import __version__
from greenvar.models.schema import (
    ESTIMATE_EXPORT_SCHEMA,
    SIM_REPORT_SCHEMA,
    EstimateCurve,
    EstimateExport,
    ExportMeta,
    ExportRow,
    RiskTable,
    SimReport,
)

logger = logging.getLogger(__name__)

COLUMNS = ("t", "n", "d", "c", "s", "g", "r", "ci_lo", "ci_hi")
FORMATS = ("csv", "json")

PathLike = Union[str, Path]


def build_export(table: RiskTable, curve: EstimateCurve, checksum: str) -> EstimateExport:
    """Pair every curve point with its risk-table counts"""
    if len(table) != len(curve.points):
        raise ValueError(f"curve has {len(curve.points)} points for {len(table)} risk-table rows")
    rows = [
        ExportRow(t=row.t, n=row.n, d=row.d, c=row.c, s=p.s, g=p.g, r=p.r, ci_lo=p.ci_lo, ci_hi=p.ci_hi)
        for row, p in zip(table.rows, curve.points)
    ]
    meta = ExportMeta(
        alpha=curve.alpha,
        convention=curve.convention,
        clamp=curve.clamp,
        checksum=checksum,
        total=table.total,
        pre_first_censored=table.pre_first_censored,
        version=__version__,
    )
    return EstimateExport(meta=meta, points=rows)


def format_number(value: Optional[float]) -> str:
    """Shortest round-trip decimal; empty for undefined values"""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        raise ValueError(f"refusing to render non-finite value {value!r}")
    return repr(float(value))


def render_csv(export: EstimateExport) -> str:
    buffer = io.StringIO()
    for key, value in export.meta.model_dump().items():
        if isinstance(value, bool):
            value = str(value).lower()
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in export.points:
        writer.writerow([format_number(getattr(row, col)) for col in COLUMNS])
    return buffer.getvalue()


def render_json(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode="json"), indent=2, allow_nan=False) + "\n"


def validate_export(document: dict) -> None:
    """Validate a parsed estimate export against its JSON Schema"""
    jsonschema.validate(instance=document, schema=ESTIMATE_EXPORT_SCHEMA)


def validate_report(document: dict) -> None:
    jsonschema.validate(instance=document, schema=SIM_REPORT_SCHEMA)


def write_atomic(path: PathLike, text: str) -> Path:
    """Write through a sibling temp file so readers never see a partial file"""
    out_path = Path(path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = out_path.with_name(out_path.name + ".tmp")
    with open(temp_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    shutil.move(str(temp_path), str(out_path))
    return out_path


class EstimateExporter:
    """Writes estimate tables and simulation reports under one output directory"""

    def __init__(self, output_dir: PathLike = "output"):
        self.output_dir = Path(output_dir)
        logger.debug(f"EstimateExporter initialized: dir={self.output_dir}")

    def export_estimate(self, export: EstimateExport, fmt: str = "csv",
                        path: Optional[PathLike] = None) -> Path:
        if fmt not in FORMATS:
            raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
        if fmt == "json":
            text = render_json(export)
            validate_export(json.loads(text))
        else:
            text = render_csv(export)
        out_path = Path(path) if path is not None else self.output_dir / f"estimate.{fmt}"
        write_atomic(out_path, text)
        logger.info(f"Estimate export written to {out_path} ({len(export.points)} rows, {fmt})")
        return out_path

    def export_report(self, report: SimReport, path: Optional[PathLike] = None) -> Path:
        text = render_json(report)
        validate_report(json.loads(text))
        out_path = Path(path) if path is not None else self.output_dir / "sim-report.json"
        write_atomic(out_path, text)
        logger.info(f"Simulation report written to {out_path}")
        return out_path
