"""
JSON Schema and Pydantic models for greenvar
Compliant with JSON Schema Draft 2020-12
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Convention = Literal["paper", "two_sided"]

_NULLABLE_NUMBER = {"type": ["number", "null"]}

# JSON Schema Definitions
ESTIMATE_EXPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://greenvar.local/schemas/estimate-export.json",
    "title": "greenvar estimate export",
    "description": "Kaplan-Meier, Greenwood and R-hat estimates per event time",
    "type": "object",
    "properties": {
        "meta": {"$ref": "#/$defs/meta"},
        "points": {
            "type": "array",
            "items": {"$ref": "#/$defs/point"}
        }
    },
    "required": ["meta", "points"],
    "$defs": {
        "meta": {
            "type": "object",
            "properties": {
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "convention": {"type": "string", "enum": ["paper", "two_sided"]},
                "clamp": {"type": "boolean"},
                "checksum": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                "total": {"type": "integer", "minimum": 1},
                "pre_first_censored": {"type": "integer", "minimum": 0},
                "version": {"type": "string"}
            },
            "required": ["alpha", "convention", "clamp", "checksum", "total",
                         "pre_first_censored", "version"]
        },
        "point": {
            "type": "object",
            "properties": {
                "t": {"type": "number"},
                "n": {"type": "integer", "minimum": 1},
                "d": {"type": "integer", "minimum": 1},
                "c": {"type": "integer", "minimum": 0},
                "s": {"type": "number", "minimum": 0, "maximum": 1},
                "g": _NULLABLE_NUMBER,
                "r": _NULLABLE_NUMBER,
                "ci_lo": _NULLABLE_NUMBER,
                "ci_hi": _NULLABLE_NUMBER
            },
            "required": ["t", "n", "d", "c", "s", "g", "r", "ci_lo", "ci_hi"]
        }
    }
}

SIM_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "https://greenvar.local/schemas/sim-report.json",
    "title": "greenvar simulation report",
    "description": "Empirical sampling variances against analytic Greenwood and R-hat",
    "type": "object",
    "properties": {
        "version": {"type": "string"},
        "config": {"type": "object"},
        "reps": {"type": "integer", "minimum": 2},
        "points": {
            "type": "array",
            "items": {"$ref": "#/$defs/eval_point"}
        },
        "increment_bins": {
            "type": ["array", "null"],
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
        },
        "increment_correlation": _NULLABLE_NUMBER
    },
    "required": ["version", "config", "reps", "points", "increment_bins", "increment_correlation"],
    "$defs": {
        "eval_point": {
            "type": "object",
            "properties": {
                "t": {"type": "number", "exclusiveMinimum": 0},
                "defined_count": {"type": "integer", "minimum": 0},
                "mean_s": _NULLABLE_NUMBER,
                "emp_var_s": _NULLABLE_NUMBER,
                "mean_g": _NULLABLE_NUMBER,
                "emp_var_g": _NULLABLE_NUMBER,
                "mean_r": _NULLABLE_NUMBER,
                "ratio_g": _NULLABLE_NUMBER,
                "ratio_r": _NULLABLE_NUMBER,
                "emp_var_log_s": _NULLABLE_NUMBER,
                "mean_w": _NULLABLE_NUMBER,
                "ratio_w": _NULLABLE_NUMBER
            },
            "required": ["t", "defined_count", "emp_var_s", "mean_g", "emp_var_g",
                         "mean_r", "ratio_g", "ratio_r"]
        }
    }
}


# Pydantic Models
class ObservationRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    time: float
    status: Literal[0, 1]

    @field_validator("time")
    @classmethod
    def check_time(cls, v: float) -> float:
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"time must be finite and >= 0, got {v!r}")
        return v


class RiskRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    n: int = Field(..., ge=1)
    d: int = Field(..., ge=1)
    c: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_counts(self) -> "RiskRow":
        if self.d > self.n:
            raise ValueError(f"events d={self.d} exceed risk set n={self.n}")
        return self


class RiskTable(BaseModel):
    """Ordered event times with risk-set, event and censoring counts.

    Columns are stored side by side; ``rows`` materialises them as RiskRow.
    """

    model_config = ConfigDict(frozen=True)

    times: Tuple[float, ...] = ()
    at_risk: Tuple[int, ...] = ()
    events: Tuple[int, ...] = ()
    censored: Tuple[int, ...] = ()
    total: int = Field(..., ge=1)
    pre_first_censored: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_accounting(self) -> "RiskTable":
        k = len(self.times)
        if not (len(self.at_risk) == len(self.events) == len(self.censored) == k):
            raise ValueError("column lengths differ")
        if k == 0:
            if self.pre_first_censored != self.total:
                raise ValueError("a table without events must censor every subject")
            return self

        t = np.asarray(self.times, dtype=float)
        n = np.asarray(self.at_risk, dtype=np.int64)
        d = np.asarray(self.events, dtype=np.int64)
        c = np.asarray(self.censored, dtype=np.int64)

        if np.any(np.diff(t) <= 0):
            raise ValueError("event times must be strictly increasing")
        if np.any(d < 1) or np.any(d > n):
            raise ValueError("every row needs 1 <= d <= n")
        if np.any(c < 0):
            raise ValueError("censor counts must be >= 0")
        if n[0] != self.total - self.pre_first_censored:
            raise ValueError("first risk set must equal total - pre_first_censored")
        if np.any(n[1:] != n[:-1] - d[:-1] - c[:-1]):
            raise ValueError("risk sets do not follow n - d - c")
        if n[-1] - d[-1] - c[-1] < 0:
            raise ValueError("counts exceed the cohort size")
        return self

    @classmethod
    def from_rows(cls, rows: List[RiskRow], total: int, pre_first_censored: int = 0) -> "RiskTable":
        return cls(
            times=tuple(r.t for r in rows),
            at_risk=tuple(r.n for r in rows),
            events=tuple(r.d for r in rows),
            censored=tuple(r.c for r in rows),
            total=total,
            pre_first_censored=pre_first_censored,
        )

    @property
    def rows(self) -> Tuple[RiskRow, ...]:
        return tuple(
            RiskRow(t=t, n=n, d=d, c=c)
            for t, n, d, c in zip(self.times, self.at_risk, self.events, self.censored)
        )

    def row(self, j: int) -> RiskRow:
        """Row j; negative or out-of-range indices raise IndexError"""
        if not 0 <= j < len(self.times):
            raise IndexError(f"row index {j} out of range for {len(self.times)} rows")
        return RiskRow(t=self.times[j], n=self.at_risk[j], d=self.events[j], c=self.censored[j])

    def __len__(self) -> int:
        return len(self.times)

    @property
    def still_at_risk(self) -> int:
        """Subjects neither failed nor censored after the last row"""
        if not self.times:
            return self.total - self.pre_first_censored
        return self.at_risk[-1] - self.events[-1] - self.censored[-1]


class HazardEstimate(BaseModel):
    lambda_hat: float = Field(..., ge=0, le=1)
    avar: float = Field(..., ge=0)


class EstimatePoint(BaseModel):
    t: float
    s: float = Field(..., ge=0, le=1)
    w: Optional[float] = Field(None, ge=0)
    g: Optional[float] = Field(None, ge=0)
    csum: Optional[float] = Field(None, ge=0)
    r: Optional[float] = Field(None, ge=0)
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None

    @model_validator(mode="after")
    def check_ci(self) -> "EstimatePoint":
        has_ci = self.ci_lo is not None and self.ci_hi is not None
        if has_ci != (self.r is not None):
            raise ValueError("confidence bounds must be defined exactly when r is defined")
        return self

    @property
    def defined(self) -> bool:
        return self.r is not None


class EstimateCurve(BaseModel):
    points: List[EstimatePoint]
    alpha: float = Field(..., gt=0, lt=1)
    convention: Convention = "paper"
    clamp: bool = False

    @property
    def times(self) -> List[float]:
        return [p.t for p in self.points]

    def first_undefined(self) -> Optional[EstimatePoint]:
        """First point from which g, r and the interval are undefined"""
        return next((p for p in self.points if not p.defined), None)


class CensorSpec(BaseModel):
    """Censoring-time distribution: uniform on [0, param], exponential(rate=param) or none"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["uniform", "exponential", "none"] = "none"
    param: Optional[float] = None

    @model_validator(mode="after")
    def check_param(self) -> "CensorSpec":
        if self.kind == "none":
            return self
        if self.param is None or not math.isfinite(self.param) or self.param <= 0:
            raise ValueError(f"{self.kind} censoring needs a positive parameter")
        return self

    @classmethod
    def parse(cls, text: str) -> "CensorSpec":
        """Parse ``uniform:3.0``, ``exponential:0.5`` or ``none``"""
        kind, _, raw = text.strip().partition(":")
        kind = kind.lower()
        if kind == "none":
            return cls(kind="none")
        try:
            param = float(raw)
        except ValueError:
            raise ValueError(f"censor spec {text!r} needs a numeric parameter") from None
        return cls(kind=kind, param=param)

    def __str__(self) -> str:
        return self.kind if self.kind == "none" else f"{self.kind}:{self.param!r}"


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    event_rate: float = 1.0
    censor: CensorSpec = CensorSpec()
    reps: int
    seed: int = 0
    eval_times: Optional[Tuple[float, ...]] = None
    workers: int = 1
    replay_rep: Optional[int] = None

    @field_validator("n")
    @classmethod
    def check_n(cls, v: int) -> int:
        if v < 2:
            raise ValueError("n must be ≥ 2")
        return v

    @field_validator("reps")
    @classmethod
    def check_reps(cls, v: int) -> int:
        if v < 2:
            raise ValueError("reps must be ≥ 2")
        return v

    @field_validator("event_rate")
    @classmethod
    def check_rate(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError("event_rate must be a positive finite rate")
        return v

    @field_validator("seed")
    @classmethod
    def check_seed(cls, v: int) -> int:
        if not 0 <= v < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return v

    @field_validator("workers")
    @classmethod
    def check_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("workers must be ≥ 1")
        return v

    @field_validator("eval_times")
    @classmethod
    def check_eval_times(cls, v: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if v is None:
            return v
        if not v:
            raise ValueError("eval_times must not be empty")
        if any(not math.isfinite(t) or t <= 0 for t in v):
            raise ValueError("eval_times must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("eval_times must be strictly increasing")
        return v

    @model_validator(mode="after")
    def check_replay(self) -> "SimConfig":
        if self.replay_rep is not None and not 0 <= self.replay_rep < self.reps:
            raise ValueError("replay_rep must index an existing replication")
        return self


class EvalTimeSummary(BaseModel):
    t: float
    defined_count: int = Field(..., ge=0)
    mean_s: Optional[float] = None
    emp_var_s: Optional[float] = Field(None, ge=0)
    mean_g: Optional[float] = Field(None, ge=0)
    emp_var_g: Optional[float] = Field(None, ge=0)
    mean_r: Optional[float] = Field(None, ge=0)
    ratio_g: Optional[float] = None
    ratio_r: Optional[float] = None
    emp_var_log_s: Optional[float] = Field(None, ge=0)
    mean_w: Optional[float] = Field(None, ge=0)
    ratio_w: Optional[float] = None


class SimReport(BaseModel):
    version: str
    config: SimConfig
    reps: int
    points: List[EvalTimeSummary]
    increment_bins: Optional[List[Tuple[float, float]]] = None
    increment_correlation: Optional[float] = None

    @model_validator(mode="after")
    def check_counts(self) -> "SimReport":
        if any(p.defined_count > self.reps for p in self.points):
            raise ValueError("defined_count cannot exceed reps")
        return self


class ExportMeta(BaseModel):
    alpha: float
    convention: Convention
    clamp: bool
    checksum: str
    total: int
    pre_first_censored: int
    version: str


class ExportRow(BaseModel):
    t: float
    n: int
    d: int
    c: int
    s: float
    g: Optional[float]
    r: Optional[float]
    ci_lo: Optional[float]
    ci_hi: Optional[float]


class EstimateExport(BaseModel):
    meta: ExportMeta
    points: List[ExportRow]


SCHEMAS: Dict[str, dict] = {
    "estimate-export.schema.json": ESTIMATE_EXPORT_SCHEMA,
    "sim-report.schema.json": SIM_REPORT_SCHEMA,
}


def save_schema(directory: str = "schemas") -> List[Path]:
    """Save the JSON Schemas to ``directory``"""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, schema in SCHEMAS.items():
        path = out_dir / name
        with open(path, "w", encoding="utf-8") as f:
            json.dump(schema, f, indent=2)
            f.write("\n")
        written.append(path)
    return written
