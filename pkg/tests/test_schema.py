"""
Tests for JSON Schemas and Pydantic models
"""

import json

import jsonschema
import pytest
from pydantic import ValidationError

from greenvar.models.schema import (
    ESTIMATE_EXPORT_SCHEMA,
    SIM_REPORT_SCHEMA,
    CensorSpec,
    EstimatePoint,
    ObservationRecord,
    RiskRow,
    RiskTable,
    SimConfig,
    save_schema,
)


class TestObservationRecord:
    """Test the (time, status) record model"""

    def test_valid_record(self):
        record = ObservationRecord(time=2.5, status=1)
        assert record.time == 2.5
        assert record.status == 1

    @pytest.mark.parametrize("time", [-1.0, float("nan"), float("inf")])
    def test_invalid_time(self, time):
        """Negative and non-finite times are rejected"""
        with pytest.raises(ValidationError):
            ObservationRecord(time=time, status=0)

    def test_invalid_status(self):
        with pytest.raises(ValidationError):
            ObservationRecord(time=1.0, status=2)


class TestRiskTable:
    """Test risk-table accounting checks"""

    def test_from_rows(self):
        rows = [RiskRow(t=1.0, n=4, d=1, c=1), RiskRow(t=3.0, n=2, d=1, c=1)]
        table = RiskTable.from_rows(rows, total=4)
        assert len(table) == 2
        assert table.rows == tuple(rows)
        assert table.still_at_risk == 0

    def test_broken_chain(self):
        """n_{j+1} must equal n_j - d_j - c_j"""
        with pytest.raises(ValidationError):
            RiskTable(times=(1.0, 2.0), at_risk=(4, 3), events=(1, 1), censored=(1, 0), total=4)

    def test_first_risk_set(self):
        with pytest.raises(ValidationError):
            RiskTable(times=(1.0,), at_risk=(3,), events=(1,), censored=(0,), total=4)

    def test_unsorted_times(self):
        with pytest.raises(ValidationError):
            RiskTable(times=(2.0, 1.0), at_risk=(4, 3), events=(1, 1), censored=(0, 0), total=4)

    def test_empty_table_censors_everyone(self):
        table = RiskTable(total=2, pre_first_censored=2)
        assert len(table) == 0
        with pytest.raises(ValidationError):
            RiskTable(total=2, pre_first_censored=1)

    def test_row_index_out_of_range(self, worked_table):
        with pytest.raises(IndexError):
            worked_table.row(2)
        with pytest.raises(IndexError):
            worked_table.row(-1)

    def test_row_rejects_d_over_n(self):
        with pytest.raises(ValidationError):
            RiskRow(t=1.0, n=2, d=3)


class TestEstimatePoint:
    """Test interval presence rules"""

    def test_interval_requires_r(self):
        with pytest.raises(ValidationError):
            EstimatePoint(t=1.0, s=0.5, g=0.1, r=None, ci_lo=0.0, ci_hi=0.2)

    def test_r_requires_interval(self):
        with pytest.raises(ValidationError):
            EstimatePoint(t=1.0, s=0.5, g=0.1, r=0.01)

    def test_undefined_point(self):
        point = EstimatePoint(t=2.0, s=0.0)
        assert not point.defined


class TestCensorSpec:
    """Test censoring distribution parsing"""

    def test_parse_uniform(self):
        spec = CensorSpec.parse("uniform:3.0")
        assert spec.kind == "uniform"
        assert spec.param == 3.0
        assert str(spec) == "uniform:3.0"

    def test_parse_none(self):
        assert CensorSpec.parse("none").kind == "none"

    @pytest.mark.parametrize("text", ["uniform", "uniform:abc", "exponential:-1", "weibull:2"])
    def test_parse_invalid(self, text):
        with pytest.raises(ValueError):
            CensorSpec.parse(text)


class TestSimConfig:
    """Test simulation configuration validation"""

    def test_defaults(self):
        config = SimConfig(n=10, reps=5)
        assert config.event_rate == 1.0
        assert config.censor.kind == "none"
        assert config.workers == 1

    def test_reps_message(self):
        with pytest.raises(ValidationError, match="reps must be ≥ 2"):
            SimConfig(n=10, reps=1)

    def test_n_message(self):
        with pytest.raises(ValidationError, match="n must be ≥ 2"):
            SimConfig(n=1, reps=10)

    @pytest.mark.parametrize("eval_times", [(), (1.0, 0.5), (0.0, 1.0), (1.0, 1.0)])
    def test_eval_times(self, eval_times):
        """Eval times must be positive and strictly increasing"""
        with pytest.raises(ValidationError):
            SimConfig(n=10, reps=5, eval_times=eval_times)

    def test_replay_rep_in_range(self):
        with pytest.raises(ValidationError):
            SimConfig(n=10, reps=5, replay_rep=5)

    def test_seed_range(self):
        SimConfig(n=10, reps=5, seed=2 ** 64 - 1)
        with pytest.raises(ValidationError):
            SimConfig(n=10, reps=5, seed=2 ** 64)


class TestJsonSchemas:
    """Test the published JSON Schemas"""

    @pytest.mark.parametrize("schema", [ESTIMATE_EXPORT_SCHEMA, SIM_REPORT_SCHEMA])
    def test_schemas_are_valid(self, schema):
        jsonschema.Draft202012Validator.check_schema(schema)

    def test_save_schema(self, tmp_path):
        paths = save_schema(str(tmp_path / "schemas"))
        assert len(paths) == 2
        for path in paths:
            document = json.loads(path.read_text(encoding="utf-8"))
            assert document["$schema"].startswith("https://json-schema.org/")

    def test_export_rejects_nan_text(self):
        document = {
            "meta": {"alpha": 0.05, "convention": "paper", "clamp": False, "checksum": "0" * 64,
                     "total": 1, "pre_first_censored": 0, "version": "1"},
            "points": [{"t": 1.0, "n": 1, "d": 1, "c": 0, "s": 0.0,
                        "g": "NaN", "r": None, "ci_lo": None, "ci_hi": None}],
        }
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(document, ESTIMATE_EXPORT_SCHEMA)
