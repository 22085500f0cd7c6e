"""
Settings: YAML file, environment override and built-in defaults
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from greenvar.errors import InvalidConfig
from greenvar.models.schema import CensorSpec, Convention

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("config/greenvar.yaml")
OUTPUT_DIR_ENV = "GREENVAR_OUTPUT_DIR"


class EstimateSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(0.05, gt=0, lt=1)
    convention: Convention = "paper"
    clamp: bool = False
    format: Literal["csv", "json"] = "csv"


class SimulateSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(500, ge=2)
    reps: int = Field(4000, ge=2)
    event_rate: float = Field(1.0, gt=0)
    censor: str = "uniform:3.0"
    seed: int = Field(42, ge=0, lt=2 ** 64)
    workers: int = Field(1, ge=1)

    @field_validator("censor")
    @classmethod
    def check_censor(cls, v: str) -> str:
        try:
            CensorSpec.parse(v)
        except ValidationError as e:
            raise ValueError(e.errors()[0]["msg"].removeprefix("Value error, ")) from None
        return v


class OutputSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: str = "output"


class Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    estimate: EstimateSettings = EstimateSettings()
    simulate: SimulateSettings = SimulateSettings()
    output: OutputSettings = OutputSettings()


def _read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        logger.warning(f"Could not load config from {path}: {e}; using defaults")
        return {}
    if not isinstance(data, dict):
        logger.warning(f"Config {path} is not a mapping; using defaults")
        return {}
    return data


def load_settings(path: Optional[Union[str, Path]] = None,
                  environ: Optional[Mapping[str, str]] = None) -> Settings:
    """Defaults, overlaid by the YAML file, overlaid by the environment"""
    config_path = Path(path) if path is not None else DEFAULT_CONFIG_PATH
    environ = os.environ if environ is None else environ

    data = _read_yaml(config_path)
    try:
        settings = Settings.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(part) for part in err["loc"]) or "config"
        raise InvalidConfig(field, err["msg"].removeprefix("Value error, ")) from e

    output_dir = environ.get(OUTPUT_DIR_ENV)
    if output_dir:
        logger.debug(f"{OUTPUT_DIR_ENV} overrides output.dir with {output_dir}")
        settings = settings.model_copy(update={"output": OutputSettings(dir=output_dir)})
    return settings
