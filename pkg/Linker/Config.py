"""Search configuration, config-file loading and logging setup."""

import json
import logging
import os
from pathlib import Path
from typing import Dict, Literal, Optional, Union

import pydantic
from pydantic import BaseModel, ConfigDict

from .Errors import ConfigError
from .Index import Field

logger = logging.getLogger(__name__)

CONFIG_SHEBANG = "#!NEWSLINK-CONFIG"
ENV_PREFIX = "NEWSLINK_"

Kind = Literal["au", "jo", "af", "ti", "co"]

# Subquery kinds in the fixed order used for every weighted sum.
KINDS = ("au", "jo", "af", "ti", "co")

KIND_FIELDS: Dict[str, Field] = {
    "au": Field.AUTHORS,
    "jo": Field.JOURNAL,
    "af": Field.AFFILIATIONS,
    "ti": Field.TITLE,
    "co": Field.CONTENT,
}

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75

# Grid-searched optimum: Au/1, Jo/1.5, Af/0.3, Ti/0.3, Co/0.2
DEFAULT_WEIGHTS: Dict[str, float] = {"au": 1.0, "jo": 1.5, "af": 0.3, "ti": 0.3, "co": 0.2}
UNIT_WEIGHTS: Dict[str, float] = {kind: 1.0 for kind in KINDS}


def default_b_per_field() -> Dict[Field, float]:
    b = {field: DEFAULT_B for field in Field}
    b[Field.AUTHORS] = 0.0
    return b


class DecayConfig(BaseModel):
    """Exponential date decay, flat inside +/- offset_days."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    offset_days: int = pydantic.Field(7, ge=0)
    half_life_days: int = pydantic.Field(180, gt=0)
    decay_at_half_life: float = pydantic.Field(0.5, gt=0.0, lt=1.0)
    enabled: bool = True


class SearchConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    k1: float = pydantic.Field(DEFAULT_K1, ge=0.0)
    b_per_field: Dict[Field, float] = pydantic.Field(default_factory=default_b_per_field)
    weights: Dict[Kind, float] = pydantic.Field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    decay: DecayConfig = pydantic.Field(default_factory=DecayConfig)
    min_score_threshold: float = pydantic.Field(0.0, ge=0.0)
    top_k: int = pydantic.Field(10, ge=1)

    @pydantic.field_validator("b_per_field", mode="before")
    @classmethod
    def _merge_b(cls, value):
        if value is None:
            return default_b_per_field()
        merged = {field.value: b for field, b in default_b_per_field().items()}
        merged.update({getattr(key, "value", key): b for key, b in dict(value).items()})
        return merged

    @pydantic.field_validator("b_per_field")
    @classmethod
    def _check_b(cls, value: Dict[Field, float]) -> Dict[Field, float]:
        for field, b in value.items():
            if not 0.0 <= b <= 1.0:
                raise ValueError(f"b for {field.value} must be within [0, 1], got {b}")
        return value

    @pydantic.field_validator("weights", mode="before")
    @classmethod
    def _merge_weights(cls, value):
        if value is None:
            return dict(DEFAULT_WEIGHTS)
        merged = dict(DEFAULT_WEIGHTS)
        merged.update(dict(value))
        return merged

    @pydantic.field_validator("weights")
    @classmethod
    def _check_weights(cls, value: Dict[str, float]) -> Dict[str, float]:
        for kind, weight in value.items():
            if weight < 0:
                raise ValueError(f"weight for {kind} must be nonnegative, got {weight}")
        return value

    def b_for(self, field: Field) -> float:
        return self.b_per_field.get(field, DEFAULT_B)


def load_search_config(path: Union[str, Path, None]) -> SearchConfig:
    """Load a SearchConfig from a JSON file; None gives the defaults.

    The file may start with the ``#!NEWSLINK-CONFIG`` header line. Every key
    is optional; unknown keys are rejected.
    """
    if path is None:
        return SearchConfig()
    with open(path, "r", encoding="utf-8") as f:
        content = f.read()
    lines = content.splitlines()
    if lines and lines[0].strip() == CONFIG_SHEBANG:
        content = "\n".join(lines[1:])
    try:
        data = json.loads(content) if content.strip() else {}
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in config '{path}': {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config '{path}' must contain a JSON object")
    try:
        return SearchConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise ConfigError(f"invalid config '{path}': {e}") from e


def env_default(name: str, default: Optional[str] = None) -> Optional[str]:
    """Environment override for a CLI flag, e.g. ``top-k`` -> ``NEWSLINK_TOP_K``."""
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def configure_logging(level: Optional[str] = None) -> None:
    level_name = (level or env_default("log-level", "INFO") or "INFO").upper()
    numeric = getattr(logging, level_name, None)
    if not isinstance(numeric, int):
        raise ConfigError(f"unknown log level: {level_name}")
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s [%(levelname)8s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
