"""
Defines the canonical run options shared by the CLI and the library
entry points so downstream modules can rely on a strict schema.
"""
from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError

from config import synth_config
from src.errors import ConfigError


class EncodingMode(str, Enum):
    NAIVE   = "naive"
    BINARY  = "binary"
    MINTERM = "minterm"


class GuardMode(str, Enum):
    PAST    = "past"       # Y^g TRUE
    COUNTER = "counter"    # one-hot step counter, past-free


class AtomGuard(str, Enum):
    LOOKBACK = "lookback"  # every atom false for t < lookback
    LAG      = "lag"       # atom false for t < its own largest lag


def _default_arity_caps() -> dict[str, int]:
    return {
        "eq": synth_config.EQ_ARITY_CAP,
        "dlo": synth_config.DLO_ARITY_CAP,
        "aba": synth_config.ABA_ARITY_CAP,
    }


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, use_enum_values=False)

    mode: EncodingMode = EncodingMode(synth_config.DEFAULT_MODE)
    cap: PositiveInt = synth_config.DEFAULT_BOUND_CAP
    guard: GuardMode = GuardMode(synth_config.DEFAULT_GUARD)
    atom_guard: AtomGuard = AtomGuard(synth_config.DEFAULT_ATOM_GUARD)
    seed: int = synth_config.DEFAULT_SEED
    loop: bool = False
    output: Optional[Path] = None
    verbosity: int = Field(default=0, ge=0)
    arity_caps: dict[str, PositiveInt] = Field(default_factory=_default_arity_caps)
    binary_subencoding: bool = False
    steps: Optional[PositiveInt] = None


def make_config(**options) -> RunConfig:
    """
    Build a RunConfig, dropping options left as None so defaults apply.

    Raises:
        ConfigError: If any option fails validation
    """
    given = {k: v for k, v in options.items() if v is not None}
    try:
        return RunConfig(**given)
    except ValidationError as exc:
        raise ConfigError(f"invalid run configuration: {exc.errors()[0]['msg']}") from exc
