"""
Run configuration for the command-line front end.

A JSON config file holds SystemParams fields at top level next to run
options; command-line flags override both. Every field has a default, so an
empty file (or no file) resolves to the standard parameter set.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from utils.errors import InvalidParametersError
from utils.models import SystemParams

logger = logging.getLogger(__name__)

THREADS_ENV = "NOON_PASSAGE_THREADS"
DEFAULT_THREAD_CAP = 4


class RunConfig(BaseModel):
    """Physical parameters plus the options of one CLI command."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    params: SystemParams = Field(default_factory=SystemParams)
    dt: float = Field(1e-3, gt=0.0)
    sample_every: int = Field(100, ge=1)
    seed: int = Field(0, ge=0)
    mode: Literal["analytic", "simulated"] = "analytic"
    n: Optional[int] = Field(None, ge=1)
    grid: Optional[Union[str, List[float]]] = None
    overlays: Optional[List[float]] = None
    decay: bool = False
    stark: bool = False
    points: Optional[int] = Field(None, ge=2)
    variable: Optional[Literal["gamma_f", "eta", "n"]] = None
    overlay_variable: Optional[Literal["omega0", "gamma_f", "eta"]] = None
    out: Optional[str] = None
    rule: Literal["compound", "linear"] = "compound"

    def grid_values(self) -> Optional[np.ndarray]:
        if self.grid is None:
            return None
        if isinstance(self.grid, str):
            return parse_grid(self.grid)
        return np.asarray(self.grid, dtype=float)


def parse_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:steps' into an inclusive linspace."""
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParametersError(f"grid must look like start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InvalidParametersError(f"cannot parse grid {text!r}: {exc}") from exc
    if steps < 1:
        raise InvalidParametersError(f"grid needs at least one step, got {steps}")
    return np.linspace(start, stop, steps)


def _split(data: Mapping[str, Any]) -> Dict[str, Any]:
    """Sort a flat mapping into SystemParams fields and run options.

    'eta' sets both fibers; an explicit eta_a or eta_b in the same mapping wins.
    """
    params: Dict[str, Any] = {}
    options: Dict[str, Any] = {}
    if "eta" in data:
        params["eta_a"] = data["eta"]
        params["eta_b"] = data["eta"]
    for key, value in data.items():
        if key == "eta":
            continue
        if key in SystemParams.model_fields:
            params[key] = value
        else:
            # unknown keys land here and are rejected by RunConfig
            options[key] = value
    return {"params": params, **options}


def load_run_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Merge a JSON config file with command-line overrides.

    Args:
        path: optional JSON file with a flat object of parameters and options
        overrides: flag values; None entries are ignored

    Returns:
        Validated RunConfig

    Raises:
        OSError: the config file cannot be read
        ValueError: malformed JSON or invalid values
    """
    merged: Dict[str, Any] = {}
    if path:
        data = json.loads(Path(path).read_text())
        if not isinstance(data, dict):
            raise InvalidParametersError(f"config file {path} must hold a JSON object")
        logger.debug(f"Loaded config file {path} with keys {sorted(data)}")
        merged.update(_split(data))

    flags = _split({k: v for k, v in (overrides or {}).items() if v is not None})
    params = {**merged.pop("params", {}), **flags.pop("params")}
    merged.update(flags)
    return RunConfig.model_validate({**merged, "params": SystemParams.from_dict(params)})


def get_thread_limit() -> int:
    """Worker-thread cap for sweeps, from NOON_PASSAGE_THREADS."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return min(DEFAULT_THREAD_CAP, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidParametersError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise InvalidParametersError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value
