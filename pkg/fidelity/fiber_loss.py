"""
Fiber-loss fidelity of one adiabatic round, n-round NOON fidelity and sweeps.

Photon leakage out of the fibers is treated perturbatively: the round
fidelity is one minus gamma_f/2 times the time-integrated fiber weight of the
two dark states,

    F = 1 - (gamma_f/2) * int_0^T [Omega_Le^2 Omega_1e^2 / K0^2 + Omega_Re^2 Omega_1e^2 / K1^2] dt,

integrated with composite Simpson quadrature.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import simpson

from pulses.gaussian_pulses import PulseId, effective_rabi
from utils.config import get_thread_limit
from utils.errors import InvalidParametersError, PassageError
from utils.models import SystemParams

logger = logging.getLogger(__name__)

QUADRATURE_NODES = 10001
UNDERFLOW_GUARD = 1e-300

RULES = ("compound", "linear")
SWEEP_VARIABLES = ("gamma_f", "eta", "n")
OVERLAY_VARIABLES = ("omega0", "gamma_f", "eta")


# ==================== ROUND FIDELITY ====================


def _chain_term(omega_atom: np.ndarray, omega_one: np.ndarray, eta: float) -> np.ndarray:
    atom2 = omega_atom ** 2
    one2 = omega_one ** 2
    k2 = atom2 * eta ** 2 + atom2 * one2 + one2 * eta ** 2
    safe = np.where(k2 < UNDERFLOW_GUARD, 1.0, k2)
    return np.where(k2 < UNDERFLOW_GUARD, 0.0, atom2 * one2 / safe)


def loss_integrand(t, p: SystemParams):
    """Fiber weight of both dark states at t; scalar or array."""
    times = np.asarray(t, dtype=float)
    omega_one = effective_rabi(times, PulseId.ONE, p)
    value = (_chain_term(effective_rabi(times, PulseId.L, p), omega_one, p.eta_a)
             + _chain_term(effective_rabi(times, PulseId.R, p), omega_one, p.eta_b))
    return float(value) if np.ndim(value) == 0 else value


def fiber_loss_integral(p: SystemParams, n_nodes: int = QUADRATURE_NODES) -> float:
    """Simpson integral of loss_integrand over [0, T] on n_nodes equal nodes."""
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise InvalidParametersError(f"Simpson quadrature needs an odd node count >= 3, got {n_nodes}")
    times = np.linspace(0.0, p.total_time, n_nodes)
    return float(simpson(loss_integrand(times, p), x=times))


def round_fidelity(p: SystemParams, n_nodes: int = QUADRATURE_NODES) -> float:
    """Fidelity of one adiabatic round under fiber loss.

    Raises:
        InvalidParametersError: if the perturbative value drops below zero
    """
    if p.gamma_f == 0.0:
        return 1.0
    fidelity = 1.0 - 0.5 * p.gamma_f * fiber_loss_integral(p, n_nodes)
    if fidelity < 0.0:
        raise InvalidParametersError(
            f"perturbative fidelity {fidelity:.4f} < 0; gamma_f={p.gamma_f} is outside its range of validity"
        )
    return fidelity


def noon_fidelity(p: SystemParams, n: int, rule: str = "compound") -> float:
    """Fidelity of an n-atom NOON state built from n identical rounds.

    Args:
        p: system parameters
        n: number of rounds (atoms per branch), n >= 1
        rule: 'compound' gives F_round^n, 'linear' gives 1 - n(1 - F_round)
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParametersError(f"n must be a positive integer, got {n}")
    if rule not in RULES:
        raise InvalidParametersError(f"rule must be one of {RULES}, got {rule!r}")
    single = round_fidelity(p)
    if rule == "compound":
        return single ** int(n)
    fidelity = 1.0 - int(n) * (1.0 - single)
    if fidelity < 0.0:
        raise InvalidParametersError(f"linear estimate {fidelity:.4f} < 0 for n={n}")
    return fidelity


# ==================== SWEEPS ====================


@dataclass
class SweepTable:
    """Fidelity curves of one sweep.

    frame has columns x, fidelity, overlay_value and error; a failed point
    keeps its row with fidelity NaN and the error message.
    """

    variable: str
    overlay_variable: Optional[str]
    frame: pd.DataFrame
    fixed: Dict[str, Any]
    rule: str = "compound"

    @property
    def grid(self) -> np.ndarray:
        return self.frame["x"].to_numpy()

    @property
    def fidelities(self) -> np.ndarray:
        return self.frame["fidelity"].to_numpy(dtype=float)

    @property
    def failures(self) -> pd.DataFrame:
        return self.frame[self.frame["error"] != ""]

    def curve(self, overlay_value: Optional[float] = None) -> pd.DataFrame:
        """Rows of one overlay, in grid order."""
        if self.overlay_variable is None:
            return self.frame
        return self.frame[np.isclose(self.frame["overlay_value"], overlay_value)]

    def to_csv(self, path: str) -> Tuple[Path, Path]:
        """Write the CSV and a <stem>.params.json sidecar of fixed parameters next to it.

        CSV columns: x, fidelity, then overlay_value when the sweep has
        overlays, then error when any point failed.
        """
        csv_path = Path(path)
        columns = ["x", "fidelity"]
        if self.overlay_variable is not None:
            columns.append("overlay_value")
        if not self.failures.empty:
            columns.append("error")
        self.frame[columns].to_csv(csv_path, index=False, float_format="%.12g")

        sidecar = csv_path.with_name(csv_path.stem + ".params.json")
        meta = {
            "variable": self.variable,
            "overlay_variable": self.overlay_variable,
            "rule": self.rule,
            "fixed": self.fixed,
            "points": int(len(self.frame)),
            "failures": int(len(self.failures)),
        }
        sidecar.write_text(json.dumps(meta, indent=2))
        return csv_path, sidecar


def _apply(p: SystemParams, name: str, value: float) -> SystemParams:
    if name == "eta":
        return p.with_eta(value)
    return p.replace(**{name: value})


def _validate_grid(variable: str, grid: Sequence[float]) -> None:
    if variable not in SWEEP_VARIABLES:
        raise InvalidParametersError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {variable!r}")
    if len(grid) == 0:
        raise InvalidParametersError("sweep grid is empty")
    values = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidParametersError("sweep grid contains non-finite values")
    if variable == "n" and (np.any(values < 1) or np.any(values != np.round(values))):
        raise InvalidParametersError("n grid must hold positive integers")
    if variable in ("gamma_f", "eta") and np.any(values < 0):
        raise InvalidParametersError(f"{variable} grid must be non-negative")


def _evaluate_point(task: Tuple[SystemParams, str, float, Optional[float], str]) -> Dict[str, Any]:
    base, variable, x, overlay_value, rule = task
    row: Dict[str, Any] = {"x": x, "fidelity": np.nan, "overlay_value": overlay_value, "error": ""}
    try:
        if variable == "n":
            row["fidelity"] = noon_fidelity(base, int(x), rule)
        else:
            row["fidelity"] = round_fidelity(_apply(base, variable, x))
    except (PassageError, ValueError) as exc:
        logger.warning(f"Sweep point {variable}={x} (overlay {overlay_value}) failed: {exc}")
        row["error"] = str(exc)
    return row


def sweep(
    p: SystemParams,
    variable: str,
    grid: Sequence[float],
    overlays: Sequence[float] = (),
    overlay_variable: Optional[str] = None,
    rule: str = "compound",
    max_workers: Optional[int] = None,
) -> SweepTable:
    """Evaluate fidelities over a grid, optionally for several overlay values.

    Args:
        p: fixed parameters
        variable: 'gamma_f', 'eta' (sets eta_A = eta_B) or 'n' (NOON fidelity)
        grid: values of the swept variable
        overlays: values of overlay_variable, one curve each
        overlay_variable: 'omega0', 'gamma_f' or 'eta'
        rule: compounding rule for 'n' sweeps
        max_workers: thread cap, defaults to NOON_PASSAGE_THREADS

    Returns:
        SweepTable with one row per (overlay, x), overlays outermost
    """
    _validate_grid(variable, grid)
    if rule not in RULES:
        raise InvalidParametersError(f"rule must be one of {RULES}, got {rule!r}")
    if overlays and overlay_variable not in OVERLAY_VARIABLES:
        raise InvalidParametersError(f"overlay variable must be one of {OVERLAY_VARIABLES}, got {overlay_variable!r}")
    if overlays and overlay_variable == variable:
        raise InvalidParametersError("overlay variable must differ from the swept variable")

    bases: List[Tuple[SystemParams, Optional[float]]] = (
        [(_apply(p, overlay_variable, float(o)), float(o)) for o in overlays] if overlays else [(p, None)]
    )
    tasks = [(base, variable, float(x), value, rule) for base, value in bases for x in grid]
    workers = max_workers or get_thread_limit()
    logger.info(f"Sweeping {variable} over {len(grid)} points x {len(bases)} curves on {workers} threads")

    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(_evaluate_point, tasks))

    frame = pd.DataFrame(rows, columns=["x", "fidelity", "overlay_value", "error"])
    return SweepTable(
        variable=variable,
        overlay_variable=overlay_variable if overlays else None,
        frame=frame,
        fixed=p.to_dict(),
        rule=rule,
    )


# ==================== SWEEP PRESETS ====================


@dataclass(frozen=True)
class SweepPreset:
    """A reference sweep setup: grid, overlay curves and fixed parameters."""

    name: str
    variable: str
    grid: Tuple[float, ...]
    overlay_variable: str
    overlays: Tuple[float, ...]
    fixed: Dict[str, float] = field(default_factory=dict)

    def params(self, base: Optional[SystemParams] = None) -> SystemParams:
        base = base or SystemParams()
        return base.replace(**self.fixed) if self.fixed else base

    def run(self, base: Optional[SystemParams] = None, rule: str = "compound",
            max_workers: Optional[int] = None) -> SweepTable:
        return sweep(self.params(base), self.variable, self.grid, self.overlays,
                     self.overlay_variable, rule=rule, max_workers=max_workers)


LOSS_SWEEP = SweepPreset(
    name="fiber-loss",
    variable="gamma_f",
    grid=tuple(np.round(np.linspace(0.0, 0.3, 31), 10)),
    overlay_variable="omega0",
    overlays=(0.75, 1.5, 2.25),
    fixed={"eta_a": 0.6, "eta_b": 0.6},
)

COUPLING_SWEEP = SweepPreset(
    name="fiber-coupling",
    variable="eta",
    grid=tuple(np.round(np.linspace(0.05, 1.5, 30), 10)),
    overlay_variable="gamma_f",
    overlays=(0.05, 0.1, 0.2),
    fixed={"omega0": 1.5},
)

NOON_SCALING = SweepPreset(
    name="noon-scaling",
    variable="n",
    grid=tuple(float(n) for n in range(1, 31)),
    overlay_variable="gamma_f",
    overlays=(0.05, 0.1, 0.2),
    fixed={"omega0": 1.5, "eta_a": 0.6, "eta_b": 0.6},
)

PRESETS = {preset.name: preset for preset in (LOSS_SWEEP, COUPLING_SWEEP, NOON_SCALING)}
