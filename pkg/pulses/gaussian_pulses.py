"""
Gaussian laser pulses and effective Raman Rabi frequencies.

Omega_xi(t) = Omega0 * exp[-(t - T/2 - t_xi)^2 / (2 tau^2)] for xi in {L, R, 1};
the effective two-photon couplings are Omega_xi * g / Delta. Pulses are never
truncated outside [0, T].
"""

import logging
from enum import Enum
from typing import Union

import numpy as np
import pandas as pd
from scipy.special import erf

from utils.errors import DegeneratePulseError, InvalidParametersError
from utils.models import BoundaryRatiosDict, SystemParams

logger = logging.getLogger(__name__)

TimeLike = Union[float, np.ndarray]


class PulseId(Enum):
    """Classical fields driving the left atom, the right atom and the ancilla."""

    L = "L"
    R = "R"
    ONE = "1"

    def offset(self, p: SystemParams) -> float:
        return {PulseId.L: p.t_l, PulseId.R: p.t_r, PulseId.ONE: p.t_1}[self]

    def center(self, p: SystemParams) -> float:
        return p.total_time / 2.0 + self.offset(p)


def gaussian_pulse(t: TimeLike, xi: PulseId, p: SystemParams) -> TimeLike:
    """Rabi frequency Omega_xi(t); accepts scalars or arrays."""
    shifted = np.asarray(t, dtype=float) - xi.center(p)
    value = p.omega0 * np.exp(-(shifted ** 2) / (2.0 * p.tau_pulse ** 2))
    return float(value) if np.ndim(value) == 0 else value


def effective_rabi(t: TimeLike, xi: PulseId, p: SystemParams) -> TimeLike:
    """Effective Raman coupling Omega_xi(t) * g / Delta."""
    if not p.delta > 0.0:
        raise InvalidParametersError(f"detuning must be positive, got {p.delta}")
    return gaussian_pulse(t, xi, p) * (p.g / p.delta)


def pulse_area(xi: PulseId, p: SystemParams) -> float:
    """Closed-form integral of the effective Rabi frequency over [0, T]."""
    width = np.sqrt(2.0) * p.tau_pulse
    center = xi.center(p)
    peak = p.omega0 * p.g / p.delta
    span = erf((p.total_time - center) / width) + erf(center / width)
    return float(peak * p.tau_pulse * np.sqrt(np.pi / 2.0) * span)


def boundary_ratio_check(p: SystemParams) -> BoundaryRatiosDict:
    """Counterpart-pulse ratios at the window endpoints.

    Returns:
        ratio_start: max(Omega_1e/Omega_Le, Omega_1e/Omega_Re) at t = 0
        ratio_end: max(Omega_Le/Omega_1e, Omega_Re/Omega_1e) at t = T

    Both must be small for the dark state to start on PSI1/PSI6 and end on
    PSI5/PSI10. The check reports, it does not enforce.
    """
    start = {xi: effective_rabi(0.0, xi, p) for xi in PulseId}
    end = {xi: effective_rabi(p.total_time, xi, p) for xi in PulseId}

    for label, values, denominators in (
        ("t=0", start, (PulseId.L, PulseId.R)),
        ("t=T", end, (PulseId.ONE,)),
    ):
        for xi in denominators:
            if values[xi] == 0.0:
                raise DegeneratePulseError(f"Omega_{xi.value} vanishes at {label}")

    ratios: BoundaryRatiosDict = {
        "ratio_start": max(start[PulseId.ONE] / start[PulseId.L], start[PulseId.ONE] / start[PulseId.R]),
        "ratio_end": max(end[PulseId.L] / end[PulseId.ONE], end[PulseId.R] / end[PulseId.ONE]),
    }
    logger.debug(f"Boundary ratios: {ratios}")
    return ratios


def pulse_table(p: SystemParams, points: int = 1001) -> pd.DataFrame:
    """Normalized pulse shapes Omega_xi(t)/Omega0 sampled over [0, T].

    Columns: t, omega_L_norm, omega_R_norm, omega_1_norm.
    """
    if points < 2:
        raise InvalidParametersError(f"need at least 2 sample points, got {points}")
    times = np.linspace(0.0, p.total_time, points)
    unit = p.replace(omega0=1.0)
    return pd.DataFrame({
        "t": times,
        "omega_L_norm": gaussian_pulse(times, PulseId.L, unit),
        "omega_R_norm": gaussian_pulse(times, PulseId.R, unit),
        "omega_1_norm": gaussian_pulse(times, PulseId.ONE, unit),
    })
