"""
Step-by-step NOON-state construction.

The register never needs the full atom strings: after every step the state
has the form amp_l |x_L>|n,0> + amp_r |x_R>|0,n> with the ancilla in level
x = f or g, so it is stored as the round count, two branch amplitudes and the
ancilla level. The sequence is

    init -> (adiabatic round -> reset pulse) x (n-1) -> adiabatic round -> hadamard -> measure

and each step checks the one before it. Reset and Hadamard pulses are perfect
instantaneous rotations; detection is ideal.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from threading import Lock
from typing import Any, Dict, List, Optional

import numpy as np

from dynamics.evolve import DEFAULT_DT, Trajectory, evolve, transfer_probability
from fidelity.fiber_loss import round_fidelity
from utils.errors import InvalidParametersError, PassageError, ProtocolOrderError
from utils.models import BasisLabel, ProtocolStepDict, RegisterSnapshotDict, StateVector, SystemParams

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
MODES = ("analytic", "simulated")


class AncillaLevel(Enum):
    F = "f"
    G = "g"


@dataclass(frozen=True)
class NoonRegister:
    """Symbolic protocol state.

    Attributes:
        n: completed adiabatic rounds
        amp_l: amplitude of the |x_L>|n,0> branch
        amp_r: amplitude of the |x_R>|0,n> branch
        ancilla_level: F when ready for a round, G after one
        est_fidelity: running product of per-round fidelities
        hadamard_applied: amplitudes are in the rotated ancilla basis
    """

    n: int
    amp_l: complex
    amp_r: complex
    ancilla_level: AncillaLevel
    est_fidelity: float = 1.0
    hadamard_applied: bool = False

    def __post_init__(self):
        norm2 = abs(self.amp_l) ** 2 + abs(self.amp_r) ** 2
        if abs(norm2 - 1.0) > NORM_TOLERANCE:
            raise InvalidParametersError(f"branch amplitudes must be normalized, got |a|^2 = {norm2}")
        if self.n < 0:
            raise InvalidParametersError(f"round count must be >= 0, got {self.n}")

    def snapshot(self) -> RegisterSnapshotDict:
        return {
            "n": self.n,
            "amp_l": [float(np.real(self.amp_l)), float(np.imag(self.amp_l))],
            "amp_r": [float(np.real(self.amp_r)), float(np.imag(self.amp_r))],
            "ancilla_level": self.ancilla_level.value,
            "hadamard_applied": self.hadamard_applied,
            "est_fidelity": self.est_fidelity,
        }


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of detecting the ancilla after the Hadamard.

    detected is 'g_L' or 'g_R'; g_L leaves NOON+ and g_R leaves NOON-.
    amp_l and amp_r are the branch amplitudes of the post-measurement state.
    """

    detected: str
    resulting_state: str
    n: int
    probability: float
    amp_l: complex
    amp_r: complex


def init_register() -> NoonRegister:
    """Ancilla in (|f_L> + |f_R>)/sqrt(2), no atoms transferred yet."""
    return NoonRegister(0, 1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0), AncillaLevel.F)


class RoundEvaluator:
    """Per-round fidelity factors for one parameter set.

    Rounds are identical, so the analytic fidelity and, in simulated mode, the
    single trajectory from (PSI1 + PSI6)/sqrt(2) are computed once and shared.
    """

    def __init__(self, p: SystemParams, mode: str = "analytic", dt: float = DEFAULT_DT):
        if mode not in MODES:
            raise InvalidParametersError(f"mode must be one of {MODES}, got {mode!r}")
        self.params = p
        self.mode = mode
        self.dt = dt
        self._fidelity: Optional[float] = None
        self._trajectory: Optional[Trajectory] = None
        self._lock = Lock()

    @property
    def round_fidelity(self) -> float:
        with self._lock:
            if self._fidelity is None:
                self._fidelity = round_fidelity(self.params)
            return self._fidelity

    @property
    def trajectory(self) -> Optional[Trajectory]:
        if self.mode != "simulated":
            return None
        with self._lock:
            if self._trajectory is None:
                psi0 = StateVector.superposition(BasisLabel.PSI1, BasisLabel.PSI6)
                self._trajectory = evolve(psi0, self.params, dt=self.dt)
            return self._trajectory

    @property
    def transfer_probability(self) -> Optional[float]:
        traj = self.trajectory
        return transfer_probability(traj) if traj is not None else None

    def factor(self) -> float:
        """Multiplier applied to est_fidelity by one round."""
        transfer = self.transfer_probability
        return self.round_fidelity * (transfer if transfer is not None else 1.0)


def adiabatic_round(
    reg: NoonRegister,
    p: SystemParams,
    mode: str = "analytic",
    evaluator: Optional[RoundEvaluator] = None,
) -> NoonRegister:
    """Transfer one atom pair: |f_x> -> |g_x> with the x-side atom excited.

    Branch amplitudes are untouched; est_fidelity picks up the round factor.
    """
    if reg.ancilla_level is not AncillaLevel.F or reg.hadamard_applied:
        raise ProtocolOrderError("adiabatic round needs the ancilla in f before the Hadamard")
    if evaluator is None:
        evaluator = RoundEvaluator(p, mode)
    elif evaluator.params != p or evaluator.mode != mode:
        raise InvalidParametersError("evaluator was built for different parameters or mode")
    return replace(
        reg,
        n=reg.n + 1,
        ancilla_level=AncillaLevel.G,
        est_fidelity=reg.est_fidelity * evaluator.factor(),
    )


def reset_pulse(reg: NoonRegister) -> NoonRegister:
    """Pi/2 pulse returning the ancilla from g to f on both branches."""
    if reg.ancilla_level is not AncillaLevel.G or reg.hadamard_applied:
        raise ProtocolOrderError("reset pulse needs the ancilla in g before the Hadamard")
    return replace(reg, ancilla_level=AncillaLevel.F)


def hadamard(reg: NoonRegister) -> NoonRegister:
    """Hadamard on the ancilla g_L/g_R pair; applying it twice undoes it."""
    if reg.ancilla_level is not AncillaLevel.G:
        raise ProtocolOrderError("hadamard needs the ancilla in g")
    root2 = np.sqrt(2.0)
    return replace(
        reg,
        amp_l=(reg.amp_l + reg.amp_r) / root2,
        amp_r=(reg.amp_l - reg.amp_r) / root2,
        hadamard_applied=not reg.hadamard_applied,
    )


def measurement_uniform(seed: int) -> float:
    """Deterministic uniform draw in [0, 1) from a PCG64 generator seeded with seed."""
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise InvalidParametersError(f"seed must be a non-negative integer, got {seed}")
    return float(np.random.default_rng(int(seed)).random())


def measure(reg: NoonRegister, seed: int) -> MeasurementOutcome:
    """Detect the ancilla in g_L or g_R.

    The register holds the rotated amplitudes h_l, h_r; the branch amplitudes
    before the rotation are a_l = (h_l + h_r)/sqrt(2), a_r = (h_l - h_r)/sqrt(2).
    Expanding the Hadamard over the entangled branches leaves
    |g_L>(a_l|n,0> + a_r|0,n>)/sqrt(2) + |g_R>(a_l|n,0> - a_r|0,n>)/sqrt(2),
    so each outcome has weight (|a_l|^2 + |a_r|^2)/2 and both give a NOON state.
    """
    if not reg.hadamard_applied or reg.ancilla_level is not AncillaLevel.G:
        raise ProtocolOrderError("measure needs the Hadamard first")
    root2 = np.sqrt(2.0)
    a_l = (reg.amp_l + reg.amp_r) / root2
    a_r = (reg.amp_l - reg.amp_r) / root2
    p_left = 0.5 * (abs(a_l) ** 2 + abs(a_r) ** 2)

    if measurement_uniform(seed) < p_left:
        outcome = MeasurementOutcome("g_L", "NOON+", reg.n, p_left, a_l, a_r)
    else:
        outcome = MeasurementOutcome("g_R", "NOON-", reg.n, 1.0 - p_left, a_l, -a_r)
    logger.debug(f"Measured {outcome.detected} (seed={seed}) -> {outcome.resulting_state}, n={reg.n}")
    return outcome


# ==================== FULL RUN ====================


@dataclass
class ProtocolResult:
    """Outcome, fidelity estimate and ordered step log of one run."""

    outcome: MeasurementOutcome
    est_fidelity: float
    transcript: List[ProtocolStepDict] = field(default_factory=list)
    trajectory: Optional[Trajectory] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "outcome": {
                "detected": self.outcome.detected,
                "resulting_state": self.outcome.resulting_state,
                "n": self.outcome.n,
                "probability": self.outcome.probability,
            },
            "est_fidelity": self.est_fidelity,
            "steps": self.transcript,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_protocol(
    n: int,
    p: SystemParams,
    seed: int = 0,
    mode: str = "analytic",
    dt: float = DEFAULT_DT,
) -> ProtocolResult:
    """Build an n-atom NOON state and measure it.

    Args:
        n: atoms per branch, n >= 1
        p: system parameters shared by all rounds
        seed: measurement seed
        mode: 'analytic' (perturbative round fidelity) or 'simulated'
              (also multiplies in the integrated transfer probability)
        dt: integrator step for simulated mode

    Returns:
        ProtocolResult with a transcript of 2n + 2 steps

    Raises:
        PassageError: any failing step, with step_index set
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParametersError(f"n must be a positive integer, got {n}")
    evaluator = RoundEvaluator(p, mode, dt)
    transcript: List[ProtocolStepDict] = []
    logger.info(f"Running protocol: n={n}, mode={mode}, seed={seed}")

    def record(action: str, reg: NoonRegister, **extra: Any) -> None:
        entry: ProtocolStepDict = {"step": len(transcript), "action": action, "register": reg.snapshot()}
        entry.update(extra)
        transcript.append(entry)

    step = 0
    try:
        reg = init_register()
        record("init", reg)
        for k in range(int(n)):
            step = len(transcript)
            reg = adiabatic_round(reg, p, mode, evaluator)
            record("round", reg, round_fidelity=evaluator.round_fidelity,
                   transfer_probability=evaluator.transfer_probability)
            if k < n - 1:
                step = len(transcript)
                reg = reset_pulse(reg)
                record("reset", reg)
        step = len(transcript)
        reg = hadamard(reg)
        record("hadamard", reg)
        step = len(transcript)
        outcome = measure(reg, seed)
        record("measure", reg, detected=outcome.detected, resulting_state=outcome.resulting_state)
    except PassageError as exc:
        exc.step_index = step
        logger.error(f"Protocol failed at step {step}: {exc}")
        raise

    return ProtocolResult(outcome, reg.est_fidelity, transcript, evaluator.trajectory)
