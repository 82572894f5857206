"""
Data models for the NOON-passage toolkit.

This module defines the physical parameter set, the ten-state single-excitation
basis, the immutable state-vector container shared by every other module, and
the TypedDict records used for JSON and CSV output.

All rates are in units of the atom-cavity coupling g and all times in 1/g.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple, TypedDict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from utils.errors import InvalidParametersError


BASIS_SIZE = 10

# Photon modes in the order they appear in occupation tuples.
MODE_NAMES: Tuple[str, ...] = ("a1", "a2l", "a2r", "a3", "b_a", "b_b")


# ==================== PARAMETERS ====================


class SystemParams(BaseModel):
    """Physical rates, detuning and pulse schedule of one adiabatic round.

    The default instance is the standard weak-drive schedule:
    Omega0 = 1.5g, T = 100/g, tau = 12/g, t_L = t_R = -15/g, t_1 = 15/g,
    Delta = 15g, eta = 0.6g, no losses.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    g: float = Field(1.0, ge=0.0, description="atom-cavity coupling (unit rate)")
    delta: float = Field(15.0, gt=0.0, description="common detuning")
    eta_a: float = Field(0.6, ge=0.0, description="fiber A coupling")
    eta_b: float = Field(0.6, ge=0.0, description="fiber B coupling")
    gamma_f: float = Field(0.0, ge=0.0, description="fiber decay rate")
    kappa_c: float = Field(0.0, ge=0.0, description="cavity decay rate")
    omega0: float = Field(1.5, ge=0.0, description="pulse amplitude")
    total_time: float = Field(100.0, gt=0.0, description="adiabatic window T")
    tau_pulse: float = Field(12.0, gt=0.0, description="Gaussian waist")
    t_l: float = Field(-15.0, description="turn-on offset of Omega_L")
    t_r: float = Field(-15.0, description="turn-on offset of Omega_R")
    t_1: float = Field(15.0, description="turn-on offset of Omega_1")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemParams":
        """Build from a flat mapping; missing fields take the defaults."""
        return cls.model_validate(dict(data))

    @classmethod
    def from_json(cls, text: str) -> "SystemParams":
        return cls.model_validate_json(text)

    def to_dict(self) -> Dict[str, float]:
        return self.model_dump()

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2)

    def replace(self, **changes: float) -> "SystemParams":
        """Return a validated copy with some fields changed."""
        return type(self).model_validate({**self.model_dump(), **changes})

    def with_eta(self, eta: float) -> "SystemParams":
        """Set both fiber couplings to the same value."""
        return self.replace(eta_a=eta, eta_b=eta)

    @classmethod
    def adiabatic_regime(cls, **overrides: float) -> "SystemParams":
        """Strong-drive parameter set on which the full dynamics follows the dark state.

        Peak effective Rabi frequency 5g and eta = 4g with the default pulse
        schedule; transfer reaches unity and fiber loss stays perturbative.
        """
        base = {"omega0": 15.0, "delta": 3.0, "eta_a": 4.0, "eta_b": 4.0}
        base.update(overrides)
        return cls.model_validate(base)


# ==================== BASIS ====================


@dataclass(frozen=True)
class BasisState:
    """Physical content of one single-excitation basis vector."""

    ancilla: str  # 'fL', 'fR', 'gL' or 'gR'
    left_atom: str  # 's' or 'k'
    right_atom: str
    photons: Tuple[int, int, int, int, int, int]  # a1, a2l, a2r, a3, b_a, b_b
    ket: str

    @property
    def excitation_number(self) -> int:
        ancilla = 1 if self.ancilla.startswith("f") else 0
        atoms = int(self.left_atom == "k") + int(self.right_atom == "k")
        return ancilla + atoms + sum(self.photons)


class BasisLabel(Enum):
    """The ten basis vectors of the left (PSI1..PSI5) and right (PSI6..PSI10) chains."""

    PSI1 = 0
    PSI2 = 1
    PSI3 = 2
    PSI4 = 3
    PSI5 = 4
    PSI6 = 5
    PSI7 = 6
    PSI8 = 7
    PSI9 = 8
    PSI10 = 9

    @property
    def index(self) -> int:
        return self.value

    @property
    def state(self) -> BasisState:
        return _BASIS_STATES[self]

    @property
    def chain(self) -> str:
        return "left" if self.value < 5 else "right"


_BASIS_STATES: Dict[BasisLabel, BasisState] = {
    BasisLabel.PSI1: BasisState("fL", "s", "s", (0, 0, 0, 0, 0, 0), "|fL⟩|s⟩L|s⟩R|000⟩c|00⟩f"),
    BasisLabel.PSI2: BasisState("gL", "s", "s", (0, 1, 0, 0, 0, 0), "|gL⟩|s⟩L|s⟩R|01l0⟩c|00⟩f"),
    BasisLabel.PSI3: BasisState("gL", "s", "s", (0, 0, 0, 0, 1, 0), "|gL⟩|s⟩L|s⟩R|000⟩c|1l0⟩f"),
    BasisLabel.PSI4: BasisState("gL", "s", "s", (1, 0, 0, 0, 0, 0), "|gL⟩|s⟩L|s⟩R|1l00⟩c|00⟩f"),
    BasisLabel.PSI5: BasisState("gL", "k", "s", (0, 0, 0, 0, 0, 0), "|gL⟩|k⟩L|s⟩R|000⟩c|00⟩f"),
    BasisLabel.PSI6: BasisState("fR", "s", "s", (0, 0, 0, 0, 0, 0), "|fR⟩|s⟩L|s⟩R|000⟩c|00⟩f"),
    BasisLabel.PSI7: BasisState("gR", "s", "s", (0, 0, 1, 0, 0, 0), "|gR⟩|s⟩L|s⟩R|01r0⟩c|00⟩f"),
    BasisLabel.PSI8: BasisState("gR", "s", "s", (0, 0, 0, 0, 0, 1), "|gR⟩|s⟩L|s⟩R|000⟩c|01r⟩f"),
    BasisLabel.PSI9: BasisState("gR", "s", "s", (0, 0, 0, 1, 0, 0), "|gR⟩|s⟩L|s⟩R|001r⟩c|00⟩f"),
    BasisLabel.PSI10: BasisState("gR", "s", "k", (0, 0, 0, 0, 0, 0), "|gR⟩|s⟩L|k⟩R|000⟩c|00⟩f"),
}

LEFT_CHAIN: Tuple[BasisLabel, ...] = tuple(label for label in BasisLabel if label.chain == "left")
RIGHT_CHAIN: Tuple[BasisLabel, ...] = tuple(label for label in BasisLabel if label.chain == "right")


def index_of(label: BasisLabel) -> int:
    """Position of a label in state vectors and matrices."""
    return label.value


def label_of(index: int) -> BasisLabel:
    """Inverse of index_of."""
    if not 0 <= index < BASIS_SIZE:
        raise InvalidParametersError(f"basis index {index} outside [0, {BASIS_SIZE})")
    return BasisLabel(index)


def describe(label: BasisLabel) -> str:
    """Ket string of a basis label, e.g. '|fL⟩|s⟩L|s⟩R|000⟩c|00⟩f'."""
    return label.state.ket


def excitation_number(label: BasisLabel) -> int:
    return label.state.excitation_number


# ==================== STATE VECTOR ====================


@dataclass(frozen=True, eq=False)
class StateVector:
    """Ten complex amplitudes over BasisLabel; the array is read-only."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape != (BASIS_SIZE,):
            raise InvalidParametersError(
                f"state vector needs {BASIS_SIZE} amplitudes, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, label: BasisLabel) -> "StateVector":
        amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
        amps[label.index] = 1.0
        return cls(amps)

    @classmethod
    def superposition(cls, *labels: BasisLabel) -> "StateVector":
        """Equal-weight normalized superposition of distinct labels."""
        if not labels or len(set(labels)) != len(labels):
            raise InvalidParametersError("superposition needs distinct labels")
        amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
        for label in labels:
            amps[label.index] = 1.0 / np.sqrt(len(labels))
        return cls(amps)

    @classmethod
    def from_mapping(cls, coefficients: Mapping[BasisLabel, complex]) -> "StateVector":
        amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
        for label, value in coefficients.items():
            amps[label.index] = value
        return cls(amps)

    def __getitem__(self, label: BasisLabel) -> complex:
        return complex(self.amps[label.index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return bool(np.array_equal(self.amps, other.amps))

    def __hash__(self) -> int:
        return hash(self.amps.tobytes())

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalized(self) -> "StateVector":
        norm = np.sqrt(self.norm2())
        if norm == 0.0:
            raise InvalidParametersError("cannot normalize the zero vector")
        return StateVector(self.amps / norm)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.overlap(other)) ** 2

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


# ==================== RECORDS ====================


class BoundaryRatiosDict(TypedDict):
    """Pulse-ratio check at the window endpoints."""

    ratio_start: float
    ratio_end: float


class RegisterSnapshotDict(TypedDict, total=False):
    """JSON view of a NoonRegister."""

    n: int
    amp_l: List[float]  # [re, im]
    amp_r: List[float]
    ancilla_level: str  # 'f' or 'g'
    hadamard_applied: bool
    est_fidelity: float


class ProtocolStepDict(TypedDict, total=False):
    """One transcript entry of a protocol run."""

    step: int
    action: str  # init, round, reset, hadamard, measure
    register: RegisterSnapshotDict
    round_fidelity: float
    transfer_probability: Optional[float]
    detected: str
    resulting_state: str
