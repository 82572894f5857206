"""
Time-dependent Hamiltonian on the ten-state single-excitation subspace.

H(t) couples each chain as
    PSI1 -Omega_1e- PSI2 -eta_A- PSI3 -eta_A- PSI4 -Omega_Le- PSI5
    PSI6 -Omega_1e- PSI7 -eta_B- PSI8 -eta_B- PSI9 -Omega_Re- PSI10
with optional Stark-shift diagonals and optional -i/2 loss terms on the
fiber- and cavity-populated labels. The two chains never couple.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from pulses.gaussian_pulses import PulseId, effective_rabi, gaussian_pulse
from utils.errors import InvalidParametersError
from utils.models import BASIS_SIZE, BasisLabel, SystemParams

logger = logging.getLogger(__name__)

B = BasisLabel

# (upper, lower, source) for every off-diagonal coupling; source is a PulseId or a fiber name.
COUPLINGS: Tuple[Tuple[BasisLabel, BasisLabel, object], ...] = (
    (B.PSI1, B.PSI2, PulseId.ONE),
    (B.PSI2, B.PSI3, "eta_a"),
    (B.PSI3, B.PSI4, "eta_a"),
    (B.PSI4, B.PSI5, PulseId.L),
    (B.PSI6, B.PSI7, PulseId.ONE),
    (B.PSI7, B.PSI8, "eta_b"),
    (B.PSI8, B.PSI9, "eta_b"),
    (B.PSI9, B.PSI10, PulseId.R),
)

FIBER_LABELS = (B.PSI3, B.PSI8)
CAVITY_LABELS = (B.PSI2, B.PSI4, B.PSI7, B.PSI9)


@dataclass(frozen=True)
class BuildOptions:
    """Which optional terms to include.

    Attributes:
        include_stark: add the drive- and photon-induced level shifts
        include_decay: add -i*gamma_f/2 on fiber labels and -i*kappa_c/2 on cavity labels
    """

    include_stark: bool = False
    include_decay: bool = False


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """Time-stamped 10x10 complex matrix; the array is read-only."""

    time: float
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def entry(self, row: BasisLabel, col: BasisLabel) -> complex:
        return complex(self.entries[row.index, col.index])

    def is_hermitian(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.conj().T))

    def norm(self) -> float:
        """Spectral norm."""
        return float(np.linalg.norm(self.entries, 2))

    def block(self, side: str) -> np.ndarray:
        """5x5 block of one chain ('left' or 'right')."""
        start = {"left": 0, "right": 5}[side]
        return self.entries[start:start + 5, start:start + 5]


def stark_shifts(t: float, p: SystemParams) -> Dict[BasisLabel, float]:
    """Diagonal level shifts evaluated on each basis label.

    Omega_1^2/Delta on the |f> ancilla labels, g^2/Delta on the labels with a
    cavity photon next to the coupled atomic level, Omega_L^2/Delta and
    Omega_R^2/Delta on the |k> atom labels. Shifts for off-resonantly driven
    |s> levels are not part of the model.
    """
    omega_1 = gaussian_pulse(t, PulseId.ONE, p)
    omega_l = gaussian_pulse(t, PulseId.L, p)
    omega_r = gaussian_pulse(t, PulseId.R, p)
    photon_shift = p.g ** 2 / p.delta
    return {
        B.PSI1: omega_1 ** 2 / p.delta,
        B.PSI6: omega_1 ** 2 / p.delta,
        B.PSI2: photon_shift,
        B.PSI4: photon_shift,
        B.PSI7: photon_shift,
        B.PSI9: photon_shift,
        B.PSI5: omega_l ** 2 / p.delta,
        B.PSI10: omega_r ** 2 / p.delta,
    }


class HamiltonianComponents:
    """H(t) split into a static part and pulse-weighted coupling matrices.

    H(t) = static + sum_xi Omega_xie(t) * coupling[xi] (+ Stark diagonal).
    Each coupling matrix holds exact ones, so the assembled entries equal the
    direct evaluation bit for bit.
    """

    def __init__(self, p: SystemParams, opts: BuildOptions = BuildOptions()):
        self.params = p
        self.options = opts
        self.static = np.zeros((BASIS_SIZE, BASIS_SIZE), dtype=np.complex128)
        self.coupling = {xi: np.zeros((BASIS_SIZE, BASIS_SIZE), dtype=np.complex128) for xi in PulseId}

        for upper, lower, source in COUPLINGS:
            i, j = upper.index, lower.index
            if isinstance(source, PulseId):
                self.coupling[source][i, j] = 1.0
                self.coupling[source][j, i] = 1.0
            else:
                self.static[i, j] = getattr(p, source)
                self.static[j, i] = getattr(p, source)

        if opts.include_decay:
            for label in FIBER_LABELS:
                self.static[label.index, label.index] += -0.5j * p.gamma_f
            for label in CAVITY_LABELS:
                self.static[label.index, label.index] += -0.5j * p.kappa_c

    @property
    def is_lossy(self) -> bool:
        return self.options.include_decay and (self.params.gamma_f > 0.0 or self.params.kappa_c > 0.0)

    def rabi_coefficients(self, times: np.ndarray) -> Dict[PulseId, np.ndarray]:
        """Effective Rabi frequencies of all three pulses on a time grid."""
        return {xi: np.asarray(effective_rabi(times, xi, self.params)) for xi in PulseId}

    def assemble(self, t: float, rabi: Dict[PulseId, float]) -> np.ndarray:
        """Matrix at time t from precomputed Rabi values."""
        matrix = self.static.copy()
        for xi in PulseId:
            matrix += rabi[xi] * self.coupling[xi]
        if self.options.include_stark:
            for label, shift in stark_shifts(t, self.params).items():
                matrix[label.index, label.index] += shift
        return matrix

    def at(self, t: float) -> np.ndarray:
        return self.assemble(t, {xi: effective_rabi(t, xi, self.params) for xi in PulseId})

    def stack(self, times: np.ndarray) -> np.ndarray:
        """Matrices for a whole time grid at once, shape (len(times), 10, 10)."""
        times = np.asarray(times, dtype=float)
        out = np.broadcast_to(self.static, (times.size, BASIS_SIZE, BASIS_SIZE)).copy()
        for xi, values in self.rabi_coefficients(times).items():
            out += values[:, None, None] * self.coupling[xi]
        if self.options.include_stark:
            for label, shift in stark_shifts(times, self.params).items():
                out[:, label.index, label.index] += shift
        return out


def build(t: float, p: SystemParams, opts: BuildOptions = BuildOptions()) -> HamiltonianMatrix:
    """Hamiltonian matrix at time t.

    Args:
        t: evaluation time (may lie outside [0, T])
        p: system parameters
        opts: Stark and decay switches

    Returns:
        HamiltonianMatrix over the ten basis labels

    Raises:
        InvalidParametersError: if t is not finite
    """
    if not np.isfinite(t):
        raise InvalidParametersError(f"time must be finite, got {t}")
    return HamiltonianMatrix(float(t), HamiltonianComponents(p, opts).at(t))
