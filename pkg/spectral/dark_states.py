"""
Dark states, instantaneous spectra and adiabaticity diagnostics.

The dark state of each chain is the zero-energy eigenvector
    D_left = (Omega_Le eta_A PSI1 - Omega_Le Omega_1e PSI3 + Omega_1e eta_A PSI5) / K0
(and its PSI6/PSI8/PSI10 mirror with eta_B, Omega_Re, K1). Every eigenvector
handed out here carries the same phase convention: the first nonzero
coefficient in label order is real and non-negative.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from dynamics.evolve import Trajectory
from hamiltonian.build_hamiltonian import BuildOptions, build
from pulses.gaussian_pulses import PulseId, effective_rabi
from utils.errors import (
    DegenerateDarkStateError,
    DegenerateGapError,
    InvalidParametersError,
    NumericalFailureError,
)
from utils.models import BASIS_SIZE, BasisLabel, StateVector, SystemParams

logger = logging.getLogger(__name__)

DARK_TOLERANCE = 1e-9  # relative to the spectral norm of H
MIN_METRIC_SAMPLES = 10
DERIVATIVE_FRACTION = 1e-5  # finite-difference step as a fraction of T

SIDES = ("left", "right")

_CHAIN: Dict[str, Dict[str, object]] = {
    "left": {
        "pulse": PulseId.L,
        "eta": "eta_a",
        "labels": (BasisLabel.PSI1, BasisLabel.PSI3, BasisLabel.PSI5),
        "offset": 0,
    },
    "right": {
        "pulse": PulseId.R,
        "eta": "eta_b",
        "labels": (BasisLabel.PSI6, BasisLabel.PSI8, BasisLabel.PSI10),
        "offset": 5,
    },
}


def _check_side(side: str) -> None:
    if side not in _CHAIN:
        raise InvalidParametersError(f"side must be 'left' or 'right', got {side!r}")


def fix_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first nonzero coefficient is real and non-negative."""
    amps = np.asarray(amps, dtype=np.complex128)
    nonzero = np.flatnonzero(np.abs(amps) > 0.0)
    if nonzero.size == 0:
        return amps.copy()
    lead = amps[nonzero[0]]
    return amps * (abs(lead) / lead)


# ==================== ANALYTIC DARK STATES ====================


def _dark_coefficients(t: float, p: SystemParams, side: str) -> np.ndarray:
    chain = _CHAIN[side]
    omega_atom = effective_rabi(t, chain["pulse"], p)
    omega_one = effective_rabi(t, PulseId.ONE, p)
    eta = getattr(p, chain["eta"])

    # products of scaled values so tails underflow as late as possible
    scale = max(omega_atom, omega_one, eta)
    if scale == 0.0:
        raise DegenerateDarkStateError(f"all {side} couplings vanish at t={t}")
    a, b, e = omega_atom / scale, omega_one / scale, eta / scale
    coefficients = np.array([a * e, -a * b, b * e])
    k = np.sqrt(np.sum(coefficients ** 2))
    if not k > 0.0:
        raise DegenerateDarkStateError(f"dark-state normalization underflowed on the {side} chain at t={t}")
    return coefficients / k


def _dark_state(t: float, p: SystemParams, side: str) -> StateVector:
    _check_side(side)
    coefficients = _dark_coefficients(t, p, side)
    amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
    for label, value in zip(_CHAIN[side]["labels"], coefficients):
        amps[label.index] = value
    return StateVector(fix_phase(amps))


def analytic_dark_left(t: float, p: SystemParams) -> StateVector:
    """Normalized zero-energy state of the left chain on {PSI1, PSI3, PSI5}."""
    return _dark_state(t, p, "left")


def analytic_dark_right(t: float, p: SystemParams) -> StateVector:
    """Mirror of analytic_dark_left on {PSI6, PSI8, PSI10}."""
    return _dark_state(t, p, "right")


def analytic_dark_pair(t: float, p: SystemParams) -> StateVector:
    """(D_left + D_right)/sqrt(2), the state followed from (PSI1 + PSI6)/sqrt(2)."""
    left = analytic_dark_left(t, p).amps
    right = analytic_dark_right(t, p).amps
    return StateVector((left + right) / np.sqrt(2.0))


def reduced_dark(t: float, p: SystemParams, side: str) -> StateVector:
    """Strong-fiber limit of the dark state, with no fiber component.

    (Omega_Le PSI1 + Omega_1e PSI5) / sqrt(Omega_Le^2 + Omega_1e^2), or the
    right-chain mirror.
    """
    _check_side(side)
    chain = _CHAIN[side]
    omega_atom = effective_rabi(t, chain["pulse"], p)
    omega_one = effective_rabi(t, PulseId.ONE, p)
    scale = max(omega_atom, omega_one)
    if scale == 0.0:
        raise DegenerateDarkStateError(f"both {side} pulses vanish at t={t}")
    first, _, last = chain["labels"]
    amps = np.zeros(BASIS_SIZE, dtype=np.complex128)
    amps[first.index] = omega_atom / scale
    amps[last.index] = omega_one / scale
    return StateVector(fix_phase(amps / np.linalg.norm(amps)))


def fiber_population(t: float, p: SystemParams, side: str = "left") -> float:
    """Weight of the fiber-photon label (PSI3 or PSI8) in the analytic dark state."""
    _check_side(side)
    return abs(_dark_state(t, p, side)[_CHAIN[side]["labels"][1]]) ** 2


def dark_state_overlaps(traj: Trajectory, p: SystemParams, strict: bool = True) -> np.ndarray:
    """|<dark pair(t)|psi(t)>|^2 at every trajectory sample.

    With strict=False, samples where the dark state is undefined give NaN
    instead of raising.
    """
    overlaps = np.empty(len(traj))
    for i, (t, amps) in enumerate(zip(traj.times, traj.amplitudes)):
        try:
            overlaps[i] = analytic_dark_pair(float(t), p).fidelity(StateVector(amps))
        except DegenerateDarkStateError:
            if strict:
                raise
            overlaps[i] = np.nan
    return overlaps


# ==================== NUMERIC SPECTRUM ====================


@dataclass(frozen=True, eq=False)
class SpectrumSnapshot:
    """Eigendecomposition of H(t).

    Attributes:
        time: evaluation time
        eigenvalues: ascending real eigenvalues
        eigenvectors: orthonormal eigenvectors, phase-fixed, same order
        dark_indices: positions with |E| within the zero tolerance
        norm: spectral norm of H(t)
    """

    time: float
    eigenvalues: np.ndarray
    eigenvectors: Tuple[StateVector, ...]
    dark_indices: Tuple[int, ...]
    norm: float

    def dark_projector(self) -> np.ndarray:
        """Orthogonal projector onto the numeric zero-energy subspace."""
        vectors = np.array([self.eigenvectors[k].amps for k in self.dark_indices]).reshape(-1, BASIS_SIZE)
        return vectors.T @ vectors.conj()


def _eigh(matrix: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
    try:
        return np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        logger.error(f"Eigensolver failed at t={t}: {exc}")
        raise NumericalFailureError(f"eigensolver did not converge at t={t}") from exc


def instantaneous_spectrum(t: float, p: SystemParams, opts: BuildOptions = BuildOptions()) -> SpectrumSnapshot:
    """Full Hermitian eigendecomposition of H(t).

    Raises:
        InvalidParametersError: if opts requests the non-Hermitian loss terms
        NumericalFailureError: if the eigensolver does not converge
    """
    if opts.include_decay:
        raise InvalidParametersError("the instantaneous spectrum needs a Hermitian Hamiltonian")
    hamiltonian = build(t, p, opts)
    values, vectors = _eigh(hamiltonian.entries, t)
    norm = float(np.max(np.abs(values)))
    tolerance = DARK_TOLERANCE * norm
    dark = tuple(int(k) for k in np.flatnonzero(np.abs(values) <= tolerance))
    return SpectrumSnapshot(
        time=float(t),
        eigenvalues=values,
        eigenvectors=tuple(StateVector(fix_phase(vectors[:, k])) for k in range(BASIS_SIZE)),
        dark_indices=dark,
        norm=norm,
    )


def spectrum_table(p: SystemParams, points: int = 201, opts: BuildOptions = BuildOptions()) -> pd.DataFrame:
    """Eigenvalue time series over [0, T]: columns t, e1..e10, n_dark."""
    if points < 2:
        raise InvalidParametersError(f"need at least 2 sample points, got {points}")
    rows = []
    for t in np.linspace(0.0, p.total_time, points):
        snapshot = instantaneous_spectrum(float(t), p, opts)
        row = {"t": float(t)}
        row.update({f"e{k + 1}": float(value) for k, value in enumerate(snapshot.eigenvalues)})
        row["n_dark"] = len(snapshot.dark_indices)
        rows.append(row)
    return pd.DataFrame(rows, columns=["t"] + [f"e{k}" for k in range(1, BASIS_SIZE + 1)] + ["n_dark"])


def adiabaticity_metric(p: SystemParams, n_samples: int = 200) -> float:
    """Largest nonadiabatic coupling ratio along the window.

    max over sampled t, both chains and every bright eigenstate k of
    |<E_k(t)| dD/dt>| / |E_k(t)|, where D is the analytic dark state of the
    chain and dD/dt a central difference with step T * 1e-5. Values well
    below one mean the dark state is followed adiabatically.

    Raises:
        InvalidParametersError: n_samples < 10
        DegenerateDarkStateError: the dark state is undefined at a sample
        DegenerateGapError: a bright eigenvalue sits inside the zero tolerance
    """
    if n_samples < MIN_METRIC_SAMPLES:
        raise InvalidParametersError(f"n_samples must be >= {MIN_METRIC_SAMPLES}, got {n_samples}")
    step = p.total_time * DERIVATIVE_FRACTION
    worst = 0.0

    for side in SIDES:
        block = slice(_CHAIN[side]["offset"], _CHAIN[side]["offset"] + 5)
        for t in np.linspace(0.0, p.total_time, n_samples):
            t = float(t)
            values, vectors = _eigh(build(t, p).block(side), t)
            tolerance = DARK_TOLERANCE * float(np.max(np.abs(values)))

            dark = _dark_state(t, p, side).amps[block]
            derivative = (_dark_state(t + step, p, side).amps[block]
                          - _dark_state(t - step, p, side).amps[block]) / (2.0 * step)

            projections = np.abs(vectors.conj().T @ dark)
            dark_index = int(np.argmax(projections))
            for k, energy in enumerate(values):
                if k == dark_index:
                    continue
                if abs(energy) <= tolerance:
                    raise DegenerateGapError(f"bright eigenvalue {energy:.3e} closes onto the {side} dark state at t={t}")
                worst = max(worst, abs(np.vdot(vectors[:, k], derivative)) / abs(energy))

    logger.debug(f"Adiabaticity metric over {n_samples} samples: {worst:.4g}")
    return worst
