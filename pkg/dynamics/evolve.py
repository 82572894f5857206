"""
Fixed-step integration of i d(psi)/dt = H(t) psi over the adiabatic window.

The integrator is classical fourth-order Runge-Kutta on an equal grid of
N = ceil(T/dt) steps, so the last sample sits exactly at T. Hamiltonians are
assembled in vectorized chunks on the half-step grid and reused for the
midpoint stages.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from hamiltonian.build_hamiltonian import BuildOptions, HamiltonianComponents
from utils.errors import InvalidParametersError, NumericalFailureError, StepTooLargeError
from utils.models import BasisLabel, StateVector, SystemParams

logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-3
DEFAULT_SAMPLE_EVERY = 100
NORM_DRIFT_LIMIT = 1e-6
NORMALIZATION_TOLERANCE = 1e-9

# steps per vectorized Hamiltonian batch
CHUNK_STEPS = 4096


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution of one integration run.

    Attributes:
        times: sample instants, strictly increasing from 0 to T
        amplitudes: complex array of shape (len(times), 10)
        step_size: the integrator step actually used
    """

    times: np.ndarray
    amplitudes: np.ndarray
    step_size: float

    def __len__(self) -> int:
        return len(self.times)

    @property
    def states(self) -> Tuple[StateVector, ...]:
        return tuple(StateVector(row) for row in self.amplitudes)

    @property
    def final_state(self) -> StateVector:
        return StateVector(self.amplitudes[-1])

    def norms2(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def populations(self) -> np.ndarray:
        """Per-sample populations, shape (len(times), 10)."""
        return np.abs(self.amplitudes) ** 2


def step_count(total_time: float, dt: float) -> int:
    """Number of equal steps covering [0, T] with step no larger than dt."""
    return max(1, int(np.ceil(round(total_time / dt, 9))))


def evolve(
    psi0: StateVector,
    p: SystemParams,
    opts: BuildOptions = BuildOptions(),
    dt: float = DEFAULT_DT,
    sample_every: int = DEFAULT_SAMPLE_EVERY,
) -> Trajectory:
    """Integrate the Schrodinger equation from t = 0 to t = T.

    Args:
        psi0: normalized initial state at t = 0
        p: system parameters
        opts: Stark and decay switches passed to the Hamiltonian
        dt: maximum step size (1/g)
        sample_every: keep every k-th step; the final step is always kept

    Returns:
        Trajectory sampled at t = 0, every sample_every steps, and t = T

    Raises:
        InvalidParametersError: dt not positive, sample_every < 1, psi0 not normalized
        StepTooLargeError: a loss-free run drifted in norm by more than 1e-6
        NumericalFailureError: the state became non-finite
    """
    if not (np.isfinite(dt) and dt > 0.0):
        raise InvalidParametersError(f"dt must be positive, got {dt}")
    if sample_every < 1:
        raise InvalidParametersError(f"sample_every must be >= 1, got {sample_every}")
    if abs(psi0.norm2() - 1.0) > NORMALIZATION_TOLERANCE:
        raise InvalidParametersError(f"initial state must be normalized, |psi|^2 = {psi0.norm2()}")

    components = HamiltonianComponents(p, opts)
    hermitian = not components.is_lossy
    n_steps = step_count(p.total_time, dt)
    h = p.total_time / n_steps
    logger.info(f"Integrating {n_steps} RK4 steps of {h:.3g} over T={p.total_time} (hermitian={hermitian})")

    psi = psi0.amps.copy()
    times = [0.0]
    samples = [psi.copy()]

    for start in range(0, n_steps, CHUNK_STEPS):
        stop = min(start + CHUNK_STEPS, n_steps)
        # generators -iH on the half-step grid t = j*h/2, j = 2*start .. 2*stop
        generators = -1j * components.stack(np.arange(2 * start, 2 * stop + 1) * (h / 2.0))

        for k in range(start, stop):
            j = 2 * (k - start)
            g0, g_mid, g1 = generators[j], generators[j + 1], generators[j + 2]
            k1 = g0 @ psi
            k2 = g_mid @ (psi + (h / 2.0) * k1)
            k3 = g_mid @ (psi + (h / 2.0) * k2)
            k4 = g1 @ (psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

            done = k + 1
            if done % sample_every == 0 or done == n_steps:
                t = p.total_time if done == n_steps else done * h
                _check_state(psi, t, done, hermitian)
                times.append(t)
                samples.append(psi.copy())

    return Trajectory(np.array(times), np.array(samples), h)


def _check_state(psi: np.ndarray, t: float, step: int, hermitian: bool) -> None:
    if not np.all(np.isfinite(psi)):
        logger.error(f"State became non-finite at t={t}")
        raise NumericalFailureError(f"state became non-finite at t={t} (step {step})")
    if hermitian:
        drift = abs(float(np.vdot(psi, psi).real) - 1.0)
        if drift > NORM_DRIFT_LIMIT:
            logger.error(f"Norm drift {drift:.3e} at t={t}")
            raise StepTooLargeError(f"norm drift {drift:.3e} at t={t} exceeds {NORM_DRIFT_LIMIT}; rerun with a smaller dt")


def populations(s: StateVector) -> np.ndarray:
    """|amplitude|^2 per basis label; sums to the squared norm."""
    return s.populations()


def transfer_probability(traj: Trajectory) -> float:
    """P(PSI5) + P(PSI10) at the final sample."""
    if len(traj) == 0:
        raise InvalidParametersError("trajectory is empty")
    final = traj.final_state
    return abs(final[BasisLabel.PSI5]) ** 2 + abs(final[BasisLabel.PSI10]) ** 2


def survival_fidelity(
    psi0: StateVector,
    target: StateVector,
    p: SystemParams,
    dt: float = DEFAULT_DT,
    opts: BuildOptions = BuildOptions(include_decay=True),
) -> float:
    """|<target|psi(T)>|^2 with the loss terms switched on.

    Norm lost to the fiber and cavity decay terms counts as failure, so this
    is the non-perturbative counterpart of the fiber-loss fidelity.
    """
    if abs(target.norm2() - 1.0) > NORMALIZATION_TOLERANCE:
        raise InvalidParametersError("target state must be normalized")
    traj = evolve(psi0, p, opts, dt=dt, sample_every=step_count(p.total_time, dt))
    return target.fidelity(traj.final_state)
