"""
Test suite for the Runge-Kutta integrator.
"""

import unittest

import numpy as np

from dynamics.evolve import (
    Trajectory,
    evolve,
    populations,
    step_count,
    survival_fidelity,
    transfer_probability,
)
from hamiltonian.build_hamiltonian import BuildOptions
from pulses.gaussian_pulses import PulseId, pulse_area
from spectral.dark_states import analytic_dark_pair
from utils.errors import InvalidParametersError, StepTooLargeError
from utils.models import BasisLabel as B
from utils.models import StateVector, SystemParams

PAIR = StateVector.superposition(B.PSI1, B.PSI6)


def _diabatic(p: SystemParams) -> SystemParams:
    """The same schedule compressed ten times in time."""
    return p.replace(total_time=10.0, tau_pulse=1.2, t_l=-1.5, t_r=-1.5, t_1=1.5)


class TestValidation(unittest.TestCase):
    """Test cases for argument checks and the sampling grid."""

    def test_bad_step(self):
        """Test non-positive and non-finite steps are rejected."""
        for dt in (0.0, -0.01, float("nan")):
            with self.assertRaises(InvalidParametersError, msg=str(dt)):
                evolve(PAIR, SystemParams(), dt=dt)

    def test_bad_sampling(self):
        """Test sample_every must be at least one."""
        with self.assertRaises(InvalidParametersError):
            evolve(PAIR, SystemParams(), sample_every=0)

    def test_unnormalized_start(self):
        """Test the initial state must have unit norm."""
        with self.assertRaises(InvalidParametersError):
            evolve(StateVector(2.0 * PAIR.amps), SystemParams())

    def test_step_count(self):
        """Test N = ceil(T/dt) without float noise."""
        self.assertEqual(step_count(100.0, 1e-3), 100000)
        self.assertEqual(step_count(100.0, 0.3), 334)
        self.assertEqual(step_count(1.0, 5.0), 1)

    def test_sample_grid(self):
        """Test samples at 0, every k steps, and exactly at T."""
        traj = evolve(PAIR, SystemParams(omega0=0.0, eta_a=0.0, eta_b=0.0), dt=0.3, sample_every=100)
        np.testing.assert_allclose(traj.times[:4], [0.0, 100 * 100.0 / 334, 200 * 100.0 / 334, 300 * 100.0 / 334])
        self.assertEqual(traj.times[-1], 100.0)
        self.assertEqual(len(traj), 5)
        self.assertEqual(traj.amplitudes.shape, (5, 10))
        self.assertAlmostEqual(traj.step_size, 100.0 / 334)

    def test_final_sample_not_duplicated(self):
        """Test T is recorded once when N is a multiple of k."""
        traj = evolve(PAIR, SystemParams(), dt=0.1, sample_every=100)
        self.assertEqual(len(traj), 11)
        self.assertEqual(np.count_nonzero(traj.times == 100.0), 1)


class TestEvolve(unittest.TestCase):
    """Test cases for evolve() and the derived quantities."""

    def test_zero_hamiltonian(self):
        """Test a state is left exactly unchanged when H = 0."""
        p = SystemParams(omega0=0.0, eta_a=0.0, eta_b=0.0)
        traj = evolve(PAIR, p, dt=0.5, sample_every=10)
        for row in traj.amplitudes:
            np.testing.assert_array_equal(row, PAIR.amps)

    def test_chains_independent(self):
        """Test a left-chain start never populates the right chain."""
        traj = evolve(StateVector.basis(B.PSI1), SystemParams.adiabatic_regime(), dt=0.01)
        self.assertFalse(np.any(traj.amplitudes[:, 5:]))

    def test_norm_conserved(self):
        """Test norm drift stays below 1e-8 at the default step."""
        traj = evolve(PAIR, SystemParams(), dt=1e-3, sample_every=1000)
        self.assertLess(np.max(np.abs(traj.norms2() - 1.0)), 1e-8)

    def test_step_halving(self):
        """Test the final state converges under step halving."""
        p = SystemParams()
        coarse = evolve(PAIR, p, dt=0.01, sample_every=10000).final_state
        fine = evolve(PAIR, p, dt=0.005, sample_every=20000).final_state
        self.assertLess(np.max(np.abs(coarse.amps - fine.amps)), 1e-7)

    def test_standard_schedule_transfer(self):
        """Test the weak-drive schedule is far from adiabatic."""
        traj = evolve(PAIR, SystemParams(), dt=0.01)
        self.assertGreater(transfer_probability(traj), 0.02)
        self.assertLess(transfer_probability(traj), 0.03)

    def test_adiabatic_transfer(self):
        """Test complete transfer in the strong-drive regime."""
        traj = evolve(PAIR, SystemParams.adiabatic_regime(), dt=0.01)
        self.assertGreaterEqual(transfer_probability(traj), 0.99)
        self.assertLess(np.max(np.abs(traj.norms2() - 1.0)), 1e-8)

    def test_diabatic_transfer_lower(self):
        """Test compressing the schedule lowers the transfer."""
        p = SystemParams.adiabatic_regime()
        slow = transfer_probability(evolve(PAIR, p, dt=0.01))
        fast = transfer_probability(evolve(PAIR, _diabatic(p), dt=0.001))
        self.assertLess(fast, slow)
        self.assertAlmostEqual(fast, 0.853, delta=0.01)

    def test_two_level_rotation(self):
        """Test P1 = cos^2(area) with the fibers and outer pulses off."""
        p = SystemParams(eta_a=0.0, eta_b=0.0, t_l=-1e4, t_r=-1e4)
        traj = evolve(StateVector.basis(B.PSI1), p, dt=0.01)
        pops = populations(traj.final_state)
        area = pulse_area(PulseId.ONE, p)
        self.assertAlmostEqual(pops[B.PSI1.index], np.cos(area) ** 2, places=7)
        self.assertAlmostEqual(pops[B.PSI2.index], np.sin(area) ** 2, places=7)
        self.assertEqual(pops[B.PSI3.index:B.PSI5.index + 1].sum(), 0.0)

    def test_decay_shrinks_norm(self):
        """Test the norm decreases monotonically with loss terms on."""
        p = SystemParams.adiabatic_regime(gamma_f=0.05, kappa_c=0.01)
        traj = evolve(PAIR, p, BuildOptions(include_decay=True), dt=0.01, sample_every=500)
        norms = traj.norms2()
        self.assertTrue(np.all(np.diff(norms) <= 1e-12))
        self.assertLess(norms[-1], 1.0)

    def test_step_too_large(self):
        """Test a coarse loss-free run reports norm drift."""
        with self.assertRaises(StepTooLargeError):
            evolve(PAIR, SystemParams.adiabatic_regime(), dt=1.0, sample_every=1)

    def test_empty_trajectory(self):
        """Test transfer needs at least one sample."""
        empty = Trajectory(np.zeros(0), np.zeros((0, 10), dtype=complex), 0.1)
        with self.assertRaises(InvalidParametersError):
            transfer_probability(empty)


class TestSurvivalFidelity(unittest.TestCase):
    """Test cases for the non-perturbative survival fidelity."""

    def setUp(self):
        self.p = SystemParams.adiabatic_regime()
        self.target = analytic_dark_pair(self.p.total_time, self.p)

    def test_lossless_matches_overlap(self):
        """Test gamma_f = 0 reproduces the Hermitian overlap."""
        expected = self.target.fidelity(evolve(PAIR, self.p, dt=0.01).final_state)
        self.assertAlmostEqual(survival_fidelity(PAIR, self.target, self.p, dt=0.01), expected, places=12)
        self.assertGreater(expected, 0.99)

    def test_small_loss_values(self):
        """Test survival at two fiber decay rates."""
        low = survival_fidelity(PAIR, self.target, self.p.replace(gamma_f=0.01), dt=0.01)
        high = survival_fidelity(PAIR, self.target, self.p.replace(gamma_f=0.02), dt=0.01)
        self.assertAlmostEqual(low, 0.98292, delta=2e-3)
        self.assertAlmostEqual(high, 0.96612, delta=2e-3)
        # loss is linear in gamma_f for small rates
        self.assertAlmostEqual((1.0 - high) / (1.0 - low), 2.0, delta=0.2)

    def test_unnormalized_target(self):
        """Test the target must be normalized."""
        with self.assertRaises(InvalidParametersError):
            survival_fidelity(PAIR, StateVector(np.zeros(10)), self.p)


if __name__ == '__main__':
    unittest.main()
