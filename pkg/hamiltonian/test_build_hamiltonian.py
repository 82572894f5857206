"""
Test suite for the ten-state Hamiltonian builder.
"""

import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hamiltonian.build_hamiltonian import BuildOptions, HamiltonianComponents, build
from pulses.gaussian_pulses import PulseId, effective_rabi, gaussian_pulse
from utils.errors import InvalidParametersError
from utils.models import BasisLabel as B
from utils.models import SystemParams


class TestBuild(unittest.TestCase):
    """Test cases for build()."""

    def setUp(self):
        self.p = SystemParams()

    # ==================== Couplings ====================

    def test_drive_entry_at_peak(self):
        """Test the PSI1-PSI2 coupling equals Omega0 g / Delta at the Omega_1 peak."""
        h = build(65.0, self.p)
        self.assertAlmostEqual(h.entry(B.PSI1, B.PSI2).real, 0.1, places=15)
        self.assertEqual(h.entry(B.PSI1, B.PSI2), h.entry(B.PSI2, B.PSI1))

    def test_fiber_entries_constant(self):
        """Test fiber couplings are time independent."""
        for t in (0.0, 37.5, 100.0):
            h = build(t, self.p)
            self.assertEqual(h.entry(B.PSI2, B.PSI3), 0.6)
            self.assertEqual(h.entry(B.PSI3, B.PSI4), 0.6)
            self.assertEqual(h.entry(B.PSI7, B.PSI8), 0.6)

    def test_atom_entries(self):
        """Test the outer-atom couplings follow Omega_L and Omega_R."""
        p = self.p.replace(t_r=-5.0)
        h = build(42.0, p)
        self.assertEqual(h.entry(B.PSI4, B.PSI5), effective_rabi(42.0, PulseId.L, p))
        self.assertEqual(h.entry(B.PSI9, B.PSI10), effective_rabi(42.0, PulseId.R, p))

    def test_chains_never_couple(self):
        """Test the off-diagonal blocks are exactly zero."""
        h = build(50.0, self.p, BuildOptions(include_stark=True, include_decay=True))
        self.assertFalse(np.any(h.entries[:5, 5:]))
        self.assertFalse(np.any(h.entries[5:, :5]))
        self.assertEqual(h.entry(B.PSI1, B.PSI6), 0.0)

    def test_tridiagonal_chains(self):
        """Test only nearest neighbours inside a chain couple."""
        block = build(50.0, self.p).block("left")
        mask = np.abs(np.subtract.outer(np.arange(5), np.arange(5))) > 1
        self.assertFalse(np.any(block[mask]))

    def test_hermitian_without_decay(self):
        """Test exact Hermiticity with and without Stark shifts."""
        self.assertTrue(build(44.4, self.p).is_hermitian())
        self.assertTrue(build(44.4, self.p, BuildOptions(include_stark=True)).is_hermitian())

    @given(st.floats(min_value=-20.0, max_value=120.0, allow_nan=False))
    @settings(max_examples=100, deadline=None)
    def test_hermitian_any_time(self, t):
        """Test ||H - H^dagger|| = 0 for arbitrary times."""
        h = build(t, self.p)
        self.assertEqual(np.abs(h.entries - h.entries.conj().T).max(), 0.0)

    def test_linear_in_eta(self):
        """Test doubling eta_A doubles exactly the four eta_A entries."""
        h1 = build(30.0, self.p).entries
        h2 = build(30.0, self.p.replace(eta_a=1.2)).entries
        changed = np.argwhere(h1 != h2)
        expected = {(1, 2), (2, 1), (2, 3), (3, 2)}
        self.assertEqual({tuple(idx) for idx in changed}, expected)
        for i, j in expected:
            self.assertEqual(h2[i, j], 2.0 * h1[i, j])

    def test_non_finite_time(self):
        """Test non-finite times are rejected."""
        for t in (float("nan"), float("inf")):
            with self.assertRaises(InvalidParametersError):
                build(t, self.p)

    def test_read_only(self):
        """Test the matrix cannot be modified in place."""
        h = build(10.0, self.p)
        with self.assertRaises(ValueError):
            h.entries[0, 0] = 1.0

    # ==================== Options ====================

    def test_decay_diagonals(self):
        """Test -i gamma_f/2 on fiber labels and -i kappa_c/2 on cavity labels."""
        p = self.p.replace(gamma_f=0.2, kappa_c=0.05)
        h = build(20.0, p, BuildOptions(include_decay=True))
        for label in (B.PSI3, B.PSI8):
            self.assertEqual(h.entry(label, label), -0.1j)
        for label in (B.PSI2, B.PSI4, B.PSI7, B.PSI9):
            self.assertEqual(h.entry(label, label), -0.025j)
        for label in (B.PSI1, B.PSI5, B.PSI6, B.PSI10):
            self.assertEqual(h.entry(label, label), 0.0)
        self.assertFalse(h.is_hermitian())

    def test_decay_flag_off_ignores_rates(self):
        """Test rates have no effect unless decay is requested."""
        p = self.p.replace(gamma_f=0.2)
        self.assertTrue(np.array_equal(build(20.0, p).entries, build(20.0, self.p).entries))

    def test_stark_diagonals(self):
        """Test the level shifts on each label."""
        t = 50.0
        h = build(t, self.p, BuildOptions(include_stark=True))
        omega_1 = gaussian_pulse(t, PulseId.ONE, self.p)
        omega_l = gaussian_pulse(t, PulseId.L, self.p)
        self.assertAlmostEqual(h.entry(B.PSI1, B.PSI1).real, omega_1 ** 2 / 15.0, places=15)
        self.assertAlmostEqual(h.entry(B.PSI6, B.PSI6).real, omega_1 ** 2 / 15.0, places=15)
        self.assertAlmostEqual(h.entry(B.PSI2, B.PSI2).real, 1.0 / 15.0, places=15)
        self.assertAlmostEqual(h.entry(B.PSI5, B.PSI5).real, omega_l ** 2 / 15.0, places=15)
        self.assertEqual(h.entry(B.PSI3, B.PSI3), 0.0)

    def test_all_pulses_off(self):
        """Test only the fiber couplings survive without drive."""
        h = build(50.0, self.p.replace(omega0=0.0)).entries
        self.assertEqual(np.count_nonzero(h), 8)


class TestHamiltonianComponents(unittest.TestCase):
    """Test cases for the static/pulse split used by the integrator."""

    def test_at_matches_build(self):
        """Test the split reproduces build() exactly."""
        p = SystemParams(gamma_f=0.1)
        opts = BuildOptions(include_stark=True, include_decay=True)
        components = HamiltonianComponents(p, opts)
        for t in (0.0, 33.3, 71.0):
            self.assertTrue(np.array_equal(components.at(t), build(t, p, opts).entries))

    def test_stack_matches_at(self):
        """Test vectorized assembly agrees with pointwise assembly."""
        p = SystemParams.adiabatic_regime()
        components = HamiltonianComponents(p, BuildOptions(include_stark=True))
        times = np.linspace(0.0, 100.0, 7)
        stacked = components.stack(times)
        self.assertEqual(stacked.shape, (7, 10, 10))
        for k, t in enumerate(times):
            np.testing.assert_allclose(stacked[k], components.at(t), rtol=1e-14, atol=1e-15)

    def test_is_lossy(self):
        """Test the lossy flag needs both the option and a nonzero rate."""
        p = SystemParams(gamma_f=0.1)
        self.assertTrue(HamiltonianComponents(p, BuildOptions(include_decay=True)).is_lossy)
        self.assertFalse(HamiltonianComponents(p).is_lossy)
        self.assertFalse(HamiltonianComponents(SystemParams(), BuildOptions(include_decay=True)).is_lossy)


if __name__ == '__main__':
    unittest.main()
