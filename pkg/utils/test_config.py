"""
Test suite for run configuration loading.
"""

import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

import numpy as np
from pydantic import ValidationError

from utils.config import THREADS_ENV, get_thread_limit, load_run_config, parse_grid
from utils.errors import InvalidParametersError


class TestLoadRunConfig(unittest.TestCase):
    """Test cases for load_run_config."""

    def setUp(self):
        """Create a scratch directory for config files."""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, data) -> str:
        path = self.dir / "config.json"
        path.write_text(json.dumps(data))
        return str(path)

    def test_no_file_gives_defaults(self):
        """Test that an absent config resolves to defaults."""
        cfg = load_run_config()
        self.assertEqual(cfg.params.omega0, 1.5)
        self.assertEqual(cfg.dt, 1e-3)
        self.assertEqual(cfg.mode, "analytic")

    def test_file_values(self):
        """Test parameters and options are read from the file."""
        cfg = load_run_config(self._write({"omega0": 15.0, "delta": 3.0, "eta": 4.0, "dt": 0.01, "seed": 7}))
        self.assertEqual(cfg.params.omega0, 15.0)
        self.assertEqual((cfg.params.eta_a, cfg.params.eta_b), (4.0, 4.0))
        self.assertEqual(cfg.dt, 0.01)
        self.assertEqual(cfg.seed, 7)

    def test_flags_override_file(self):
        """Test command-line values take precedence."""
        path = self._write({"gamma_f": 0.1, "decay": True, "n": 5})
        cfg = load_run_config(path, {"gamma_f": 0.2, "n": None, "decay": None})
        self.assertEqual(cfg.params.gamma_f, 0.2)
        self.assertEqual(cfg.n, 5)
        self.assertTrue(cfg.decay)

    def test_per_fiber_key_beats_eta(self):
        """Test eta_a overrides eta whatever the key order."""
        for data in ({"eta": 0.8, "eta_a": 0.3}, {"eta_a": 0.3, "eta": 0.8}):
            cfg = load_run_config(self._write(data))
            self.assertEqual((cfg.params.eta_a, cfg.params.eta_b), (0.3, 0.8), data)

    def test_negative_seed_rejected(self):
        """Test the measurement seed must be non-negative."""
        with self.assertRaises(ValueError):
            load_run_config(overrides={"seed": -1})

    def test_unknown_key_rejected(self):
        """Test that unknown options are a configuration error."""
        with self.assertRaises(ValidationError):
            load_run_config(self._write({"omega_zero": 1.0}))

    def test_invalid_value_rejected(self):
        """Test that invalid values surface as ValueError."""
        with self.assertRaises(ValueError):
            load_run_config(overrides={"dt": -1.0})

    def test_non_object_rejected(self):
        """Test that the file must hold a JSON object."""
        with self.assertRaises(InvalidParametersError):
            load_run_config(self._write([1, 2, 3]))

    def test_malformed_json(self):
        """Test that malformed JSON is a ValueError."""
        path = self.dir / "broken.json"
        path.write_text("{not json")
        with self.assertRaises(ValueError):
            load_run_config(str(path))

    def test_missing_file(self):
        """Test that a missing file is an OSError."""
        with self.assertRaises(OSError):
            load_run_config(str(self.dir / "missing.json"))

    def test_grid_values(self):
        """Test grid strings and lists both resolve to arrays."""
        np.testing.assert_allclose(load_run_config(overrides={"grid": "0:0.3:4"}).grid_values(), [0.0, 0.1, 0.2, 0.3])
        np.testing.assert_allclose(load_run_config(self._write({"grid": [1, 2]})).grid_values(), [1.0, 2.0])
        self.assertIsNone(load_run_config().grid_values())


class TestParseGrid(unittest.TestCase):
    """Test cases for parse_grid."""

    def test_inclusive(self):
        """Test endpoints are included."""
        grid = parse_grid("0.05:1.5:30")
        self.assertEqual(len(grid), 30)
        self.assertAlmostEqual(grid[0], 0.05)
        self.assertAlmostEqual(grid[-1], 1.5)

    def test_malformed(self):
        """Test malformed grids are rejected."""
        for text in ("0:1", "a:b:c", "0:1:0"):
            with self.assertRaises(InvalidParametersError, msg=text):
                parse_grid(text)


class TestThreadLimit(unittest.TestCase):
    """Test cases for the sweep thread cap."""

    def test_default(self):
        """Test the default cap."""
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(get_thread_limit(), min(4, os.cpu_count() or 1))

    def test_env_value(self):
        """Test a positive integer is honored."""
        with mock.patch.dict(os.environ, {THREADS_ENV: "2"}):
            self.assertEqual(get_thread_limit(), 2)

    def test_invalid_env_value(self):
        """Test invalid values are configuration errors."""
        for raw in ("0", "-3", "many"):
            with mock.patch.dict(os.environ, {THREADS_ENV: raw}):
                with self.assertRaises(InvalidParametersError, msg=raw):
                    get_thread_limit()


if __name__ == '__main__':
    unittest.main()
