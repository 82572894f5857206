"""
Fock-space reference Hamiltonian.

Builds the same interaction on the full truncated tensor basis
    ancilla {fL, fR, gL, gR} x left atom {s, k} x right atom {s, k}
    x Fock(a1, a2l, a2r, a3, b_a, b_b; 0..n_max)
from ladder operators, without assuming the single-excitation subspace.
Restricting it to the ten basis labels must reproduce the hand-coded
10x10 matrix entry for entry.
"""

import logging
from threading import Lock
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp

from hamiltonian.build_hamiltonian import BuildOptions, stark_shifts
from pulses.gaussian_pulses import PulseId, effective_rabi
from utils.errors import CapacityExceededError, InvalidParametersError
from utils.models import BasisLabel, MODE_NAMES, SystemParams

logger = logging.getLogger(__name__)

MAX_PHOTONS = 2

ANCILLA_LEVELS = ("fL", "fR", "gL", "gR")
ATOM_LEVELS = ("s", "k")


# ==================== LOCAL OPERATORS ====================


def annihilation(n_max: int) -> sp.csr_matrix:
    """Truncated bosonic lowering operator on Fock states 0..n_max."""
    return sp.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), offsets=1, format="csr")


def transition(levels: Tuple[str, ...], to: str, frm: str) -> sp.csr_matrix:
    """Projector |to><frm| on a finite set of levels."""
    op = sp.lil_matrix((len(levels), len(levels)))
    op[levels.index(to), levels.index(frm)] = 1.0
    return op.tocsr()


class FockOperators:
    """Embedded ladder and transition operators for one photon cutoff."""

    def __init__(self, n_max: int):
        self.n_max = n_max
        self.dims: Tuple[int, ...] = (len(ANCILLA_LEVELS), 2, 2) + (n_max + 1,) * len(MODE_NAMES)
        self.dimension = int(np.prod(self.dims))

        a = annihilation(n_max)
        self.modes: Dict[str, sp.csr_matrix] = {
            name: self._embed({3 + k: a}) for k, name in enumerate(MODE_NAMES)
        }
        self.ancilla: Dict[Tuple[str, str], sp.csr_matrix] = {
            (to, frm): self._embed({0: transition(ANCILLA_LEVELS, to, frm)})
            for to in ANCILLA_LEVELS for frm in ANCILLA_LEVELS
        }
        self.left_atom = {
            (to, frm): self._embed({1: transition(ATOM_LEVELS, to, frm)})
            for to in ATOM_LEVELS for frm in ATOM_LEVELS
        }
        self.right_atom = {
            (to, frm): self._embed({2: transition(ATOM_LEVELS, to, frm)})
            for to in ATOM_LEVELS for frm in ATOM_LEVELS
        }

    def _embed(self, factors: Dict[int, sp.csr_matrix]) -> sp.csr_matrix:
        parts = [factors.get(k, sp.identity(d, format="csr")) for k, d in enumerate(self.dims)]
        return reduce(lambda left, right: sp.kron(left, right, format="csr"), parts)

    def number(self, mode: str) -> sp.csr_matrix:
        op = self.modes[mode]
        return (op.T @ op).tocsr()

    def index_of(self, label: BasisLabel) -> int:
        """Position of a basis label in the tensor basis."""
        state = label.state
        digits = (
            ANCILLA_LEVELS.index(state.ancilla),
            ATOM_LEVELS.index(state.left_atom),
            ATOM_LEVELS.index(state.right_atom),
        ) + state.photons
        return int(np.ravel_multi_index(digits, self.dims))


_operator_cache: Dict[int, FockOperators] = {}
_cache_lock = Lock()


def get_fock_operators(n_max: int) -> FockOperators:
    """Shared operator set for a cutoff, built once per process."""
    if n_max < 1:
        raise InvalidParametersError(f"photon cutoff must be >= 1, got {n_max}")
    if n_max > MAX_PHOTONS:
        raise CapacityExceededError(f"photon cutoff {n_max} exceeds the supported maximum {MAX_PHOTONS}")
    with _cache_lock:
        if n_max not in _operator_cache:
            ops = FockOperators(n_max)
            logger.debug(f"Built Fock operators: n_max={n_max}, dimension={ops.dimension}")
            _operator_cache[n_max] = ops
        return _operator_cache[n_max]


# ==================== ORACLE ====================


@dataclass(frozen=True)
class FockOracle:
    """Full-basis Hamiltonian plus the positions of the ten basis labels."""

    time: float
    n_max: int
    matrix: sp.csr_matrix
    label_indices: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def restrict(self) -> np.ndarray:
        """Dense 10x10 block on the basis labels, in label order."""
        idx = np.array(self.label_indices)
        return self.matrix[idx][:, idx].toarray()

    def closure_leak(self) -> float:
        """Largest matrix element linking a basis label to any other tensor state."""
        idx = np.array(self.label_indices)
        outside = np.setdiff1d(np.arange(self.dimension), idx)
        rows = self.matrix[idx][:, outside]
        return float(abs(rows).max()) if rows.nnz else 0.0


def build_fock_oracle(
    t: float,
    p: SystemParams,
    n_max: int = 1,
    opts: BuildOptions = BuildOptions(),
) -> FockOracle:
    """Assemble the interaction Hamiltonian on the truncated tensor basis.

    Args:
        t: evaluation time
        p: system parameters
        n_max: photon cutoff per mode (1 or 2)
        opts: Stark and decay switches, as for build()

    Returns:
        FockOracle with a CSR matrix of dimension 16 * (n_max + 1)^6
    """
    if not np.isfinite(t):
        raise InvalidParametersError(f"time must be finite, got {t}")
    ops = get_fock_operators(n_max)
    rabi = {xi: effective_rabi(t, xi, p) for xi in PulseId}

    terms: List[sp.csr_matrix] = [
        # ancilla: |f> -> |g> emitting into the central cavity modes
        rabi[PulseId.ONE] * (ops.ancilla[("gL", "fL")] @ ops.modes["a2l"].T),
        rabi[PulseId.ONE] * (ops.ancilla[("gR", "fR")] @ ops.modes["a2r"].T),
        # fibers couple the central modes to the outer cavities
        p.eta_a * (ops.modes["b_a"].T @ (ops.modes["a2l"] + ops.modes["a1"])),
        p.eta_b * (ops.modes["b_b"].T @ (ops.modes["a2r"] + ops.modes["a3"])),
        # outer atoms absorb the cavity photon |s> -> |k>
        rabi[PulseId.L] * (ops.left_atom[("k", "s")] @ ops.modes["a1"]),
        rabi[PulseId.R] * (ops.right_atom[("k", "s")] @ ops.modes["a3"]),
    ]
    matrix = reduce(lambda acc, term: acc + term + term.conj().T, terms, sp.csr_matrix((ops.dimension,) * 2))

    if opts.include_stark:
        shifts = stark_shifts(t, p)
        cavity_photons = sum(ops.number(mode) for mode in ("a1", "a2l", "a2r", "a3"))
        matrix = matrix + (
            shifts[BasisLabel.PSI1] * ops.ancilla[("fL", "fL")]
            + shifts[BasisLabel.PSI6] * ops.ancilla[("fR", "fR")]
            + shifts[BasisLabel.PSI2] * cavity_photons
            + shifts[BasisLabel.PSI5] * ops.left_atom[("k", "k")]
            + shifts[BasisLabel.PSI10] * ops.right_atom[("k", "k")]
        )

    if opts.include_decay:
        fiber_photons = ops.number("b_a") + ops.number("b_b")
        cavity_photons = sum(ops.number(mode) for mode in ("a1", "a2l", "a2r", "a3"))
        matrix = matrix - 0.5j * (p.gamma_f * fiber_photons + p.kappa_c * cavity_photons)

    label_indices = tuple(ops.index_of(label) for label in BasisLabel)
    return FockOracle(float(t), n_max, sp.csr_matrix(matrix, dtype=np.complex128), label_indices)
