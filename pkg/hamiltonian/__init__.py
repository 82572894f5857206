"""Ten-state Hamiltonian and its Fock-space reference."""

from hamiltonian.build_hamiltonian import BuildOptions, HamiltonianComponents, HamiltonianMatrix, build
from hamiltonian.fock_oracle import FockOracle, build_fock_oracle

__all__ = ['BuildOptions', 'FockOracle', 'HamiltonianComponents', 'HamiltonianMatrix', 'build', 'build_fock_oracle']
