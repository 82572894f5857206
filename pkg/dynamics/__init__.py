"""Time integration of the ten-state Schrodinger equation."""

from dynamics.evolve import Trajectory, evolve, populations, survival_fidelity, transfer_probability

__all__ = ['Trajectory', 'evolve', 'populations', 'survival_fidelity', 'transfer_probability']
