"""Fiber-loss fidelity estimates and parameter sweeps."""

from fidelity.fiber_loss import (
    COUPLING_SWEEP,
    LOSS_SWEEP,
    NOON_SCALING,
    SweepTable,
    fiber_loss_integral,
    loss_integrand,
    noon_fidelity,
    round_fidelity,
    sweep,
)

__all__ = [
    'COUPLING_SWEEP',
    'LOSS_SWEEP',
    'NOON_SCALING',
    'SweepTable',
    'fiber_loss_integral',
    'loss_integrand',
    'noon_fidelity',
    'round_fidelity',
    'sweep',
]
