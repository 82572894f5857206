"""Gaussian pulse schedule and effective Rabi frequencies."""

from pulses.gaussian_pulses import (
    PulseId,
    boundary_ratio_check,
    effective_rabi,
    gaussian_pulse,
    pulse_area,
    pulse_table,
)

__all__ = ['PulseId', 'boundary_ratio_check', 'effective_rabi', 'gaussian_pulse', 'pulse_area', 'pulse_table']
