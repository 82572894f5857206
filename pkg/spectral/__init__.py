"""Analytic dark states, numeric spectra and the adiabaticity metric."""

from spectral.dark_states import (
    SpectrumSnapshot,
    adiabaticity_metric,
    analytic_dark_left,
    analytic_dark_pair,
    analytic_dark_right,
    dark_state_overlaps,
    fiber_population,
    instantaneous_spectrum,
    reduced_dark,
    spectrum_table,
)

__all__ = [
    'SpectrumSnapshot',
    'adiabaticity_metric',
    'analytic_dark_left',
    'analytic_dark_pair',
    'analytic_dark_right',
    'dark_state_overlaps',
    'fiber_population',
    'instantaneous_spectrum',
    'reduced_dark',
    'spectrum_table',
]
