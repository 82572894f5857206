"""
Utils package for the NOON-passage simulator.

Exports the parameter model, basis and state types, run configuration and
error classes.
"""

from utils.config import RunConfig, get_thread_limit, load_run_config
from utils.errors import (
    CapacityExceededError,
    DegenerateDarkStateError,
    DegenerateGapError,
    DegeneratePulseError,
    InvalidParametersError,
    NumericalFailureError,
    PassageError,
    ProtocolOrderError,
    StepTooLargeError,
)
from utils.models import BasisLabel, StateVector, SystemParams

__all__ = [
    'BasisLabel',
    'CapacityExceededError',
    'DegenerateDarkStateError',
    'DegenerateGapError',
    'DegeneratePulseError',
    'InvalidParametersError',
    'NumericalFailureError',
    'PassageError',
    'ProtocolOrderError',
    'RunConfig',
    'StateVector',
    'StepTooLargeError',
    'SystemParams',
    'get_thread_limit',
    'load_run_config',
]
