from protocol.noon_protocol import (
    AncillaLevel,
    MeasurementOutcome,
    NoonRegister,
    ProtocolResult,
    RoundEvaluator,
    adiabatic_round,
    hadamard,
    init_register,
    measure,
    reset_pulse,
    run_protocol,
)

__all__ = [
    'AncillaLevel',
    'MeasurementOutcome',
    'NoonRegister',
    'ProtocolResult',
    'RoundEvaluator',
    'adiabatic_round',
    'hadamard',
    'init_register',
    'measure',
    'reset_pulse',
    'run_protocol',
]
