"""
Command-line front end.

Commands write CSV (curves) or JSON (protocol transcripts); plotting is left
to external tools. Exit codes: 0 success, 2 configuration error, 3 I/O
error, 4 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from dynamics.evolve import evolve, transfer_probability
from fidelity.fiber_loss import COUPLING_SWEEP, LOSS_SWEEP, NOON_SCALING, SweepPreset, sweep
from hamiltonian.build_hamiltonian import BuildOptions
from protocol.noon_protocol import run_protocol
from pulses.gaussian_pulses import pulse_table
from spectral.dark_states import dark_state_overlaps, spectrum_table
from utils.config import RunConfig, load_run_config
from utils.models import BASIS_SIZE, BasisLabel, StateVector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
FLOAT_FORMAT = "%.12g"

DEFAULT_OUTPUTS = {
    "pulses": "pulses.csv",
    "simulate": "trajectory.csv",
    "spectrum": "spectrum.csv",
    "fidelity-sweep": "fidelity_sweep.csv",
    "noon-scaling": "noon_scaling.csv",
}


def _output_path(cfg: RunConfig, command: str) -> Path:
    return Path(cfg.out or DEFAULT_OUTPUTS[command])


def _build_options(cfg: RunConfig) -> BuildOptions:
    return BuildOptions(include_stark=cfg.stark, include_decay=cfg.decay)


# ==================== COMMANDS ====================


def cmd_pulses(cfg: RunConfig) -> Path:
    """Normalized pulse shapes over [0, T]."""
    path = _output_path(cfg, "pulses")
    pulse_table(cfg.params, cfg.points or 1001).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    print(f"✓ Wrote pulse shapes to {path}")
    return path


def cmd_simulate(cfg: RunConfig) -> Path:
    """Integrate from (PSI1 + PSI6)/sqrt(2) and write populations per sample."""
    psi0 = StateVector.superposition(BasisLabel.PSI1, BasisLabel.PSI6)
    traj = evolve(psi0, cfg.params, _build_options(cfg), dt=cfg.dt, sample_every=cfg.sample_every)

    frame = pd.DataFrame(traj.populations(), columns=[f"p{k}" for k in range(1, BASIS_SIZE + 1)])
    frame.insert(0, "t", traj.times)
    frame["norm2"] = traj.norms2()
    frame["dark_overlap"] = dark_state_overlaps(traj, cfg.params, strict=False)

    path = _output_path(cfg, "simulate")
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    print(f"✓ Wrote {len(frame)} samples to {path} (final transfer {transfer_probability(traj):.6f})")
    return path


def cmd_spectrum(cfg: RunConfig) -> Path:
    """Instantaneous eigenvalues over [0, T]."""
    path = _output_path(cfg, "spectrum")
    table = spectrum_table(cfg.params, cfg.points or 201, BuildOptions(include_stark=cfg.stark))
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    print(f"✓ Wrote spectrum to {path}")
    return path


def _run_sweep(cfg: RunConfig, preset: SweepPreset, command: str) -> Path:
    grid = cfg.grid_values()
    table = sweep(
        cfg.params,
        cfg.variable or preset.variable,
        grid if grid is not None else preset.grid,
        overlays=cfg.overlays if cfg.overlays is not None else preset.overlays,
        overlay_variable=cfg.overlay_variable or preset.overlay_variable,
        rule=cfg.rule,
    )
    csv_path, sidecar = table.to_csv(str(_output_path(cfg, command)))
    print(f"✓ Wrote {len(table.frame)} points to {csv_path} (parameters in {sidecar})")
    if not table.failures.empty:
        print(f"⚠ {len(table.failures)} points failed; see the error column")
    return csv_path


def cmd_fidelity_sweep(cfg: RunConfig) -> Path:
    """Round fidelity against gamma_f (default) or eta."""
    preset = {"eta": COUPLING_SWEEP, "n": NOON_SCALING}.get(cfg.variable, LOSS_SWEEP)
    return _run_sweep(cfg, preset, "fidelity-sweep")


def cmd_noon_scaling(cfg: RunConfig) -> Path:
    """NOON fidelity against the number of rounds."""
    return _run_sweep(cfg, NOON_SCALING, "noon-scaling")


def cmd_protocol(cfg: RunConfig) -> Optional[Path]:
    """Run the full protocol and emit its JSON transcript."""
    result = run_protocol(cfg.n or 10, cfg.params, seed=cfg.seed, mode=cfg.mode, dt=cfg.dt)
    text = result.to_json()
    if cfg.out is None:
        print(text)
        return None
    path = Path(cfg.out)
    path.write_text(text + "\n")
    print(f"✓ Wrote transcript to {path} ({result.outcome.resulting_state}, est. fidelity {result.est_fidelity:.6f})")
    return path


COMMANDS: Dict[str, Callable[[RunConfig], Any]] = {
    "pulses": cmd_pulses,
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "fidelity-sweep": cmd_fidelity_sweep,
    "noon-scaling": cmd_noon_scaling,
    "protocol": cmd_protocol,
}


# ==================== ARGUMENTS ====================


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with parameters and options")
    common.add_argument("--out", help="output path")
    common.add_argument("--verbose", action="store_true", help="log progress at INFO")

    physics = common.add_argument_group("parameters")
    physics.add_argument("--omega0", type=float, help="pulse amplitude (g)")
    physics.add_argument("--delta", type=float, help="detuning (g)")
    physics.add_argument("--eta", type=float, help="fiber coupling, both fibers (g)")
    physics.add_argument("--gamma-f", dest="gamma_f", type=float, help="fiber decay rate (g)")
    physics.add_argument("--tau", dest="tau_pulse", type=float, help="pulse waist (1/g)")
    physics.add_argument("--total-time", dest="total_time", type=float, help="window T (1/g)")

    run = common.add_argument_group("run options")
    run.add_argument("--dt", type=float, help="integrator step (1/g)")
    run.add_argument("--sample-every", dest="sample_every", type=int, help="keep every k-th step")
    run.add_argument("--points", type=int, help="samples for tables over [0, T]")
    run.add_argument("--seed", type=int, help="measurement seed")
    run.add_argument("--n", type=int, help="atoms per branch")
    run.add_argument("--mode", choices=("analytic", "simulated"), help="protocol round model")
    run.add_argument("--grid", help="sweep grid start:stop:steps")
    run.add_argument("--variable", choices=("gamma_f", "eta", "n"), help="swept variable")
    run.add_argument("--overlay-variable", dest="overlay_variable", choices=("omega0", "gamma_f", "eta"))
    run.add_argument("--overlays", type=_float_list, help="overlay values v1,v2,...")
    run.add_argument("--rule", choices=("compound", "linear"), help="n-round compounding rule")
    run.add_argument("--decay", action="store_true", default=None, help="add loss terms")
    run.add_argument("--stark", action="store_true", default=None, help="add Stark shifts")

    parser = argparse.ArgumentParser(
        prog="noon-passage",
        description="Adiabatic-passage NOON-state simulator",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, handler in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=handler.__doc__.splitlines()[0])
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {"command", "config", "verbose"}
    return {key: value for key, value in vars(args).items() if key not in skip}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and map failures onto exit codes."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format=LOG_FORMAT)

    try:
        cfg = load_run_config(args.config, _overrides(args))
        COMMANDS[args.command](cfg)
    except ValueError as exc:
        logger.error(f"Configuration error: {exc}")
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, RuntimeError) as exc:
        logger.error(f"Numerical failure: {exc}")
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK
