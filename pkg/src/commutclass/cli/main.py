"""Argument parsing and dispatch for the commutclass command line."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

from pydantic import BaseModel, ValidationError

from commutclass.cli.commands import list_checks, run_gamow, run_scatter, run_selfcheck, run_timereversal
from commutclass.cli.output import emit
from commutclass.config import get_settings, load_config, merge_overrides
from commutclass.errors import CheckFailedError, CommutclassError, InvalidInputError
from commutclass.models.resonance import EvolutionFamily, ScanMode
from commutclass.models.run import GamowRunConfig, ScatterRunConfig, SelfcheckRunConfig, TimeReversalRunConfig
from commutclass.scattering.algebra import KernelTag

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as InvalidInputError so they share exit code 1."""

    def error(self, message: str) -> NoReturn:
        raise InvalidInputError(f"{self.prog}: {message}")


def _resonance_arg(text: str) -> dict[str, float]:
    parts = text.split(",")
    try:
        energy, width = (float(p) for p in parts)
    except ValueError as e:
        raise InvalidInputError(f"--resonance expects E_R,Gamma, got '{text}'") from e
    return {"E_R": energy, "Gamma": width}


def _grid_arg(text: str) -> dict[str, float | int]:
    parts = text.split(",")
    try:
        e_max, m = parts
        return {"E_max": float(e_max), "M": int(m)}
    except ValueError as e:
        raise InvalidInputError(f"--grid expects E_max,M, got '{text}'") from e


def _tmax_arg(text: str) -> float | str:
    if text == "auto":
        return text
    try:
        return float(text)
    except ValueError as e:
        raise InvalidInputError(f"--tmax expects a number or 'auto', got '{text}'") from e


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "-v", "--verbose", action="store_true", default=default if suppress else False, help="Enable debug logging"
    )
    parser.add_argument("--config", type=Path, default=default, help="JSON run configuration; flags override it")
    parser.add_argument("--out", type=Path, default=default, help="Output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="commutclass",
        description="Commutator decay, time reversal and weak limits in resonance and scattering models.",
    )
    _add_global_flags(parser, suppress=False)
    # Global flags are accepted after the subcommand too; SUPPRESS keeps an absent flag from resetting them
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    subparsers = parser.add_subparsers(dest="command", required=True)

    gamow = subparsers.add_parser("gamow", help="Commutator decay scan on the Gamow space", parents=[common])
    gamow.add_argument(
        "--resonance",
        action="append",
        type=str,
        metavar="E_R,GAMMA",
        help="Resonance pole (can be specified multiple times)",
    )
    gamow.add_argument("--family", choices=[f.value for f in EvolutionFamily], help="Evolution family")
    gamow.add_argument("--mode", choices=[m.value for m in ScanMode], help="Order of commutation and evolution")
    gamow.add_argument("--tmax", type=float, help="End of the time window (default: 10 / Gamma_min)")
    gamow.add_argument("--samples", type=int, help="Number of sample times (default: 64)")
    gamow.add_argument("--o1", help="First operator, e.g. 'D1G1=1; G1D1=0.5i' (default: random)")
    gamow.add_argument("--o2", help="Second operator (default: random)")
    gamow.add_argument("--seed", type=int, help="Seed for random operators (default: 0)")

    scatter = subparsers.add_parser(
        "scatter", help="Decay of (rho | [O1(t), O2(t)]) on an energy grid", parents=[common]
    )
    scatter.add_argument("--grid", type=str, metavar="E_MAX,M", help="Energy cutoff and number of cells")
    scatter.add_argument("--tag", choices=[t.value for t in KernelTag], help="Kernel algebra (default: free)")
    for name in ("rho", "o1", "o2"):
        scatter.add_argument(f"--{name}-diag", metavar="EXPR", help=f"Diagonal profile of {name} in E")
        scatter.add_argument(f"--{name}-offdiag", metavar="EXPR", help=f"Off-diagonal kernel of {name} in E, Ep")
    scatter.add_argument("--tmax", type=str, help="End of the time window or 'auto' (Nyquist bound)")
    scatter.add_argument("--samples", type=int, help="Number of sample times (default: 64)")
    scatter.add_argument(
        "--refine", action="store_true", default=None, help="Compare the final value against a grid with 2M cells"
    )
    scatter.add_argument("--dump-dir", type=Path, help="Write the sampled kernels as JSON into this directory")

    timereversal = subparsers.add_parser(
        "timereversal", help="Time reversal comparison for one resonance", parents=[common]
    )
    timereversal.add_argument("--a", help="Coefficient of the decaying column (constant expression)")
    timereversal.add_argument("--b", help="Coefficient of the growing column (constant expression)")
    timereversal.add_argument("--resonance", type=str, metavar="E_R,GAMMA", help="Resonance pole")
    timereversal.add_argument("--max-n", type=int, help="Check the D/G swap for N up to this (default: 5)")

    selfcheck = subparsers.add_parser("selfcheck", help="Run the numerical invariant suite", parents=[common])
    selfcheck.add_argument("--seed", type=int, help="Seed for randomized checks (default: 0)")
    selfcheck.add_argument("--list", action="store_true", help="List the checks and exit")
    selfcheck.add_argument("--inject-fault", metavar="NAME", help="Add 1 to the residual of the named check")

    return parser


def _gamow_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "resonances": [_resonance_arg(r) for r in args.resonance] if args.resonance else None,
        "family": args.family,
        "mode": args.mode,
        "window": {"t_max": args.tmax, "samples": args.samples},
        "o1": args.o1,
        "o2": args.o2,
        "seed": args.seed,
    }


def _scatter_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "grid": _grid_arg(args.grid) if args.grid else None,
        "tag": args.tag,
        "rho_diag": args.rho_diag,
        "rho_offdiag": args.rho_offdiag,
        "o1_diag": args.o1_diag,
        "o1_offdiag": args.o1_offdiag,
        "o2_diag": args.o2_diag,
        "o2_offdiag": args.o2_offdiag,
        "window": {"t_max": _tmax_arg(args.tmax) if args.tmax else None, "samples": args.samples},
        "refine": args.refine,
        "dump_dir": args.dump_dir,
    }


def _timereversal_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "a": args.a,
        "b": args.b,
        "resonance": _resonance_arg(args.resonance) if args.resonance else None,
        "max_n": args.max_n,
    }


def _selfcheck_overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {"seed": args.seed, "inject_fault": args.inject_fault}


COMMANDS: dict[str, tuple[type[BaseModel], Callable[[argparse.Namespace], dict[str, Any]], Callable[[Any], None]]] = {
    "gamow": (GamowRunConfig, _gamow_overrides, run_gamow),
    "scatter": (ScatterRunConfig, _scatter_overrides, run_scatter),
    "timereversal": (TimeReversalRunConfig, _timereversal_overrides, run_timereversal),
    "selfcheck": (SelfcheckRunConfig, _selfcheck_overrides, run_selfcheck),
}


def build_config(args: argparse.Namespace) -> BaseModel:
    """Validate file values overlaid with flag values for the chosen subcommand."""
    model, overrides, _run = COMMANDS[args.command]
    base = load_config(args.config) if args.config else {}
    merged = merge_overrides(base, {**overrides(args), "out": args.out})
    return model.model_validate(merged)


def format_validation_error(error: ValidationError) -> str:
    """One line per problem, naming the offending field."""
    problems = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "config"
        problems.append(f"{location}: {item['msg']}")
    return "invalid configuration: " + "; ".join(problems)


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose or get_settings().debug else logging.INFO,
        format="%(asctime)s %(levelname)-8s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def run_command(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run the subcommand and map errors to exit codes."""
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        if args.command == "selfcheck" and args.list:
            emit(list_checks(), args.out)
            return EXIT_OK
        config = build_config(args)
        _model, _overrides, run = COMMANDS[args.command]
        run(config)
    except CheckFailedError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValidationError as e:
        print(f"Error: {format_validation_error(e)}", file=sys.stderr)
        return EXIT_INVALID
    except (CommutclassError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK
