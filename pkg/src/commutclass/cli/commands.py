"""Subcommand runners: each takes a validated run configuration and emits its output."""

import logging
import re

import numpy as np

from commutclass.cli.output import complex_to_json, emit, format_float, render_csv, render_json
from commutclass.errors import CheckFailedError, InvalidInputError
from commutclass.expr.parser import evaluate, parse, variables
from commutclass.expr.sampling import ScatterProblem, refinement_gap
from commutclass.gamow.evolution import decay_scan, default_times
from commutclass.gamow.krein import GamowOperator, KetSymbol, random_operator
from commutclass.gamow.time_reversal import invariance_gap, swap_residual
from commutclass.models.run import GamowRunConfig, ScatterRunConfig, SelfcheckRunConfig, TimeReversalRunConfig
from commutclass.scattering.algebra import (
    asymptotic_direction,
    commutator_kernel,
    decay_curve,
    make_grid,
    nyquist_tmax,
    pair,
    weak_limit,
)
from commutclass.scattering.io import dump_kernel
from commutclass.selfcheck import CHECKS, format_table, require_passing, run_checks

logger = logging.getLogger(__name__)

SWAP_TOLERANCE = 1e-12

_DYAD_KEY = re.compile(r"^([DG]\d+)([DG]\d+)$")


def constant_value(text: str, field: str) -> complex:
    """Evaluate a constant expression such as ``0.5i`` or ``exp(-1)``."""
    expr = parse(text)
    if variables(expr):
        raise InvalidInputError(f"{field}: '{text}' must not depend on E or Ep")
    return evaluate(expr)


def parse_operator_spec(text: str, n: int, field: str) -> GamowOperator:
    """Build an operator from ``"D1G1=expr; G2D1=expr"``.

    Each key names the ket then the bra symbol; values are constant expressions.
    Repeated keys add up.
    """
    coeffs: dict[tuple[KetSymbol, KetSymbol], complex] = {}
    for term in text.split(";"):
        term = term.strip()
        if not term:
            continue
        key, sep, value = term.partition("=")
        match = _DYAD_KEY.match(key.strip())
        if not sep or match is None:
            raise InvalidInputError(f"{field}: expected terms like 'D1G1=1', got '{term}'")
        try:
            pair_key = (KetSymbol.parse(match.group(1)), KetSymbol.parse(match.group(2)))
        except InvalidInputError as e:
            raise InvalidInputError(f"{field}: {e}") from e
        coeffs[pair_key] = coeffs.get(pair_key, 0j) + constant_value(value.strip(), field)
    try:
        return GamowOperator.from_coeffs(n, coeffs)
    except InvalidInputError as e:
        raise InvalidInputError(f"{field}: {e}") from e


def run_gamow(config: GamowRunConfig) -> None:
    resonances = config.resonances
    n = len(resonances)
    rng = np.random.default_rng(config.seed)
    o1 = parse_operator_spec(config.o1, n, "o1") if config.o1 else random_operator(n, rng)
    o2 = parse_operator_spec(config.o2, n, "o2") if config.o2 else random_operator(n, rng)

    if config.window.t_max is None:
        times = default_times(resonances, config.window.samples)
    else:
        times = np.linspace(0.0, config.window.t_max, config.window.samples)
    logger.info(f"Scanning {config.family} family over {len(times)} samples up to t={times[-1]:.6g}")

    result = decay_scan(o1, o2, resonances, config.family, times, config.mode)
    rate = result.fitted_rate
    footer = {
        "family": str(config.family),
        "mode": str(config.mode),
        "resonances": " ".join(f"{format_float(r.energy)},{format_float(r.width)}" for r in resonances),
        "fitted_rate": "undefined" if rate is None else format_float(rate),
    }
    text = render_csv(
        ["t", "norm", "log_norm"],
        zip(result.times, result.norms, result.log_norms, strict=True),
        footer,
    )
    emit(text, config.out)


def _ratio(numerator: float, denominator: float) -> str:
    return "undefined" if denominator == 0 else format_float(numerator / denominator)


def run_scatter(config: ScatterRunConfig) -> None:
    grid = make_grid(config.grid.e_max, config.grid.m)
    problem = ScatterProblem.from_text(
        rho_diag=config.rho_diag,
        rho_offdiag=config.rho_offdiag,
        o1_diag=config.o1_diag,
        o1_offdiag=config.o1_offdiag,
        o2_diag=config.o2_diag,
        o2_offdiag=config.o2_offdiag,
    )
    rho, o1, o2 = problem.build(grid, config.tag)

    bound = nyquist_tmax(grid)
    t_max = bound if config.window.t_max == "auto" else float(config.window.t_max)
    direction = asymptotic_direction(config.tag)
    times = direction * np.linspace(0.0, t_max, config.window.samples)
    logger.info(f"Sampling {len(times)} times toward t={direction * t_max:.6g} (Nyquist bound {bound:.6g})")

    points = decay_curve(rho, o1, o2, times)
    limit = pair(rho, commutator_kernel(weak_limit(o1), weak_limit(o2)))
    magnitudes = [p.magnitude for p in points]
    initial, final, peak = magnitudes[0], magnitudes[-1], max(magnitudes)

    footer = {
        "tag": str(config.tag),
        "grid": f"{format_float(grid.e_max)},{grid.m}",
        "nyquist_tmax": format_float(bound),
        "weak_limit": f"{format_float(limit.real)},{format_float(limit.imag)}",
        "initial_abs": format_float(initial),
        "peak_abs": format_float(peak),
        "final_abs": format_float(final),
        "final_over_initial": _ratio(final, initial),
        "final_over_peak": _ratio(final, peak),
    }
    if config.refine:
        gap = refinement_gap(problem, grid, float(times[-1]), config.tag)
        footer["refinement_gap"] = format_float(gap)
        footer["refinement_gap_relative"] = _ratio(gap, initial)

    if config.dump_dir is not None:
        config.dump_dir.mkdir(parents=True, exist_ok=True)
        dump_kernel(o1, config.dump_dir / "o1.json")
        dump_kernel(o2, config.dump_dir / "o2.json")
        dump_kernel(commutator_kernel(o1, o2), config.dump_dir / "commutator.json")
        logger.info(f"Dumped kernels to {config.dump_dir}")

    text = render_csv(
        ["t", "re", "im", "abs"],
        ([p.t, p.value.real, p.value.imag, p.magnitude] for p in points),
        footer,
    )
    emit(text, config.out)


def run_timereversal(config: TimeReversalRunConfig) -> None:
    a = constant_value(config.a, "a")
    b = constant_value(config.b, "b")
    report = invariance_gap(a, b, config.resonance)

    swap_checks = []
    for n in range(1, config.max_n + 1):
        residual = swap_residual(n)
        swap_checks.append({"n": n, "residual": residual, "passed": residual <= SWAP_TOLERANCE})

    (pairings,) = report.pairings
    document = {
        "a": complex_to_json(a),
        "b": complex_to_json(b),
        "resonance": {"E_R": config.resonance.energy, "Gamma": config.resonance.width},
        "lhs": complex_to_json(report.lhs),
        "rhs": complex_to_json(report.rhs),
        "gap": complex_to_json(report.gap),
        "gap_abs": abs(report.gap),
        "invariant": report.is_invariant,
        "pairings": {name: complex_to_json(value) for name, value in pairings.as_dict().items()},
        "swap_checks": swap_checks,
    }
    emit(render_json(document), config.out)

    for entry in swap_checks:
        if not entry["passed"]:
            raise CheckFailedError(f"time_reversal_swap[n={entry['n']}]", entry["residual"], SWAP_TOLERANCE)


def list_checks() -> str:
    width = max(len(name) for name in CHECKS)
    return "".join(f"{name:<{width}}  {c.description}\n" for name, c in CHECKS.items())


def run_selfcheck(config: SelfcheckRunConfig) -> None:
    results = run_checks(seed=config.seed, inject_fault=config.inject_fault)
    emit(format_table(results) + "\n", config.out)
    require_passing(results)
