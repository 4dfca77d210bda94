"""Hamiltonians, evolution families and commutator decay on the Gamow space."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from commutclass.errors import InvalidInputError
from commutclass.gamow.krein import (
    GamowOperator,
    KetSymbol,
    adjoint,
    compose,
    identity_op,
)
from commutclass.models.resonance import EvolutionFamily, HamiltonianVariant, Resonance, ScanMode
from commutclass.parallel import map_ordered

logger = logging.getLogger(__name__)

# Norms at or below this are excluded from the log-linear rate fit
FIT_FLOOR = 1e-13

# Default scan window is [0, WINDOW_LIFETIMES / Gamma_min]
WINDOW_LIFETIMES = 10.0
DEFAULT_SAMPLES = 64


def _require_resonances(resonances: Sequence[Resonance]) -> int:
    if not resonances:
        raise InvalidInputError("At least one resonance is required")
    return len(resonances)


def _require_matching(o: GamowOperator, resonances: Sequence[Resonance]) -> None:
    if o.n != len(resonances):
        raise InvalidInputError(f"Operator acts on {o.n} resonance(s) but {len(resonances)} were given")


def _diagonal_dyads(n: int, ket_side: Sequence[complex], bra_side: Sequence[complex]) -> GamowOperator:
    """Sum over j of ket_side[j] |D_j)(G_j| + bra_side[j] |G_j)(D_j|."""
    values = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for j in range(n):
        values[2 * j, 2 * j + 1] = ket_side[j]
        values[2 * j + 1, 2 * j] = bra_side[j]
    return GamowOperator(n, values)


def build_hamiltonian(
    resonances: Sequence[Resonance],
    variant: HamiltonianVariant = HamiltonianVariant.HERMITIAN,
) -> GamowOperator:
    """Truncated spectral decomposition of the Hamiltonian (background term dropped).

    Args:
        resonances: Resonance poles z_i.
        variant: TRUNCATED (sum z_i |D_i)(G_i|), TRUNCATED_DAGGER (sum z_i* |G_i)(D_i|)
            or HERMITIAN (both).

    Returns:
        The Hamiltonian as a Gamow operator.
    """
    n = _require_resonances(resonances)
    poles = [r.pole for r in resonances]
    conjugates = [r.conjugate_pole for r in resonances]
    zeros = [0j] * n
    match variant:
        case HamiltonianVariant.TRUNCATED:
            return _diagonal_dyads(n, poles, zeros)
        case HamiltonianVariant.TRUNCATED_DAGGER:
            return _diagonal_dyads(n, zeros, conjugates)
        case HamiltonianVariant.HERMITIAN:
            return _diagonal_dyads(n, poles, conjugates)
    raise InvalidInputError(f"Unknown Hamiltonian variant: {variant}")


def operator_power(o: GamowOperator, n: int) -> GamowOperator:
    """n-fold Gram-rule product of O with itself; n = 0 gives the identity."""
    if n < 0:
        raise InvalidInputError(f"Power must be >= 0, got {n}")
    result = identity_op(o.n)
    for _ in range(n):
        result = compose(result, o)
    return result


def evolution_operator(resonances: Sequence[Resonance], family: EvolutionFamily, t: float) -> GamowOperator:
    """Evolution operator U(t) of the given family.

    DECAYING: sum e^{-itz_j} |D_j)(G_j|. GROWING: sum e^{-itz_j*} |G_j)(D_j|.
    FULL: both terms. ASYMMETRIC: sum e^{-itz_j} |D_j)(G_j| + e^{+itz_j*} |G_j)(D_j|,
    which is its own adjoint for every t.
    """
    n = _require_resonances(resonances)
    decaying = [complex(np.exp(-1j * t * r.pole)) for r in resonances]
    zeros = [0j] * n
    match family:
        case EvolutionFamily.DECAYING:
            return _diagonal_dyads(n, decaying, zeros)
        case EvolutionFamily.GROWING:
            return _diagonal_dyads(n, zeros, [complex(np.exp(-1j * t * r.conjugate_pole)) for r in resonances])
        case EvolutionFamily.FULL:
            return _diagonal_dyads(n, decaying, [complex(np.exp(-1j * t * r.conjugate_pole)) for r in resonances])
        case EvolutionFamily.ASYMMETRIC:
            # e^{+itz*} is the conjugate of e^{-itz} for real t; computing it that way keeps U = U^dagger exact
            return _diagonal_dyads(n, decaying, [u.conjugate() for u in decaying])
    raise InvalidInputError(f"Unknown evolution family: {family}")


def heisenberg_evolve(
    o: GamowOperator,
    resonances: Sequence[Resonance],
    family: EvolutionFamily,
    t: float,
) -> GamowOperator:
    """Heisenberg picture O(t) = U^dagger(t) O U(t)."""
    _require_matching(o, resonances)
    u = evolution_operator(resonances, family, t)
    return compose(adjoint(u), compose(o, u))


def commutator(o1: GamowOperator, o2: GamowOperator) -> GamowOperator:
    """[O1, O2] = O1 O2 - O2 O1 under the Gram rule."""
    return compose(o1, o2) - compose(o2, o1)


def fit_decay_rate(times: Sequence[float], norms: Sequence[float]) -> float | None:
    """Least-squares slope of log(norm) against t.

    Samples with norm <= FIT_FLOOR are skipped. Returns None when fewer than two
    usable samples remain (for instance an identically zero commutator).
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(norms, dtype=float)
    usable = y > FIT_FLOOR
    if np.count_nonzero(usable) < 2:
        return None
    slope, _intercept = np.polyfit(t[usable], np.log(y[usable]), 1)
    return float(slope)


@dataclass(frozen=True)
class DecayScanResult:
    """Commutator norms sampled over time."""

    times: tuple[float, ...]
    norms: tuple[float, ...]
    fitted_rate: float | None
    family: EvolutionFamily
    mode: ScanMode
    # Per-dyad coefficient magnitudes over time, for dyads nonzero at some sample
    envelopes: dict[tuple[KetSymbol, KetSymbol], tuple[float, ...]] = field(default_factory=dict)

    @property
    def log_norms(self) -> tuple[float, ...]:
        return tuple(math.log(v) if v > 0 else -math.inf for v in self.norms)


def default_times(resonances: Sequence[Resonance], samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Sample times on [0, 10 / Gamma_min]."""
    _require_resonances(resonances)
    gamma_min = min(r.width for r in resonances)
    return np.linspace(0.0, WINDOW_LIFETIMES / gamma_min, samples)


def decay_scan(
    o1: GamowOperator,
    o2: GamowOperator,
    resonances: Sequence[Resonance],
    family: EvolutionFamily,
    times: Sequence[float],
    mode: ScanMode = ScanMode.COMMUTE_THEN_EVOLVE,
) -> DecayScanResult:
    """Track the max-coefficient norm of the commutator over time.

    Args:
        o1: First operator.
        o2: Second operator.
        resonances: Resonances defining the evolution.
        family: Evolution family (ASYMMETRIC shows the decay).
        times: Strictly increasing sample times.
        mode: EVOLVE_THEN_COMMUTE computes [O1(t), O2(t)];
            COMMUTE_THEN_EVOLVE computes ([O1, O2])(t).

    Returns:
        DecayScanResult with norms, per-dyad envelopes and the fitted log-slope.
    """
    _require_matching(o1, resonances)
    _require_matching(o2, resonances)
    sample_times = [float(t) for t in times]
    if any(b <= a for a, b in zip(sample_times, sample_times[1:], strict=False)):
        raise InvalidInputError("Scan times must be strictly increasing")

    initial = commutator(o1, o2)

    def at(t: float) -> np.ndarray:
        if mode == ScanMode.COMMUTE_THEN_EVOLVE:
            evolved = heisenberg_evolve(initial, resonances, family, t)
        else:
            evolved = commutator(
                heisenberg_evolve(o1, resonances, family, t),
                heisenberg_evolve(o2, resonances, family, t),
            )
        return np.abs(evolved.to_array())

    tables = map_ordered(at, sample_times)
    norms = tuple(float(np.max(table, initial=0.0)) for table in tables)

    envelopes: dict[tuple[KetSymbol, KetSymbol], tuple[float, ...]] = {}
    if tables:
        stacked = np.stack(tables)
        rows, cols = np.nonzero(np.max(stacked, axis=0))
        for r, c in zip(rows, cols, strict=True):
            key = (KetSymbol.from_position(int(r)), KetSymbol.from_position(int(c)))
            envelopes[key] = tuple(float(v) for v in stacked[:, r, c])

    rate = fit_decay_rate(sample_times, norms)
    if rate is None:
        logger.warning("Commutator vanishes on the whole window; fitted rate is undefined")
    logger.debug(f"Decay scan family={family} mode={mode} samples={len(sample_times)} rate={rate}")

    return DecayScanResult(
        times=tuple(sample_times),
        norms=norms,
        fitted_rate=rate,
        family=family,
        mode=mode,
        envelopes=envelopes,
    )


def survival_probability(
    resonances: Sequence[Resonance],
    j: int,
    family: EvolutionFamily,
    t: float,
) -> float:
    """Non-decay probability |a_j(t)|^2 of the decaying Gamow vector, t >= 0.

    a_j(t) is the (D_j, G_j) coefficient of U(t), so the result is e^{-t Gamma_j}.
    """
    if family == EvolutionFamily.GROWING:
        raise InvalidInputError("The growing family has no decaying amplitude; use growing_survival_probability")
    if t < 0:
        raise InvalidInputError(f"Survival probability needs t >= 0, got {t}")
    if not 1 <= j <= len(resonances):
        raise InvalidInputError(f"Resonance index {j} out of range 1..{len(resonances)}")
    u = evolution_operator(resonances, family, t)
    amplitude = u.to_array()[2 * (j - 1), 2 * (j - 1) + 1]
    return float(abs(amplitude) ** 2)


def growing_survival_probability(resonances: Sequence[Resonance], j: int, t: float) -> float:
    """|b_j(t)|^2 for the growing Gamow vector, t <= 0; equals e^{t Gamma_j}."""
    if t > 0:
        raise InvalidInputError(f"Growing survival probability needs t <= 0, got {t}")
    if not 1 <= j <= len(resonances):
        raise InvalidInputError(f"Resonance index {j} out of range 1..{len(resonances)}")
    u = evolution_operator(resonances, EvolutionFamily.GROWING, t)
    amplitude = u.to_array()[2 * (j - 1) + 1, 2 * (j - 1)]
    return float(abs(amplitude) ** 2)
