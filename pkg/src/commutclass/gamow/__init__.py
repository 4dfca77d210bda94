"""The Gamow-space model: Krein algebra, evolution families and time reversal."""

from commutclass.gamow.evolution import (
    DecayScanResult,
    build_hamiltonian,
    commutator,
    decay_scan,
    default_times,
    evolution_operator,
    fit_decay_rate,
    growing_survival_probability,
    heisenberg_evolve,
    operator_power,
    survival_probability,
)
from commutclass.gamow.krein import (
    FormalVector,
    GamowOperator,
    KetKind,
    KetSymbol,
    MetricPair,
    adjoint,
    apply,
    build_metric,
    compose,
    gram,
    identity_op,
    pseudo_inner,
)
from commutclass.gamow.time_reversal import (
    ConcreteVector,
    InvarianceReport,
    apply_t,
    concrete_gamow_vectors,
    invariance_gap,
    invariance_gap_multi,
    resonance_pairings,
    swap_residual,
)

__all__ = [
    "ConcreteVector",
    "DecayScanResult",
    "FormalVector",
    "GamowOperator",
    "InvarianceReport",
    "KetKind",
    "KetSymbol",
    "MetricPair",
    "adjoint",
    "apply",
    "apply_t",
    "build_hamiltonian",
    "build_metric",
    "commutator",
    "compose",
    "concrete_gamow_vectors",
    "decay_scan",
    "default_times",
    "evolution_operator",
    "fit_decay_rate",
    "gram",
    "growing_survival_probability",
    "heisenberg_evolve",
    "identity_op",
    "invariance_gap",
    "invariance_gap_multi",
    "operator_power",
    "pseudo_inner",
    "resonance_pairings",
    "survival_probability",
    "swap_residual",
]
