"""Sample parsed expressions onto an energy grid."""

import logging
from dataclasses import dataclass

import numpy as np

from commutclass.errors import InvalidInputError
from commutclass.expr.parser import Expr, Number, evaluate_array, parse, variables
from commutclass.scattering.algebra import (
    EnergyGrid,
    KernelTag,
    OperatorKernel,
    StateFunctional,
    commutator_kernel,
    evolve_kernel,
    pair,
)

logger = logging.getLogger(__name__)

ZERO = Number(0j)


def _sample_diagonal(e_diag: Expr, grid: EnergyGrid) -> np.ndarray:
    if "Ep" in variables(e_diag):
        raise InvalidInputError("A diagonal profile may only depend on E, not Ep")
    return evaluate_array(e_diag, grid.nodes)


def _sample_offdiagonal(e_offdiag: Expr | None, grid: EnergyGrid) -> np.ndarray:
    if e_offdiag is None:
        return np.zeros((grid.m, grid.m), dtype=np.complex128)
    nodes = grid.nodes
    return evaluate_array(e_offdiag, nodes[:, None], nodes[None, :])


def sample(
    e_diag: Expr,
    e_offdiag: Expr | None,
    grid: EnergyGrid,
    tag: KernelTag = KernelTag.FREE,
) -> OperatorKernel:
    """Sample d(E) and K(E, Ep) at the grid nodes; an absent K is zero.

    Raises:
        InvalidInputError: If the diagonal expression mentions Ep.
        ExprEvaluationError: If a sample is not finite.
    """
    return OperatorKernel(grid, tag, _sample_diagonal(e_diag, grid), _sample_offdiagonal(e_offdiag, grid))


def sample_functional(
    e_diag: Expr | None,
    e_offdiag: Expr | None,
    grid: EnergyGrid,
    tag: KernelTag = KernelTag.FREE,
) -> StateFunctional:
    """Sample rho(E) and rho(E, Ep); absent parts are zero."""
    rho_d = _sample_diagonal(e_diag or ZERO, grid)
    return StateFunctional(grid, tag, rho_d, _sample_offdiagonal(e_offdiag, grid))


def _parse_optional(text: str | None) -> Expr | None:
    return parse(text) if text else None


@dataclass(frozen=True)
class ScatterProblem:
    """Parsed profiles for rho, O1 and O2."""

    rho_diag: Expr | None = None
    rho_offdiag: Expr | None = None
    o1_diag: Expr | None = None
    o1_offdiag: Expr | None = None
    o2_diag: Expr | None = None
    o2_offdiag: Expr | None = None

    @classmethod
    def from_text(
        cls,
        rho_diag: str | None = None,
        rho_offdiag: str | None = None,
        o1_diag: str | None = None,
        o1_offdiag: str | None = None,
        o2_diag: str | None = None,
        o2_offdiag: str | None = None,
    ) -> "ScatterProblem":
        return cls(
            rho_diag=_parse_optional(rho_diag),
            rho_offdiag=_parse_optional(rho_offdiag),
            o1_diag=_parse_optional(o1_diag),
            o1_offdiag=_parse_optional(o1_offdiag),
            o2_diag=_parse_optional(o2_diag),
            o2_offdiag=_parse_optional(o2_offdiag),
        )

    def build(
        self, grid: EnergyGrid, tag: KernelTag = KernelTag.FREE
    ) -> tuple[StateFunctional, OperatorKernel, OperatorKernel]:
        rho = sample_functional(self.rho_diag, self.rho_offdiag, grid, tag)
        o1 = sample(self.o1_diag or ZERO, self.o1_offdiag, grid, tag)
        o2 = sample(self.o2_diag or ZERO, self.o2_offdiag, grid, tag)
        return rho, o1, o2


def commutator_value(
    problem: ScatterProblem, grid: EnergyGrid, t: float, tag: KernelTag = KernelTag.FREE
) -> complex:
    rho, o1, o2 = problem.build(grid, tag)
    return pair(rho, commutator_kernel(evolve_kernel(o1, t), evolve_kernel(o2, t)))


def refinement_gap(problem: ScatterProblem, grid: EnergyGrid, t: float, tag: KernelTag = KernelTag.FREE) -> float:
    """|value on M cells - value on 2M cells| of (rho | [O1(t), O2(t)]) at one time.

    t must be within the Nyquist bound of the coarse grid.
    """
    coarse = commutator_value(problem, grid, t, tag)
    fine = commutator_value(problem, grid.refined(), t, tag)
    gap = abs(coarse - fine)
    logger.debug(f"Refinement gap at t={t:.6g}: {gap:.3e} (M={grid.m} vs {2 * grid.m})")
    return gap
