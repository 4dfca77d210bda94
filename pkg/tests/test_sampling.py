"""Tests for sampling expressions onto energy grids."""

import numpy as np
import pytest

from commutclass.errors import ExprEvaluationError, ExprSyntaxError, InvalidInputError
from commutclass.expr.parser import parse
from commutclass.expr.sampling import (
    ScatterProblem,
    commutator_value,
    refinement_gap,
    sample,
    sample_functional,
)
from commutclass.scattering.algebra import EnergyGrid, KernelTag, make_grid, nyquist_tmax, zero_kernel


class TestSample:
    """Tests for sampling operator kernels."""

    def test_diagonal_at_nodes(self):
        """d(E) is evaluated at the midpoints."""
        grid = make_grid(4.0, 4)
        o = sample(parse("E"), None, grid)
        np.testing.assert_allclose(o.d, [0.5, 1.5, 2.5, 3.5])
        assert o.is_diagonal

    def test_offdiagonal_at_node_pairs(self):
        """K(E, Ep) is evaluated at every pair of nodes, row index E."""
        grid = make_grid(4.0, 4)
        o = sample(parse("0"), parse("E - Ep"), grid)
        nodes = grid.nodes
        np.testing.assert_allclose(o.k, nodes[:, None] - nodes[None, :])

    def test_tag_carried(self):
        """The requested tag is attached to the kernel."""
        o = sample(parse("1"), None, make_grid(1.0, 2), KernelTag.IN)
        assert o.tag == KernelTag.IN

    def test_diagonal_must_not_use_ep(self):
        """d depends on E alone."""
        with pytest.raises(InvalidInputError):
            sample(parse("E + Ep"), None, make_grid(1.0, 2))

    def test_non_finite_sample(self):
        """A singular profile reports the failing node."""
        with pytest.raises(ExprEvaluationError) as exc_info:
            sample(parse("1"), parse("1 / (E - Ep)"), make_grid(1.0, 2))
        assert exc_info.value.node == "(1.0 / (E - Ep))"


class TestSampleFunctional:
    """Tests for sampling state functionals."""

    def test_absent_parts_are_zero(self):
        """Missing rho parts sample to zero."""
        rho = sample_functional(None, None, make_grid(1.0, 3))
        assert not np.any(rho.rho_d)
        assert not np.any(rho.rho_k)

    def test_parts(self):
        """rho(E) and rho(E, Ep) are sampled like kernels."""
        grid = make_grid(2.0, 2)
        rho = sample_functional(parse("2*E"), parse("E*Ep"), grid)
        np.testing.assert_allclose(rho.rho_d, [1.0, 3.0])
        np.testing.assert_allclose(rho.rho_k, [[0.25, 0.75], [0.75, 2.25]])


class TestScatterProblem:
    """Tests for the rho, O1, O2 bundle."""

    def test_from_text_parses(self):
        """Text fields are parsed; empty ones stay absent."""
        problem = ScatterProblem.from_text(o1_diag="E", o2_offdiag="")
        assert problem.o1_diag == parse("E")
        assert problem.o2_offdiag is None

    def test_absent_operator_is_zero(self):
        """An operator with no profiles is the zero kernel."""
        grid = make_grid(2.0, 4)
        _rho, _o1, o2 = ScatterProblem.from_text(o1_diag="E").build(grid)
        assert o2 == zero_kernel(grid)

    def test_bad_text_raises(self):
        """Parse errors surface from from_text."""
        with pytest.raises(ExprSyntaxError):
            ScatterProblem.from_text(o1_diag="E +")

    def test_commutator_value_nonzero_at_zero(self, gaussian_grid: EnergyGrid, gaussian_problem: ScatterProblem):
        """The asymmetric Gaussian profiles do not commute under rho at t = 0."""
        assert abs(commutator_value(gaussian_problem, gaussian_grid, 0.0)) > 1e-3

    def test_refinement_gap_small(self, gaussian_grid: EnergyGrid, gaussian_problem: ScatterProblem):
        """Doubling M changes the value at the Nyquist bound by under 1e-3 of the t = 0 value."""
        initial = abs(commutator_value(gaussian_problem, gaussian_grid, 0.0))
        gap = refinement_gap(gaussian_problem, gaussian_grid, nyquist_tmax(gaussian_grid))
        assert gap <= 1e-3 * initial
