"""Tests for the Krein pseudometric and the formal Gamow algebra."""

import numpy as np
import pytest

from commutclass.errors import InvalidInputError
from commutclass.gamow.krein import (
    FormalVector,
    GamowOperator,
    KetKind,
    KetSymbol,
    adjoint,
    apply,
    basis,
    build_metric,
    compose,
    d_ket,
    g_ket,
    gram,
    gram_matrix,
    identity_op,
    pseudo_inner,
    random_operator,
    random_vector,
)


class TestKetSymbol:
    """Tests for basis symbols."""

    def test_positions_follow_basis_order(self):
        """D_i sits at 2(i-1), G_i at 2i-1."""
        assert d_ket(1).position == 0
        assert g_ket(1).position == 1
        assert d_ket(3).position == 4
        assert g_ket(3).position == 5

    def test_from_position_round_trip(self):
        """from_position inverts position."""
        for p in range(10):
            assert KetSymbol.from_position(p).position == p

    def test_parse(self):
        """Symbols parse from text like D3."""
        assert KetSymbol.parse("D3") == KetSymbol(3, KetKind.D)
        assert KetSymbol.parse(" G12 ") == g_ket(12)
        assert str(g_ket(2)) == "G2"

    @pytest.mark.parametrize("text", ["X1", "D", "D0", "G-1", "1D"])
    def test_parse_rejects_malformed(self, text: str):
        """Malformed symbols raise InvalidInputError."""
        with pytest.raises(InvalidInputError):
            KetSymbol.parse(text)

    def test_basis_order(self):
        """basis(n) lists D_1, G_1, ..., D_N, G_N."""
        assert [str(s) for s in basis(2)] == ["D1", "G1", "D2", "G2"]


class TestGram:
    """Tests for the pseudometric pairing table."""

    def test_pairing_table(self):
        """(D_i|G_j) = (G_i|D_j) = delta_ij, (D|D) = (G|G) = 0."""
        assert gram(d_ket(1), g_ket(1)) == 1
        assert gram(g_ket(2), d_ket(2)) == 1
        assert gram(d_ket(1), d_ket(1)) == 0
        assert gram(g_ket(1), g_ket(1)) == 0
        assert gram(d_ket(1), g_ket(2)) == 0

    def test_gram_rejects_symbol_outside_system(self):
        """A symbol index above n is rejected when n is given."""
        with pytest.raises(InvalidInputError):
            gram(d_ket(3), g_ket(1), n=2)

    def test_gram_matrix_blocks(self):
        """A is block diagonal with [[0, 1], [1, 0]]."""
        a = gram_matrix(2)
        expected = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        np.testing.assert_array_equal(a, expected)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_square_root(self, n: int):
        """B @ B reproduces A."""
        metric = build_metric(n)
        assert np.max(np.abs(metric.b @ metric.b - metric.a)) < 1e-12
        assert metric.n == n

    def test_size_zero_rejected(self):
        """N must be at least 1."""
        with pytest.raises(InvalidInputError):
            gram_matrix(0)


class TestPseudoInner:
    """Tests for the Krein pseudo-scalar product."""

    def test_basis_vectors(self):
        """Kets pair by the Gram rule."""
        d = FormalVector.ket(d_ket(1), 1)
        g = FormalVector.ket(g_ket(1), 1)
        assert pseudo_inner(d, g) == 1
        assert pseudo_inner(d, d) == 0

    def test_antilinear_in_first_argument(self):
        """(c psi|phi) = conj(c) (psi|phi)."""
        d = FormalVector.ket(d_ket(1), 1)
        g = FormalVector.ket(g_ket(1), 1)
        assert pseudo_inner(d * 2j, g) == -2j
        assert pseudo_inner(d, g * 2j) == 2j

    def test_conjugate_symmetry(self, rng: np.random.Generator):
        """(psi|phi) is the conjugate of (phi|psi)."""
        psi, phi = random_vector(3, rng), random_vector(3, rng)
        assert abs(pseudo_inner(psi, phi) - pseudo_inner(phi, psi).conjugate()) < 1e-12

    def test_size_mismatch(self):
        """Vectors from different system sizes cannot be paired."""
        with pytest.raises(InvalidInputError):
            pseudo_inner(FormalVector.zero(1), FormalVector.zero(2))


class TestCompose:
    """Tests for Gram-rule composition."""

    def test_dyad_product(self):
        """|D1)(G1| . |D1)(G1| = (G1|D1) |D1)(G1|."""
        dyad = GamowOperator.dyad(d_ket(1), g_ket(1), 1)
        assert compose(dyad, dyad) == dyad

    def test_orthogonal_dyads_vanish(self):
        """|D1)(G1| . |G1)(D1| = (G1|G1) |D1)(D1| = 0."""
        left = GamowOperator.dyad(d_ket(1), g_ket(1), 1)
        right = GamowOperator.dyad(g_ket(1), d_ket(1), 1)
        assert compose(left, right) == GamowOperator.zero(1)

    def test_identity_is_unit(self, rng: np.random.Generator):
        """identity_op composes as a two-sided unit, exactly."""
        o = random_operator(3, rng)
        assert compose(identity_op(3), o) == o
        assert compose(o, identity_op(3)) == o

    def test_identity_coefficients(self):
        """identity_op is sum |D_i)(G_i| + |G_i)(D_i|."""
        assert identity_op(2).support() == {
            (d_ket(1), g_ket(1)),
            (g_ket(1), d_ket(1)),
            (d_ket(2), g_ket(2)),
            (g_ket(2), d_ket(2)),
        }

    def test_associative(self, rng: np.random.Generator):
        """(O1 O2) O3 = O1 (O2 O3)."""
        o1, o2, o3 = (random_operator(2, rng) for _ in range(3))
        assert compose(compose(o1, o2), o3).allclose(compose(o1, compose(o2, o3)), atol=1e-10)

    def test_apply(self):
        """|D1)(G1| applied to |D1) gives |D1)."""
        op = GamowOperator.dyad(d_ket(1), g_ket(1), 1, coeff=3)
        assert apply(op, FormalVector.ket(d_ket(1), 1)) == FormalVector.ket(d_ket(1), 1, coeff=3)
        assert apply(op, FormalVector.ket(g_ket(1), 1)) == FormalVector.zero(1)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_apply_respects_composition(self, rng: np.random.Generator, n: int):
        """apply(O1 O2, v) = apply(O1, apply(O2, v))."""
        for _ in range(10):
            o1, o2 = random_operator(n, rng), random_operator(n, rng)
            v = random_vector(n, rng)
            assert apply(compose(o1, o2), v).allclose(apply(o1, apply(o2, v)), atol=1e-10)

    def test_small_coefficients_pruned(self):
        """Results below 1e-14 in magnitude are dropped."""
        tiny = GamowOperator.dyad(d_ket(1), g_ket(1), 1, coeff=1e-8)
        assert compose(tiny, tiny) == GamowOperator.zero(1)


class TestAdjoint:
    """Tests for the formal dagger."""

    def test_swaps_and_conjugates(self):
        """(c |D1)(G1|)^dagger = conj(c) |G1)(D1|."""
        op = GamowOperator.dyad(d_ket(1), g_ket(1), 1, coeff=1 + 2j)
        assert adjoint(op) == GamowOperator.dyad(g_ket(1), d_ket(1), 1, coeff=1 - 2j)

    def test_involution(self, rng: np.random.Generator):
        """Taking the adjoint twice gives back the operator."""
        o = random_operator(2, rng)
        assert adjoint(adjoint(o)) == o

    def test_reverses_products(self, rng: np.random.Generator):
        """(O1 O2)^dagger = O2^dagger O1^dagger."""
        o1, o2 = random_operator(2, rng), random_operator(2, rng)
        assert adjoint(compose(o1, o2)).allclose(compose(adjoint(o2), adjoint(o1)))


class TestOperatorValues:
    """Tests for operator construction and arithmetic."""

    def test_from_coeffs_accumulates(self):
        """Repeated keys add."""
        op = GamowOperator.from_coeffs(1, {(d_ket(1), g_ket(1)): 1})
        doubled = op + op
        assert doubled[d_ket(1), g_ket(1)] == 2
        assert (doubled - op) == op
        assert (-op)[d_ket(1), g_ket(1)] == -1

    def test_coefficients_read_only(self, rng: np.random.Generator):
        """to_array returns a copy; the operator cannot be mutated."""
        op = random_operator(1, rng)
        values = op.to_array()
        values[0, 0] = 99
        assert op[d_ket(1), d_ket(1)] != 99

    def test_shape_validated(self):
        """Coefficient tables must be 2N x 2N."""
        with pytest.raises(InvalidInputError):
            GamowOperator(2, np.zeros((2, 2)))

    def test_max_norm(self):
        """max_norm is the largest coefficient magnitude."""
        op = GamowOperator.from_coeffs(1, {(d_ket(1), g_ket(1)): 3j, (g_ket(1), g_ket(1)): -1})
        assert op.max_norm() == 3.0

    def test_unhashable(self):
        """Operators compare by value and are not hashable."""
        with pytest.raises(TypeError):
            hash(GamowOperator.zero(1))
