"""Time reversal on concrete Gamow vectors and the non-invariance computation.

Concrete vectors live in C^{2N} with the orthonormal basis of the formal
symbols. The Gamow vectors are |D_i) = B e_{2i-1} and |G_i) = B^dagger e_{2i}.
The pairings below are the closed forms for a single resonance, with
i^{1/2} = e^{i pi/4}; where sqrt(-1) = -i is used to merge i^{1/2} (-i)^{1/2}
factors the merged factor is 1.
"""

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from commutclass.errors import InvalidInputError
from commutclass.gamow.krein import build_metric
from commutclass.models.resonance import Resonance

SQRT_I = cmath.exp(1j * math.pi / 4)
HALF_SQRT2 = math.sqrt(2) / 2


class ConcreteVector:
    """A 2N-component complex column."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[complex] | np.ndarray) -> None:
        values = np.array(entries, dtype=np.complex128)
        if values.ndim != 1 or values.size == 0 or values.size % 2:
            raise InvalidInputError(f"Concrete vectors need an even, non-zero length; got shape {values.shape}")
        values.flags.writeable = False
        self.entries = values

    @property
    def n(self) -> int:
        return self.entries.size // 2

    def allclose(self, other: "ConcreteVector", atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(np.max(np.abs(self.entries - other.entries)) <= atol)

    def __mul__(self, scalar: complex) -> "ConcreteVector":
        return ConcreteVector(scalar * self.entries)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"ConcreteVector({self.entries.tolist()})"


def concrete_gamow_vectors(n: int, i: int) -> tuple[ConcreteVector, ConcreteVector]:
    """The concrete pair (B e_{2i-1}, B^dagger e_{2i}) for resonance i of n.

    For n = 1 both columns coincide, which is why the algebra itself is kept formal.
    """
    if not 1 <= i <= n:
        raise InvalidInputError(f"Resonance index {i} out of range 1..{n}")
    b = build_metric(n).b
    return ConcreteVector(b[:, 2 * i - 2]), ConcreteVector(np.conj(b.T)[:, 2 * i - 1])


def apply_t(v: ConcreteVector) -> ConcreteVector:
    """Antilinear time reversal: each block (x, y) maps to (conj(y), conj(x))."""
    blocks = v.entries.reshape(-1, 2)
    return ConcreteVector(np.conj(blocks[:, ::-1]).reshape(-1))


@dataclass(frozen=True)
class ResonancePairings:
    """The single-resonance pairings used to compare (psi|H|psi) with (psi|THT|psi)."""

    d_psi: complex  # (psi^D|psi)
    psi_d: complex  # (psi|psi^D)
    d_t_psi: complex  # (psi^D|T|psi)
    psi_t_d: complex  # (psi|T|psi^D)

    @property
    def g_psi(self) -> complex:
        """(psi^G|psi), equal to (psi^D|psi)."""
        return self.d_psi

    @property
    def psi_g(self) -> complex:
        """(psi|psi^G), equal to (psi|psi^D)."""
        return self.psi_d

    @property
    def g_t_psi(self) -> complex:
        """(psi^G|T|psi), equal to (psi^D|T|psi)."""
        return self.d_t_psi

    @property
    def psi_t_g(self) -> complex:
        """(psi|T|psi^G), equal to (psi|T|psi^D)."""
        return self.psi_t_d

    def as_dict(self) -> dict[str, complex]:
        return {
            "(psi^D|psi)": self.d_psi,
            "(psi|psi^D)": self.psi_d,
            "(psi^D|T|psi)": self.d_t_psi,
            "(psi|T|psi^D)": self.psi_t_d,
        }


def resonance_pairings(a: complex, b: complex) -> ResonancePairings:
    """Pairings of |psi) = a B|psi^D> + b B^dagger|psi^G> with the Gamow vectors (N = 1)."""
    a_bar = complex(a).conjugate()
    b_bar = complex(b).conjugate()
    return ResonancePairings(
        d_psi=SQRT_I * (HALF_SQRT2 * b - 1j * HALF_SQRT2 * a),
        psi_d=SQRT_I * (HALF_SQRT2 * b_bar - 1j * HALF_SQRT2 * a_bar),
        d_t_psi=SQRT_I * (HALF_SQRT2 * a_bar - 1j * HALF_SQRT2 * b_bar),
        psi_t_d=SQRT_I * (HALF_SQRT2 * a_bar - 1j * HALF_SQRT2 * b_bar),
    )


@dataclass(frozen=True)
class InvarianceReport:
    """(psi|H|psi) against (psi|THT|psi); a nonzero gap means no time reversal invariance."""

    lhs: complex
    rhs: complex
    pairings: tuple[ResonancePairings, ...]

    @property
    def gap(self) -> complex:
        return self.lhs - self.rhs

    @property
    def is_invariant(self) -> bool:
        return self.gap == 0


def _pole(res: Resonance | complex) -> complex:
    return res.pole if isinstance(res, Resonance) else complex(res)


def invariance_gap(a: complex, b: complex, res: Resonance | complex) -> InvarianceReport:
    """Compare the expectation of H with that of THT for one resonance.

    Args:
        a: Coefficient of the decaying column.
        b: Coefficient of the growing column.
        res: Resonance, or a bare complex pole z (allows real z).
    """
    return invariance_gap_multi([a], [b], [res])


def invariance_gap_multi(
    a: Sequence[complex],
    b: Sequence[complex],
    resonances: Sequence[Resonance | complex],
) -> InvarianceReport:
    """Block-wise sum of the single-resonance comparison over N resonances."""
    if not resonances:
        raise InvalidInputError("At least one resonance is required")
    if not len(a) == len(b) == len(resonances):
        raise InvalidInputError(
            f"Need one (a, b) pair per resonance: got {len(a)} a, {len(b)} b, {len(resonances)} resonance(s)"
        )

    lhs = 0j
    rhs = 0j
    blocks = []
    for a_i, b_i, res in zip(a, b, resonances, strict=True):
        z = _pole(res)
        z_bar = z.conjugate()
        p = resonance_pairings(a_i, b_i)
        lhs += z * p.psi_d * p.g_psi + z_bar * p.psi_g * p.d_psi
        rhs += z_bar * p.psi_t_d * p.g_t_psi + z * p.psi_t_g * p.d_t_psi
        blocks.append(p)
    return InvarianceReport(lhs=lhs, rhs=rhs, pairings=tuple(blocks))


def swap_residual(n: int) -> float:
    """Largest deviation from T|D_i) = |G_i) and T|G_i) = |D_i) over all i."""
    worst = 0.0
    for i in range(1, n + 1):
        d, g = concrete_gamow_vectors(n, i)
        worst = max(
            worst,
            float(np.max(np.abs(apply_t(d).entries - g.entries))),
            float(np.max(np.abs(apply_t(g).entries - d.entries))),
        )
    return worst
