"""Formal bra-ket algebra over the 2N-dimensional Gamow space.

Vectors and operators are coefficient tables over the formal basis
{|D_1), |G_1), ..., |D_N), |G_N)}. Composition contracts adjacent symbols
with the Krein pseudometric (the Gram rule), so (G_i|D_j) = delta_ij while
(D_i|D_j) = (G_i|G_j) = 0. Tables are stored as dense coefficient arrays
indexed by basis position; the arrays are never interpreted as concrete
vectors (see ``time_reversal`` for the concrete representation through B).
"""

import cmath
import math
from collections.abc import Mapping
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from commutclass.errors import InvalidInputError

# Coefficients below this magnitude are dropped after composition
PRUNE_TOLERANCE = 1e-14


class KetKind(StrEnum):
    """Decaying or growing Gamow symbol."""

    D = "D"
    G = "G"


@dataclass(frozen=True, order=True)
class KetSymbol:
    """A formal basis symbol |D_i) or |G_i)."""

    index: int
    kind: KetKind

    def __post_init__(self) -> None:
        if self.index < 1:
            raise InvalidInputError(f"Symbol index must be >= 1, got {self.index}")

    @property
    def position(self) -> int:
        """Position in the basis ordering D_1, G_1, D_2, G_2, ..."""
        return 2 * (self.index - 1) + (0 if self.kind == KetKind.D else 1)

    @classmethod
    def from_position(cls, position: int) -> "KetSymbol":
        return cls(position // 2 + 1, KetKind.D if position % 2 == 0 else KetKind.G)

    @classmethod
    def parse(cls, text: str) -> "KetSymbol":
        """Parse a symbol written as ``D3`` or ``G1``."""
        text = text.strip()
        if len(text) < 2 or text[0] not in ("D", "G") or not text[1:].isdigit():
            raise InvalidInputError(f"Invalid Gamow symbol '{text}' (expected e.g. D1 or G2)")
        return cls(int(text[1:]), KetKind(text[0]))

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def d_ket(index: int) -> KetSymbol:
    """The decaying symbol D_index."""
    return KetSymbol(index, KetKind.D)


def g_ket(index: int) -> KetSymbol:
    """The growing symbol G_index."""
    return KetSymbol(index, KetKind.G)


def basis(n: int) -> list[KetSymbol]:
    """The 2N basis symbols in D_1, G_1, ..., D_N, G_N order."""
    _require_size(n)
    return [KetSymbol.from_position(p) for p in range(2 * n)]


def _require_size(n: int) -> None:
    if n < 1:
        raise InvalidInputError(f"Number of resonances must be >= 1, got {n}")


def _require_symbol(symbol: KetSymbol, n: int) -> None:
    if symbol.index > n:
        raise InvalidInputError(f"Symbol {symbol} does not belong to a system of {n} resonance(s)")


def _prune(values: np.ndarray) -> np.ndarray:
    return np.where(np.abs(values) < PRUNE_TOLERANCE, 0, values)


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.complex128)
    values.flags.writeable = False
    return values


def gram(a: KetSymbol, b: KetSymbol, n: int | None = None) -> complex:
    """Pseudometric pairing of two basis symbols.

    Args:
        a: Left symbol.
        b: Right symbol.
        n: Optional system size; both symbols must belong to it.

    Returns:
        1 when the symbols share an index and differ in kind, 0 otherwise.
    """
    if n is not None:
        _require_symbol(a, n)
        _require_symbol(b, n)
    return 1 + 0j if a.index == b.index and a.kind != b.kind else 0j


def gram_matrix(n: int) -> np.ndarray:
    """The pseudometric A: block diagonal with [[0, 1], [1, 0]] blocks."""
    _require_size(n)
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class MetricPair:
    """The pseudometric A and its square root B (B @ B == A)."""

    a: np.ndarray
    b: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0] // 2


def build_metric(n: int) -> MetricPair:
    """Build the pseudometric and the block square root chosen for it."""
    _require_size(n)
    half = math.sqrt(2) / 2
    # Principal branch: (-i)^{1/2} = e^{-i pi/4}
    block = cmath.exp(-1j * math.pi / 4) * np.array([[1j * half, half], [half, 1j * half]])
    b = np.kron(np.eye(n), block)
    a = gram_matrix(n)
    a.flags.writeable = False
    b.flags.writeable = False
    return MetricPair(a=a, b=b)


class FormalVector:
    """A vector in the Gamow space as coefficients over the formal basis."""

    __slots__ = ("n", "_values")

    def __init__(self, n: int, values: np.ndarray) -> None:
        _require_size(n)
        values = _frozen(values)
        if values.shape != (2 * n,):
            raise InvalidInputError(f"Expected {2 * n} coefficients, got shape {values.shape}")
        self.n = n
        self._values = values

    @classmethod
    def zero(cls, n: int) -> "FormalVector":
        return cls(n, np.zeros(2 * n, dtype=np.complex128))

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Mapping[KetSymbol, complex]) -> "FormalVector":
        """Build a vector from a symbol -> amplitude mapping (absent symbols are 0)."""
        values = np.zeros(2 * n, dtype=np.complex128)
        for symbol, value in coeffs.items():
            _require_symbol(symbol, n)
            values[symbol.position] += value
        return cls(n, values)

    @classmethod
    def ket(cls, symbol: KetSymbol, n: int, coeff: complex = 1) -> "FormalVector":
        """coeff * |symbol)."""
        return cls.from_coeffs(n, {symbol: coeff})

    @property
    def coeffs(self) -> dict[KetSymbol, complex]:
        """Nonzero coefficients keyed by symbol."""
        return {KetSymbol.from_position(int(p)): complex(self._values[p]) for p in np.flatnonzero(self._values)}

    def to_array(self) -> np.ndarray:
        return self._values.copy()

    def __getitem__(self, symbol: KetSymbol) -> complex:
        _require_symbol(symbol, self.n)
        return complex(self._values[symbol.position])

    def __add__(self, other: "FormalVector") -> "FormalVector":
        _require_same_size(self, other)
        return FormalVector(self.n, self._values + other._values)

    def __sub__(self, other: "FormalVector") -> "FormalVector":
        _require_same_size(self, other)
        return FormalVector(self.n, self._values - other._values)

    def __neg__(self) -> "FormalVector":
        return FormalVector(self.n, -self._values)

    def __mul__(self, scalar: complex) -> "FormalVector":
        return FormalVector(self.n, scalar * self._values)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._values, other._values))

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "FormalVector", atol: float = 1e-12) -> bool:
        _require_same_size(self, other)
        return bool(np.max(np.abs(self._values - other._values), initial=0.0) <= atol)

    def __repr__(self) -> str:
        terms = ", ".join(f"{s}: {v:.6g}" for s, v in self.coeffs.items())
        return f"FormalVector(n={self.n}, {{{terms}}})"


class GamowOperator:
    """A linear combination of dyads |a)(b| over the formal basis.

    The first symbol of each pair is the ket side, the second the bra side.
    """

    __slots__ = ("n", "_values")

    def __init__(self, n: int, values: np.ndarray) -> None:
        _require_size(n)
        values = _frozen(values)
        if values.shape != (2 * n, 2 * n):
            raise InvalidInputError(f"Expected a {2 * n}x{2 * n} coefficient table, got shape {values.shape}")
        self.n = n
        self._values = values

    @classmethod
    def zero(cls, n: int) -> "GamowOperator":
        return cls(n, np.zeros((2 * n, 2 * n), dtype=np.complex128))

    @classmethod
    def from_coeffs(cls, n: int, coeffs: Mapping[tuple[KetSymbol, KetSymbol], complex]) -> "GamowOperator":
        """Build an operator from a (ket, bra) -> coefficient mapping."""
        values = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        for (ket, bra), value in coeffs.items():
            _require_symbol(ket, n)
            _require_symbol(bra, n)
            values[ket.position, bra.position] += value
        return cls(n, values)

    @classmethod
    def dyad(cls, ket: KetSymbol, bra: KetSymbol, n: int, coeff: complex = 1) -> "GamowOperator":
        """coeff * |ket)(bra|."""
        return cls.from_coeffs(n, {(ket, bra): coeff})

    @property
    def coeffs(self) -> dict[tuple[KetSymbol, KetSymbol], complex]:
        """Nonzero coefficients keyed by (ket, bra)."""
        rows, cols = np.nonzero(self._values)
        return {
            (KetSymbol.from_position(int(r)), KetSymbol.from_position(int(c))): complex(self._values[r, c])
            for r, c in zip(rows, cols, strict=True)
        }

    def support(self) -> set[tuple[KetSymbol, KetSymbol]]:
        return set(self.coeffs)

    def max_norm(self) -> float:
        """Largest coefficient magnitude in the table."""
        return float(np.max(np.abs(self._values), initial=0.0))

    def to_array(self) -> np.ndarray:
        return self._values.copy()

    def __getitem__(self, pair: tuple[KetSymbol, KetSymbol]) -> complex:
        ket, bra = pair
        _require_symbol(ket, self.n)
        _require_symbol(bra, self.n)
        return complex(self._values[ket.position, bra.position])

    def __add__(self, other: "GamowOperator") -> "GamowOperator":
        _require_same_size(self, other)
        return GamowOperator(self.n, self._values + other._values)

    def __sub__(self, other: "GamowOperator") -> "GamowOperator":
        _require_same_size(self, other)
        return GamowOperator(self.n, self._values - other._values)

    def __neg__(self) -> "GamowOperator":
        return GamowOperator(self.n, -self._values)

    def __mul__(self, scalar: complex) -> "GamowOperator":
        return GamowOperator(self.n, scalar * self._values)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GamowOperator):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._values, other._values))

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "GamowOperator", atol: float = 1e-12) -> bool:
        _require_same_size(self, other)
        return bool(np.max(np.abs(self._values - other._values), initial=0.0) <= atol)

    def __repr__(self) -> str:
        terms = ", ".join(f"|{k})({b}|: {v:.6g}" for (k, b), v in self.coeffs.items())
        return f"GamowOperator(n={self.n}, {{{terms}}})"


def _require_same_size(*items: FormalVector | GamowOperator) -> None:
    sizes = {item.n for item in items}
    if len(sizes) > 1:
        raise InvalidInputError(f"Mismatched system sizes: {sorted(sizes)}")


def pseudo_inner(psi: FormalVector, phi: FormalVector) -> complex:
    """Krein pseudo-scalar product (psi|phi), antilinear in psi."""
    _require_same_size(psi, phi)
    a = gram_matrix(psi.n)
    return complex(np.conj(psi.to_array()) @ a @ phi.to_array())


def compose(o1: GamowOperator, o2: GamowOperator) -> GamowOperator:
    """Product O1 O2 with the bra of O1 contracted against the ket of O2 by the Gram rule."""
    _require_same_size(o1, o2)
    a = gram_matrix(o1.n)
    return GamowOperator(o1.n, _prune(o1.to_array() @ a @ o2.to_array()))


def apply(o: GamowOperator, v: FormalVector) -> FormalVector:
    """Action O|v) under the Gram rule."""
    _require_same_size(o, v)
    a = gram_matrix(o.n)
    return FormalVector(o.n, _prune(o.to_array() @ a @ v.to_array()))


def adjoint(o: GamowOperator) -> GamowOperator:
    """Formal dagger: swaps ket and bra of every dyad and conjugates its coefficient."""
    return GamowOperator(o.n, np.conj(o.to_array().T))


def identity_op(n: int) -> GamowOperator:
    """Sum over i of |D_i)(G_i| + |G_i)(D_i|."""
    return GamowOperator(n, gram_matrix(n).astype(np.complex128))


def random_operator(n: int, rng: np.random.Generator, scale: float = 1.0) -> GamowOperator:
    """Operator with independent complex Gaussian coefficients on every dyad."""
    shape = (2 * n, 2 * n)
    return GamowOperator(n, scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))


def random_vector(n: int, rng: np.random.Generator) -> FormalVector:
    return FormalVector(n, rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n))
