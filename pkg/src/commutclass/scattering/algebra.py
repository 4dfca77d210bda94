"""Discretized algebra of operators compatible with H_0 (or H) on the energy half-line.

An operator is a diagonal function d(E) plus an off-diagonal kernel K(E, E'),
sampled at the midpoints of a uniform grid on [0, E_max]. The delta
normalization <E|E'> = delta(E - E') becomes 1/dE on coincident nodes, so the
dense matrix diag(d) + dE*K is an algebra homomorphism for ``product``.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from commutclass.errors import InvalidInputError, NyquistError
from commutclass.parallel import map_ordered

logger = logging.getLogger(__name__)

OBSERVABLE_TOLERANCE = 1e-10


class KernelTag(StrEnum):
    """Which algebra a kernel belongs to: A_0, A_- (in) or A_+ (out)."""

    FREE = "free"
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class EnergyGrid:
    """Midpoint grid with M cells on [0, E_max]."""

    e_max: float
    m: int

    @property
    def step(self) -> float:
        return self.e_max / self.m

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.m) + 0.5) * self.step

    def refined(self, factor: int = 2) -> "EnergyGrid":
        return make_grid(self.e_max, self.m * factor)


def make_grid(e_max: float, m: int) -> EnergyGrid:
    """Build the midpoint grid E_j = (j + 1/2) * E_max / M, j = 0..M-1."""
    if not math.isfinite(e_max) or e_max <= 0:
        raise InvalidInputError(f"E_max must be a positive finite number, got {e_max}")
    if m < 1:
        raise InvalidInputError(f"Number of cells M must be >= 1, got {m}")
    return EnergyGrid(e_max=float(e_max), m=int(m))


def _frozen(values: np.ndarray | Sequence, shape: tuple[int, ...], name: str) -> np.ndarray:
    array = np.array(values, dtype=np.complex128)
    if array.shape != shape:
        raise InvalidInputError(f"{name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError(f"{name} contains non-finite values")
    array.flags.writeable = False
    return array


class OperatorKernel:
    """An element of A_0 / A_in / A_out: diagonal part d and kernel K."""

    __slots__ = ("grid", "tag", "d", "k")

    def __init__(self, grid: EnergyGrid, tag: KernelTag, d: np.ndarray | Sequence, k: np.ndarray | Sequence) -> None:
        self.grid = grid
        self.tag = KernelTag(tag)
        self.d = _frozen(d, (grid.m,), "d")
        self.k = _frozen(k, (grid.m, grid.m), "K")

    @property
    def is_diagonal(self) -> bool:
        return not np.any(self.k)

    def _check(self, other: "OperatorKernel") -> None:
        _require_compatible(self.grid, self.tag, other.grid, other.tag)

    def __add__(self, other: "OperatorKernel") -> "OperatorKernel":
        self._check(other)
        return OperatorKernel(self.grid, self.tag, self.d + other.d, self.k + other.k)

    def __sub__(self, other: "OperatorKernel") -> "OperatorKernel":
        self._check(other)
        return OperatorKernel(self.grid, self.tag, self.d - other.d, self.k - other.k)

    def __mul__(self, scalar: complex) -> "OperatorKernel":
        return OperatorKernel(self.grid, self.tag, scalar * self.d, scalar * self.k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorKernel):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.tag == other.tag
            and bool(np.array_equal(self.d, other.d))
            and bool(np.array_equal(self.k, other.k))
        )

    __hash__ = None  # type: ignore[assignment]

    def allclose(self, other: "OperatorKernel", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(
            np.max(np.abs(self.d - other.d), initial=0.0) <= atol
            and np.max(np.abs(self.k - other.k), initial=0.0) <= atol
        )

    def __repr__(self) -> str:
        return f"OperatorKernel(tag={self.tag}, E_max={self.grid.e_max}, M={self.grid.m})"


class StateFunctional:
    """A functional rho(E), rho(E, E') acting on kernels by integration."""

    __slots__ = ("grid", "tag", "rho_d", "rho_k")

    def __init__(
        self, grid: EnergyGrid, tag: KernelTag, rho_d: np.ndarray | Sequence, rho_k: np.ndarray | Sequence
    ) -> None:
        self.grid = grid
        self.tag = KernelTag(tag)
        self.rho_d = _frozen(rho_d, (grid.m,), "rho_d")
        self.rho_k = _frozen(rho_k, (grid.m, grid.m), "rho_K")

    def __repr__(self) -> str:
        return f"StateFunctional(tag={self.tag}, E_max={self.grid.e_max}, M={self.grid.m})"


def _require_compatible(grid_a: EnergyGrid, tag_a: KernelTag, grid_b: EnergyGrid, tag_b: KernelTag) -> None:
    if grid_a != grid_b:
        raise InvalidInputError(f"Grid mismatch: {grid_a} vs {grid_b}")
    if tag_a != tag_b:
        raise InvalidInputError(f"Cannot mix '{tag_a}' and '{tag_b}' algebras")


def identity_kernel(grid: EnergyGrid, tag: KernelTag = KernelTag.FREE) -> OperatorKernel:
    """Unit of the algebra: d = 1, K = 0."""
    return OperatorKernel(grid, tag, np.ones(grid.m), np.zeros((grid.m, grid.m)))


def zero_kernel(grid: EnergyGrid, tag: KernelTag = KernelTag.FREE) -> OperatorKernel:
    return OperatorKernel(grid, tag, np.zeros(grid.m), np.zeros((grid.m, grid.m)))


def moller_retag(o: OperatorKernel, sign: KernelTag) -> OperatorKernel:
    """Map a free kernel to the in or out algebra.

    Conjugation by the Moller operator leaves the kernel functions unchanged in
    the scattering basis, so only the tag changes.
    """
    if o.tag != KernelTag.FREE:
        raise InvalidInputError(f"Only free kernels can be retagged, got '{o.tag}'")
    if sign == KernelTag.FREE:
        raise InvalidInputError("Retag target must be 'in' or 'out'")
    return OperatorKernel(o.grid, sign, o.d, o.k)


def product(o1: OperatorKernel, o2: OperatorKernel) -> OperatorKernel:
    """Algebra product.

    d = d1*d2 and K = d1(E) K2(E,E') + K1(E,E') d2(E') + dE * sum_w K1(E,w) K2(w,E').
    """
    _require_compatible(o1.grid, o1.tag, o2.grid, o2.tag)
    d = o1.d * o2.d
    k = o1.d[:, None] * o2.k + o1.k * o2.d[None, :] + o1.grid.step * (o1.k @ o2.k)
    return OperatorKernel(o1.grid, o1.tag, d, k)


def commutator_kernel(o1: OperatorKernel, o2: OperatorKernel) -> OperatorKernel:
    """[O1, O2]; the diagonal part is identically zero."""
    _require_compatible(o1.grid, o1.tag, o2.grid, o2.tag)
    forward = product(o1, o2)
    backward = product(o2, o1)
    # Diagonal parts commute pointwise
    return OperatorKernel(o1.grid, o1.tag, np.zeros(o1.grid.m), forward.k - backward.k)


def nyquist_tmax(grid: EnergyGrid) -> float:
    """Largest |t| for which e^{it(E_j - E_k)} is resolved by neighbouring nodes."""
    return math.pi / (4 * grid.step)


def _phases(grid: EnergyGrid, t: float) -> np.ndarray:
    nodes = grid.nodes
    return np.exp(1j * t * (nodes[:, None] - nodes[None, :]))


def evolve_kernel(o: OperatorKernel, t: float, allow_aliasing: bool = False) -> OperatorKernel:
    """Heisenberg evolution: d fixed, K(E, E') picks up e^{it(E - E')}.

    Raises:
        NyquistError: If |t| exceeds nyquist_tmax and allow_aliasing is False.
    """
    bound = nyquist_tmax(o.grid)
    if abs(t) > bound:
        if not allow_aliasing:
            raise NyquistError(t, bound)
        logger.warning(f"Evolving to t={t:.6g} beyond the Nyquist bound {bound:.6g}")
    return OperatorKernel(o.grid, o.tag, o.d, _phases(o.grid, t) * o.k)


def pair(rho: StateFunctional, o: OperatorKernel, t: float = 0.0) -> complex:
    """(rho|O(t)): sum rho_d d dE + sum e^{it(E_j - E_k)} rho_K K dE^2, without conjugation."""
    _require_compatible(rho.grid, rho.tag, o.grid, o.tag)
    step = o.grid.step
    diagonal = np.sum(rho.rho_d * o.d) * step
    weighted = rho.rho_k * o.k
    if t != 0:
        weighted = _phases(o.grid, t) * weighted
    return complex(diagonal + np.sum(weighted) * step**2)


def expectation(rho: StateFunctional, o: OperatorKernel, t: float = 0.0) -> complex:
    """pair normalized by the functional's value on the identity."""
    norm = pair(rho, identity_kernel(o.grid, o.tag))
    if norm == 0:
        raise InvalidInputError("Functional vanishes on the identity and cannot be normalized")
    return pair(rho, o, t) / norm


def weak_limit(o: OperatorKernel) -> OperatorKernel:
    """The t -> +/- infinity weak limit: the diagonal part alone."""
    return OperatorKernel(o.grid, o.tag, o.d, np.zeros((o.grid.m, o.grid.m)))


def is_observable(o: OperatorKernel, tol: float = OBSERVABLE_TOLERANCE) -> bool:
    """True iff d is real and K(E, E') = conj(K(E', E))."""
    return bool(
        np.max(np.abs(o.d.imag), initial=0.0) < tol and np.max(np.abs(o.k - np.conj(o.k.T)), initial=0.0) < tol
    )


def dense_rep(o: OperatorKernel) -> np.ndarray:
    """diag(d) + dE * K."""
    return np.diag(o.d) + o.grid.step * o.k


def asymptotic_direction(tag: KernelTag) -> int:
    """+1 for out (and free) kernels, -1 for in kernels."""
    return -1 if tag == KernelTag.IN else 1


@dataclass(frozen=True)
class DecayPoint:
    """One sample of (rho | [O1(t), O2(t)])."""

    t: float
    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def decay_curve(
    rho: StateFunctional,
    o1: OperatorKernel,
    o2: OperatorKernel,
    times: Sequence[float],
    allow_aliasing: bool = False,
) -> list[DecayPoint]:
    """Sample the functional on the commutator of the evolved kernels.

    Args:
        rho: State functional.
        o1: First kernel.
        o2: Second kernel.
        times: Sample times; each |t| must be within the Nyquist bound unless allow_aliasing.
        allow_aliasing: Evaluate beyond the Nyquist bound.

    Returns:
        One DecayPoint per time, in input order.
    """
    _require_compatible(rho.grid, rho.tag, o1.grid, o1.tag)
    _require_compatible(o1.grid, o1.tag, o2.grid, o2.tag)
    bound = nyquist_tmax(o1.grid)
    if not allow_aliasing:
        for t in times:
            if abs(t) > bound:
                raise NyquistError(t, bound)

    def at(t: float) -> DecayPoint:
        evolved = commutator_kernel(
            evolve_kernel(o1, t, allow_aliasing=True),
            evolve_kernel(o2, t, allow_aliasing=True),
        )
        return DecayPoint(t=float(t), value=pair(rho, evolved))

    points = map_ordered(at, [float(t) for t in times])
    logger.debug(f"Decay curve over {len(points)} samples on M={o1.grid.m}")
    return points


def random_kernel(
    grid: EnergyGrid,
    rng: np.random.Generator,
    tag: KernelTag = KernelTag.FREE,
    observable: bool = False,
) -> OperatorKernel:
    """Kernel with complex Gaussian entries; Hermitian-symmetric when observable is set."""
    m = grid.m
    d = rng.standard_normal(m) + (0 if observable else 1j * rng.standard_normal(m))
    k = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    if observable:
        k = (k + np.conj(k.T)) / 2
    return OperatorKernel(grid, tag, d, k)
