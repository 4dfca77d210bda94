"""Numerical invariant suite run by ``commutclass selfcheck``.

Every check returns a residual; it passes when residual <= tolerance. Each
check draws from its own generator seeded by (seed, position) so results do not
depend on which other checks run.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from commutclass.errors import (
    ArityError,
    CheckFailedError,
    ExprError,
    ExprEvaluationError,
    ExprSyntaxError,
    InvalidInputError,
    NyquistError,
    UnknownIdentifierError,
)
from commutclass.expr.parser import evaluate, parse, to_text
from commutclass.expr.sampling import ScatterProblem
from commutclass.gamow.evolution import (
    build_hamiltonian,
    commutator,
    decay_scan,
    default_times,
    evolution_operator,
    heisenberg_evolve,
    operator_power,
    survival_probability,
)
from commutclass.gamow.krein import (
    FormalVector,
    GamowOperator,
    adjoint,
    apply,
    basis,
    build_metric,
    compose,
    d_ket,
    g_ket,
    gram,
    identity_op,
    pseudo_inner,
    random_operator,
    random_vector,
)
from commutclass.gamow.time_reversal import (
    ConcreteVector,
    apply_t,
    invariance_gap,
    resonance_pairings,
    swap_residual,
)
from commutclass.models.resonance import EvolutionFamily, HamiltonianVariant, Resonance, ScanMode
from commutclass.scattering.algebra import (
    KernelTag,
    OperatorKernel,
    commutator_kernel,
    decay_curve,
    dense_rep,
    evolve_kernel,
    is_observable,
    make_grid,
    nyquist_tmax,
    pair,
    product,
    random_kernel,
    weak_limit,
)

logger = logging.getLogger(__name__)

# Gaussian corpus used by the weak-limit checks (asymmetric so the t=0 value is nonzero)
GAUSSIAN_CORPUS = ScatterProblem.from_text(
    rho_offdiag="exp(-(E-2)^2-(Ep-2.5)^2)",
    o1_diag="E",
    o1_offdiag="exp(-(E-3)^2-(Ep-2)^2)",
    o2_diag="sin(E)",
    o2_offdiag="i*exp(-(E-2)^2-(Ep-3)^2)",
)

# Exponential weight: the off-diagonal part of (rho|O(t)) is |geometric sum|^2, decreasing on the Nyquist window
EXPONENTIAL_PROFILE = ScatterProblem.from_text(rho_offdiag="exp(-E-Ep)", o1_diag="E", o1_offdiag="1")

PARSER_CORPUS: list[tuple[str, float, float, complex]] = [
    ("1+2*3", 0, 0, 7),
    ("(1+2)*3", 0, 0, 9),
    ("2^3^2", 0, 0, 512),
    ("(2^3)^2", 0, 0, 64),
    ("-2^2", 0, 0, -4),
    ("(-2)^2", 0, 0, 4),
    ("2^-1", 0, 0, 0.5),
    ("10-4-3", 0, 0, 3),
    ("12/3/2", 0, 0, 2),
    ("-E", 1.5, 0, -1.5),
    ("E*Ep", 2, 3, 6),
    ("E-Ep", 2, 3, -1),
    ("E^2+Ep^2", 3, 4, 25),
    ("exp(0)", 0, 0, 1),
    ("exp(1)", 0, 0, np.e),
    ("sin(pi/2)", 0, 0, 1),
    ("cos(pi)", 0, 0, -1),
    ("sqrt(16)", 0, 0, 4),
    ("sqrt(-4)", 0, 0, 2j),
    ("abs(-3)", 0, 0, 3),
    ("abs(3i+4)", 0, 0, 5),
    ("i*i", 0, 0, -1),
    ("2i", 0, 0, 2j),
    ("0.5i*2", 0, 0, 1j),
    ("1.5e2", 0, 0, 150),
    ("exp(i*pi)", 0, 0, -1),
    ("exp(-(E-2)^2)", 2, 0, 1),
    ("sin(E)^2+cos(E)^2", 0.7, 0, 1),
    ("E/(1+Ep)", 6, 2, 2),
    ("2*pi", 0, 0, 2 * np.pi),
]

PARSER_ERRORS: list[tuple[str, type[ExprError]]] = [
    ("1+", ExprSyntaxError),
    ("(1+2", ExprSyntaxError),
    ("1 2", ExprSyntaxError),
    ("2*#", ExprSyntaxError),
    ("", ExprSyntaxError),
    ("exp", ExprSyntaxError),
    ("foo(1)", UnknownIdentifierError),
    ("x+1", UnknownIdentifierError),
    ("exp(1, 2)", ArityError),
    ("sin()", ArityError),
]


@dataclass(frozen=True)
class Check:
    name: str
    description: str
    tolerance: float
    func: Callable[[np.random.Generator], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


CHECKS: dict[str, Check] = {}


def check(name: str, tolerance: float, description: str) -> Callable:
    """Register a residual function under name."""

    def register(func: Callable[[np.random.Generator], float]) -> Callable[[np.random.Generator], float]:
        CHECKS[name] = Check(name=name, description=description, tolerance=tolerance, func=func)
        return func

    return register


def _max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def _relative(actual: np.ndarray, expected: np.ndarray) -> float:
    return _max_abs(actual - expected) / max(1.0, _max_abs(expected))


def _random_resonances(rng: np.random.Generator, n: int) -> list[Resonance]:
    return [Resonance(E_R=float(rng.uniform(0.5, 5.0)), Gamma=float(rng.uniform(0.1, 2.0))) for _ in range(n)]


# Krein algebra


@check("gram_table", 0.0, "Pseudometric pairing table of the formal basis")
def _gram_table(rng: np.random.Generator) -> float:
    worst = 0.0
    for n in range(1, 5):
        for a in basis(n):
            for b in basis(n):
                expected = 1.0 if a.index == b.index and a.kind != b.kind else 0.0
                worst = max(worst, abs(gram(a, b, n) - expected))
                va, vb = FormalVector.ket(a, n), FormalVector.ket(b, n)
                worst = max(worst, abs(pseudo_inner(va, vb) - expected))
    return worst


@check("metric_square_root", 1e-12, "B @ B equals A for N = 1..8")
def _metric_square_root(rng: np.random.Generator) -> float:
    return max(_max_abs(m.b @ m.b - m.a) for m in (build_metric(n) for n in range(1, 9)))


@check("pseudo_inner_conjugate_symmetry", 1e-12, "(psi|phi) equals the conjugate of (phi|psi)")
def _pseudo_inner_symmetry(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        psi, phi = random_vector(n, rng), random_vector(n, rng)
        worst = max(worst, abs(pseudo_inner(psi, phi) - pseudo_inner(phi, psi).conjugate()))
    return worst


@check("compose_associative", 1e-10, "Gram-rule composition is associative")
def _compose_associative(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        o1, o2, o3 = (random_operator(n, rng) for _ in range(3))
        left = compose(compose(o1, o2), o3).to_array()
        right = compose(o1, compose(o2, o3)).to_array()
        worst = max(worst, _relative(left, right))
    return worst


@check("identity_unit", 0.0, "identity_op is a two-sided unit")
def _identity_unit(rng: np.random.Generator) -> float:
    worst = 0.0
    for n in range(1, 6):
        o = random_operator(n, rng)
        unit = identity_op(n)
        worst = max(
            worst,
            _max_abs(compose(unit, o).to_array() - o.to_array()),
            _max_abs(compose(o, unit).to_array() - o.to_array()),
        )
    return worst


@check("apply_compose", 1e-10, "apply(O1 O2, v) = apply(O1, apply(O2, v))")
def _apply_compose(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        o1, o2 = random_operator(n, rng), random_operator(n, rng)
        v = random_vector(n, rng)
        lhs = apply(compose(o1, o2), v).to_array()
        rhs = apply(o1, apply(o2, v)).to_array()
        worst = max(worst, _relative(lhs, rhs))
    return worst


# Hamiltonian and evolution


@check("hamiltonian_eigenvectors", 1e-12, "H|D_i) = z_i|D_i) and H|G_i) = z_i*|G_i)")
def _hamiltonian_eigenvectors(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        resonances = _random_resonances(rng, n)
        h = build_hamiltonian(resonances, HamiltonianVariant.HERMITIAN)
        for i, res in enumerate(resonances, start=1):
            d, g = FormalVector.ket(d_ket(i), n), FormalVector.ket(g_ket(i), n)
            worst = max(
                worst,
                _max_abs((apply(h, d) - d * res.pole).to_array()),
                _max_abs((apply(h, g) - g * res.conjugate_pole).to_array()),
            )
    return worst


@check("hamiltonian_powers", 1e-12, "H^n has z_i^n on (D_i, G_i) and (z_i*)^n on (G_i, D_i) for n <= 8")
def _hamiltonian_powers(rng: np.random.Generator) -> float:
    worst = 0.0
    for n in range(1, 6):
        resonances = _random_resonances(rng, n)
        h = build_hamiltonian(resonances, HamiltonianVariant.HERMITIAN)
        for power in range(9):
            expected = np.zeros((2 * n, 2 * n), dtype=np.complex128)
            for j, res in enumerate(resonances):
                expected[2 * j, 2 * j + 1] = res.pole**power
                expected[2 * j + 1, 2 * j] = res.conjugate_pole**power
            worst = max(worst, _relative(operator_power(h, power).to_array(), expected))
    return worst


@check("annihilation_table", 0.0, "Truncated Hamiltonians and one-sided families annihilate the opposite vectors")
def _annihilation_table(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 5))
        resonances = _random_resonances(rng, n)
        t = float(rng.uniform(0.0, 5.0))
        kills_g = [
            build_hamiltonian(resonances, HamiltonianVariant.TRUNCATED),
            evolution_operator(resonances, EvolutionFamily.DECAYING, t),
        ]
        kills_d = [
            build_hamiltonian(resonances, HamiltonianVariant.TRUNCATED_DAGGER),
            evolution_operator(resonances, EvolutionFamily.GROWING, -t),
        ]
        for i in range(1, n + 1):
            d, g = FormalVector.ket(d_ket(i), n), FormalVector.ket(g_ket(i), n)
            worst = max(worst, *(_max_abs(apply(o, g).to_array()) for o in kills_g))
            worst = max(worst, *(_max_abs(apply(o, d).to_array()) for o in kills_d))
    return worst


@check("full_group_law", 1e-12, "FULL family: U(t)U(-t) = I and U(t)U(s) = U(t+s)")
def _full_group_law(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        resonances = _random_resonances(rng, n)
        t, s = (float(v) for v in rng.uniform(-3.0, 3.0, size=2))

        def u(time: float) -> GamowOperator:
            return evolution_operator(resonances, EvolutionFamily.FULL, time)

        worst = max(
            worst,
            _relative(compose(u(t), u(-t)).to_array(), identity_op(n).to_array()),
            _relative(compose(u(t), u(s)).to_array(), u(t + s).to_array()),
        )
    return worst


@check("asymmetric_self_adjoint", 0.0, "ASYMMETRIC family: U(t) equals its adjoint")
def _asymmetric_self_adjoint(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(50):
        resonances = _random_resonances(rng, int(rng.integers(1, 5)))
        u = evolution_operator(resonances, EvolutionFamily.ASYMMETRIC, float(rng.uniform(0.0, 20.0)))
        worst = max(worst, _max_abs(u.to_array() - adjoint(u).to_array()))
    return worst


@check("asymmetric_square_decay", 1e-12, "ASYMMETRIC family, N = 1: U(t)^2 has coefficients e^{-t Gamma}")
def _asymmetric_square_decay(rng: np.random.Generator) -> float:
    res = _random_resonances(rng, 1)
    worst = 0.0
    for t in default_times(res, 64):
        u = evolution_operator(res, EvolutionFamily.ASYMMETRIC, float(t))
        square = compose(u, u)
        if square.support() != identity_op(1).support():
            return 1.0
        expected = np.exp(-t * res[0].width)
        worst = max(worst, *(abs(abs(v) - expected) for v in square.coeffs.values()))
    return worst


@check("survival_probability", 1e-12, "Non-decay probability equals e^{-t Gamma}")
def _survival(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(50):
        resonances = _random_resonances(rng, int(rng.integers(1, 4)))
        t = float(rng.uniform(0.0, 10.0))
        for family in (EvolutionFamily.DECAYING, EvolutionFamily.FULL, EvolutionFamily.ASYMMETRIC):
            for j, res in enumerate(resonances, start=1):
                worst = max(worst, abs(survival_probability(resonances, j, family, t) - np.exp(-t * res.width)))
    return worst


# Commutator decay


@check("commutator_decay_rate", 0.01, "N = 1, Gamma = 0.5: fitted rate is -Gamma (relative error)")
def _commutator_decay_rate(rng: np.random.Generator) -> float:
    resonances = [Resonance(E_R=2.0, Gamma=0.5)]
    o1, o2 = random_operator(1, rng), random_operator(1, rng)
    result = decay_scan(o1, o2, resonances, EvolutionFamily.ASYMMETRIC, default_times(resonances, 64))
    if result.fitted_rate is None:
        return 1.0
    return abs(result.fitted_rate + 0.5) / 0.5


@check("commutator_envelopes", 1e-10, "N = 3: entry (j, k) decays as e^{-t(Gamma_j + Gamma_k)/2}")
def _commutator_envelopes(rng: np.random.Generator) -> float:
    widths = (0.2, 0.5, 1.1)
    resonances = [Resonance(E_R=1.0 + k, Gamma=w) for k, w in enumerate(widths)]
    o1, o2 = random_operator(3, rng), random_operator(3, rng)
    times = default_times(resonances, 32)
    result = decay_scan(o1, o2, resonances, EvolutionFamily.ASYMMETRIC, times)
    worst = 0.0
    for (ket, bra), envelope in result.envelopes.items():
        rate = (widths[ket.index - 1] + widths[bra.index - 1]) / 2
        expected = envelope[0] * np.exp(-rate * np.asarray(result.times))
        worst = max(worst, _max_abs(np.asarray(envelope) - expected))
    return worst


@check("evolve_then_commute_bound", 1e-12, "|D1)(D1| with |D1)(G1|: norm(t) <= norm(0) e^{-t Gamma}")
def _evolve_then_commute_bound(rng: np.random.Generator) -> float:
    resonances = _random_resonances(rng, 1)
    o1 = GamowOperator.dyad(d_ket(1), d_ket(1), 1)
    o2 = GamowOperator.dyad(d_ket(1), g_ket(1), 1)
    result = decay_scan(
        o1, o2, resonances, EvolutionFamily.ASYMMETRIC, default_times(resonances), ScanMode.EVOLVE_THEN_COMMUTE
    )
    bound = result.norms[0] * np.exp(-np.asarray(result.times) * resonances[0].width)
    return max(0.0, float(np.max(np.asarray(result.norms) - bound)))


@check("evolve_then_commute_envelope", 1e-12, "Random operators: norm(t) <= 4N |O1| |O2| e^{-2t Gamma_min}")
def _evolve_then_commute_envelope(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(1, 4))
        resonances = _random_resonances(rng, n)
        o1, o2 = random_operator(n, rng), random_operator(n, rng)
        result = decay_scan(
            o1, o2, resonances, EvolutionFamily.ASYMMETRIC, default_times(resonances, 32), ScanMode.EVOLVE_THEN_COMMUTE
        )
        gamma_min = min(r.width for r in resonances)
        envelope = 4 * n * o1.max_norm() * o2.max_norm() * np.exp(-2 * gamma_min * np.asarray(result.times))
        worst = max(worst, float(np.max(np.asarray(result.norms) - envelope * (1 + 1e-12))))
    return max(0.0, worst)


@check("heisenberg_commutator", 1e-10, "FULL family: ([O1, O2])(t) = [O1(t), O2(t)]")
def _heisenberg_commutator(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 4))
        resonances = _random_resonances(rng, n)
        o1, o2 = random_operator(n, rng), random_operator(n, rng)
        t = float(rng.uniform(0.0, 5.0))
        family = EvolutionFamily.FULL
        lhs = heisenberg_evolve(commutator(o1, o2), resonances, family, t)
        rhs = commutator(heisenberg_evolve(o1, resonances, family, t), heisenberg_evolve(o2, resonances, family, t))
        worst = max(worst, _relative(lhs.to_array(), rhs.to_array()))
    return worst


# Time reversal


@check("time_reversal_swap", 1e-12, "T|D_i) = |G_i) and T|G_i) = |D_i) for N = 1..5")
def _time_reversal_swap(rng: np.random.Generator) -> float:
    return max(swap_residual(n) for n in range(1, 6))


@check("time_reversal_antilinear", 1e-12, "T(a x + b y) = a* Tx + b* Ty and T(Tx) = x")
def _time_reversal_antilinear(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        x, y = (ConcreteVector(rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)) for _ in range(2))
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        combined = apply_t(ConcreteVector(a * x.entries + b * y.entries)).entries
        expected = a.conjugate() * apply_t(x).entries + b.conjugate() * apply_t(y).entries
        worst = max(worst, _relative(combined, expected), _max_abs(apply_t(apply_t(x)).entries - x.entries))
    return worst


@check("pairing_chain", 1e-12, "Pairing identities and gap = (z + z*)(p1 p2 - p3^2)")
def _pairing_chain(rng: np.random.Generator) -> float:
    z = complex(2.0, -0.5)
    worst = 0.0
    for _ in range(1000):
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        p = resonance_pairings(a, b)
        closed_form = (z + z.conjugate()) * (p.psi_d * p.d_psi - p.psi_t_d * p.d_t_psi)
        worst = max(
            worst,
            abs(p.g_psi - p.d_psi),
            abs(p.psi_g - p.psi_d),
            abs(p.psi_t_d - p.d_t_psi),
            abs(invariance_gap(a, b, z).gap - closed_form),
        )
        x = float(rng.standard_normal())
        worst = max(worst, abs(invariance_gap(x, x, z).gap))
    return worst


@check("time_reversal_noninvariance", 0.0, "At z = 2 - 0.5i, |gap| > 1e-8 for at least 99% of unit (a, b)")
def _time_reversal_noninvariance(rng: np.random.Generator) -> float:
    z = complex(2.0, -0.5)
    hits = 0
    trials = 1000
    for _ in range(trials):
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        if abs(invariance_gap(complex(v[0], v[1]), complex(v[2], v[3]), z).gap) > 1e-8:
            hits += 1
    return max(0.0, 0.99 - hits / trials)


# Energy-kernel algebra


@check("kernel_homomorphism", 1e-12, "dense_rep(O1 O2) = dense_rep(O1) dense_rep(O2)")
def _kernel_homomorphism(rng: np.random.Generator) -> float:
    worst = 0.0
    for m in (4, 16, 64):
        grid = make_grid(8.0, m)
        for _ in range(100):
            o1, o2 = random_kernel(grid, rng), random_kernel(grid, rng)
            expected = dense_rep(o1) @ dense_rep(o2)
            worst = max(worst, _relative(dense_rep(product(o1, o2)), expected))
    return worst


@check("commutator_diagonal_zero", 0.0, "The diagonal part of a commutator is exactly zero")
def _commutator_diagonal_zero(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 16)
    return max(_max_abs(commutator_kernel(random_kernel(grid, rng), random_kernel(grid, rng)).d) for _ in range(20))


@check("evolution_homomorphism", 1e-10, "(O1 O2)(t) = O1(t) O2(t)")
def _evolution_homomorphism(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 32)
    worst = 0.0
    for _ in range(20):
        o1, o2 = random_kernel(grid, rng), random_kernel(grid, rng)
        t = float(rng.uniform(-nyquist_tmax(grid), nyquist_tmax(grid)))
        lhs = evolve_kernel(product(o1, o2), t)
        rhs = product(evolve_kernel(o1, t), evolve_kernel(o2, t))
        worst = max(worst, _relative(dense_rep(lhs), dense_rep(rhs)))
    return worst


@check("observable_commutator", 1e-12, "i[O1, O2] of observables is an observable")
def _observable_commutator(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 16)
    worst = 0.0
    for _ in range(20):
        o1 = random_kernel(grid, rng, observable=True)
        o2 = random_kernel(grid, rng, observable=True)
        dense = dense_rep(1j * commutator_kernel(o1, o2))
        worst = max(worst, _relative(dense, np.conj(dense.T)))
    return worst


@check("kernel_evolution_group_law", 1e-12, "O(t) evolved by s equals O(t + s); d is unchanged")
def _kernel_evolution_group_law(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 32)
    half = nyquist_tmax(grid) / 2
    worst = 0.0
    for _ in range(20):
        o = random_kernel(grid, rng)
        t, s = (float(v) for v in rng.uniform(-half, half, size=2))
        twice = evolve_kernel(evolve_kernel(o, t), s)
        worst = max(worst, _relative(twice.k, evolve_kernel(o, t + s).k), _max_abs(twice.d - o.d))
    return worst


@check("observable_preservation", 0.0, "Evolution and weak limits keep observables; a product of two need not")
def _observable_preservation(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 16)
    bound = nyquist_tmax(grid)
    failures = 0
    for _ in range(20):
        o = random_kernel(grid, rng, observable=True)
        failures += not is_observable(evolve_kernel(o, float(rng.uniform(-bound, bound))))
        failures += not is_observable(weak_limit(o))
    # E times a constant kernel gives K(E, E') = E, which is not conjugate-symmetric
    energy = OperatorKernel(grid, KernelTag.FREE, grid.nodes, np.zeros((grid.m, grid.m)))
    flat = OperatorKernel(grid, KernelTag.FREE, np.zeros(grid.m), np.ones((grid.m, grid.m)))
    failures += is_observable(product(energy, flat))
    return float(failures)


@check("nyquist_guard", 0.0, "Evolution beyond the Nyquist bound is refused")
def _nyquist_guard(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 256)
    try:
        evolve_kernel(random_kernel(make_grid(8.0, 4), rng), 2 * nyquist_tmax(make_grid(8.0, 4)))
    except NyquistError:
        pass
    else:
        return 1.0
    return abs(nyquist_tmax(grid) - 8 * np.pi)


@check("weak_limit_decay", 0.01, "Gaussian corpus on (8, 256): |value(t_max)| / |value(0)|")
def _weak_limit_decay(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 256)
    rho, o1, o2 = GAUSSIAN_CORPUS.build(grid)
    first, last = decay_curve(rho, o1, o2, [0.0, nyquist_tmax(grid)])
    if first.magnitude == 0:
        return 1.0
    return last.magnitude / first.magnitude


@check("weak_limit_refinement", 1e-3, "Gaussian corpus: M = 256 against M = 512 at t_max (relative)")
def _weak_limit_refinement(rng: np.random.Generator) -> float:
    coarse = make_grid(8.0, 256)
    t = nyquist_tmax(coarse)
    rho, o1, o2 = GAUSSIAN_CORPUS.build(coarse)
    fine_rho, fine_o1, fine_o2 = GAUSSIAN_CORPUS.build(coarse.refined())
    first, last = decay_curve(rho, o1, o2, [0.0, t])
    (refined,) = decay_curve(fine_rho, fine_o1, fine_o2, [t])
    if first.magnitude == 0:
        return 1.0
    return abs(last.value - refined.value) / first.magnitude


@check("weak_limit_commute", 0.0, "Commutators of weak-limit kernels are exactly zero")
def _weak_limit_commute(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 32)
    worst = 0.0
    for _ in range(10):
        o1, o2 = weak_limit(random_kernel(grid, rng)), weak_limit(random_kernel(grid, rng))
        c = commutator_kernel(o1, o2)
        worst = max(worst, _max_abs(c.d), _max_abs(c.k))
    return worst


@check("weak_limit_monotone", 0.0, "Exponential profile on (8, 256): |(rho|O(t)) - (rho|O_inf)| shrinks below 1%")
def _weak_limit_monotone(rng: np.random.Generator) -> float:
    grid = make_grid(8.0, 256)
    rho, o, _ = EXPONENTIAL_PROFILE.build(grid)
    limit = pair(rho, weak_limit(o))
    gaps = [abs(pair(rho, o, float(t)) - limit) for t in np.linspace(0.0, nyquist_tmax(grid), 64)]
    if gaps[0] == 0:
        return 1.0
    rise = max(b - a for a, b in zip(gaps, gaps[1:], strict=False)) / gaps[0]
    return max(0.0, rise, gaps[-1] / gaps[0] - 0.01)


# Expression language


@check("parser_corpus", 1e-12, "Reference expressions evaluate to their known values")
def _parser_corpus(rng: np.random.Generator) -> float:
    return max(abs(evaluate(parse(text), e, ep) - expected) for text, e, ep, expected in PARSER_CORPUS)


@check("parser_round_trip", 0.0, "parse(to_text(parse(s))) == parse(s)")
def _parser_round_trip(rng: np.random.Generator) -> float:
    return float(sum(parse(to_text(parse(text))) != parse(text) for text, *_ in PARSER_CORPUS))


@check("parser_error_kinds", 0.0, "Malformed input raises the designated error kind")
def _parser_error_kinds(rng: np.random.Generator) -> float:
    mismatches = 0
    for text, kind in PARSER_ERRORS:
        try:
            parse(text)
        except ExprError as e:
            mismatches += type(e) is not kind
        else:
            mismatches += 1
    try:
        evaluate(parse("1/(E-1)"), 1.0)
    except ExprEvaluationError:
        pass
    else:
        mismatches += 1
    return float(mismatches)


def run_checks(
    seed: int = 0,
    inject_fault: str | None = None,
    names: Sequence[str] | None = None,
) -> list[CheckResult]:
    """Run checks in registration order, stopping after the first failure.

    Args:
        seed: Seed for the per-check random generators.
        inject_fault: Name of a check whose residual is increased by 1.
        names: Subset of checks to run (default: all).

    Returns:
        Results up to and including the first failing check.

    Raises:
        InvalidInputError: If inject_fault or a name in names is not a registered check.
    """
    selected = list(CHECKS) if names is None else list(names)
    for name in [*selected, *([inject_fault] if inject_fault else [])]:
        if name not in CHECKS:
            raise InvalidInputError(f"Unknown check '{name}' (see selfcheck --list)")

    positions = {name: i for i, name in enumerate(CHECKS)}
    results: list[CheckResult] = []
    for name in selected:
        entry = CHECKS[name]
        rng = np.random.default_rng([seed, positions[name]])
        residual = float(entry.func(rng))
        if name == inject_fault:
            residual += 1.0
        result = CheckResult(name=name, residual=residual, tolerance=entry.tolerance)
        results.append(result)
        logger.debug(f"{name}: residual {residual:.3e} (tolerance {entry.tolerance:.1e})")
        if not result.passed:
            logger.error(f"Invariant '{name}' failed")
            break
    return results


def require_passing(results: Sequence[CheckResult]) -> None:
    """Raise CheckFailedError for the first failing result."""
    for result in results:
        if not result.passed:
            raise CheckFailedError(result.name, result.residual, result.tolerance)


def format_table(results: Sequence[CheckResult]) -> str:
    width = max((len(r.name) for r in results), default=5)
    lines = [f"{'check':<{width}}  {'residual':>10}  {'tolerance':>9}  status"]
    for r in results:
        status = "ok" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.residual:>10.3e}  {r.tolerance:>9.1e}  {status}")
    return "\n".join(lines)
