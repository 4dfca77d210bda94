"""Pytest configuration and fixtures."""

import numpy as np
import pytest

from commutclass.config import get_settings
from commutclass.expr.sampling import ScatterProblem
from commutclass.models.resonance import Resonance
from commutclass.scattering.algebra import EnergyGrid, make_grid


@pytest.fixture(autouse=True)
def fresh_settings():
    """Re-read environment settings in every test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so randomized tests are reproducible."""
    return np.random.default_rng(20240601)


@pytest.fixture
def resonance() -> Resonance:
    return Resonance(E_R=2.0, Gamma=0.5)


@pytest.fixture
def three_resonances() -> list[Resonance]:
    return [
        Resonance(E_R=1.0, Gamma=0.2),
        Resonance(E_R=2.0, Gamma=0.5),
        Resonance(E_R=3.0, Gamma=1.1),
    ]


@pytest.fixture
def gaussian_grid() -> EnergyGrid:
    return make_grid(8.0, 256)


@pytest.fixture
def gaussian_problem() -> ScatterProblem:
    """Smooth, asymmetric Gaussian profiles with a nonzero t = 0 value."""
    return ScatterProblem.from_text(
        rho_offdiag="exp(-(E-2)^2-(Ep-2.5)^2)",
        o1_diag="E",
        o1_offdiag="exp(-(E-3)^2-(Ep-2)^2)",
        o2_diag="sin(E)",
        o2_offdiag="i*exp(-(E-2)^2-(Ep-3)^2)",
    )
