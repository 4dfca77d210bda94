"""The scattering model: energy kernels, functionals and weak limits."""

from commutclass.scattering.algebra import (
    DecayPoint,
    EnergyGrid,
    KernelTag,
    OperatorKernel,
    StateFunctional,
    asymptotic_direction,
    commutator_kernel,
    decay_curve,
    dense_rep,
    evolve_kernel,
    expectation,
    identity_kernel,
    is_observable,
    make_grid,
    moller_retag,
    nyquist_tmax,
    pair,
    product,
    weak_limit,
    zero_kernel,
)
from commutclass.scattering.io import dump_kernel, load_kernel

__all__ = [
    "DecayPoint",
    "EnergyGrid",
    "KernelTag",
    "OperatorKernel",
    "StateFunctional",
    "asymptotic_direction",
    "commutator_kernel",
    "decay_curve",
    "dense_rep",
    "dump_kernel",
    "evolve_kernel",
    "expectation",
    "identity_kernel",
    "is_observable",
    "load_kernel",
    "make_grid",
    "moller_retag",
    "nyquist_tmax",
    "pair",
    "product",
    "weak_limit",
    "zero_kernel",
]
