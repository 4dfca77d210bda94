"""Pydantic models for commutclass."""

from commutclass.models.resonance import EvolutionFamily, HamiltonianVariant, Resonance, ScanMode
from commutclass.models.run import (
    GamowRunConfig,
    GridSpec,
    RunConfig,
    ScatterRunConfig,
    ScatterWindow,
    SelfcheckRunConfig,
    TimeReversalRunConfig,
    TimeWindow,
)

__all__ = [
    "EvolutionFamily",
    "GamowRunConfig",
    "GridSpec",
    "HamiltonianVariant",
    "Resonance",
    "RunConfig",
    "ScanMode",
    "ScatterRunConfig",
    "ScatterWindow",
    "SelfcheckRunConfig",
    "TimeReversalRunConfig",
    "TimeWindow",
]
