"""Resonance poles and the enumerations used by the Gamow model."""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field


class EvolutionFamily(StrEnum):
    """Time evolution operators on the Gamow space."""

    DECAYING = "decaying"  # e^{-itH}, truncated H
    GROWING = "growing"  # e^{-itH^dagger}, truncated H^dagger
    FULL = "full"  # e^{-itH}, formally Hermitian H
    ASYMMETRIC = "asymmetric"  # formally Hermitian, time asymmetric


class HamiltonianVariant(StrEnum):
    """Truncated spectral decompositions of the Hamiltonian."""

    TRUNCATED = "truncated"
    TRUNCATED_DAGGER = "truncated_dagger"
    HERMITIAN = "hermitian"


class ScanMode(StrEnum):
    """Order of evolution and commutation in a decay scan."""

    EVOLVE_THEN_COMMUTE = "evolve-then-commute"
    COMMUTE_THEN_EVOLVE = "commute-then-evolve"


class Resonance(BaseModel):
    """A resonance pole z = E_R - i*Gamma/2 (hbar = 1)."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    energy: float = Field(alias="E_R", allow_inf_nan=False)
    width: float = Field(alias="Gamma", gt=0, allow_inf_nan=False)

    @property
    def pole(self) -> complex:
        """The decaying pole z."""
        return complex(self.energy, -self.width / 2)

    @property
    def conjugate_pole(self) -> complex:
        """The growing pole z*."""
        return complex(self.energy, self.width / 2)
