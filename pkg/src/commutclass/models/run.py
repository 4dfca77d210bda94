"""Run configuration models, one per CLI subcommand."""

from pathlib import Path
from typing import Annotated, Literal

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator

from commutclass.expr.parser import parse, variables
from commutclass.models.resonance import EvolutionFamily, Resonance, ScanMode
from commutclass.scattering.algebra import KernelTag


def _check_expression(value: str | None) -> str | None:
    if value is not None:
        parse(value)
    return value


def _check_constant(value: str) -> str:
    names = variables(parse(value))
    if names:
        raise ValueError(f"must be a constant expression, found variable(s) {sorted(names)}")
    return value


ExpressionText = Annotated[str | None, AfterValidator(_check_expression)]
ConstantText = Annotated[str, AfterValidator(_check_constant)]


class RunConfig(BaseModel):
    """Fields shared by every subcommand."""

    model_config = ConfigDict(extra="forbid")

    out: Path | None = None


class TimeWindow(BaseModel):
    """Sample times on [0, t_max]; t_max None means the model's default window."""

    model_config = ConfigDict(extra="forbid")

    t_max: float | None = Field(default=None, gt=0, allow_inf_nan=False)
    samples: int = Field(default=64, ge=2)


class ScatterWindow(BaseModel):
    """Sample times toward the tag's asymptotic direction; "auto" stops at the Nyquist bound."""

    model_config = ConfigDict(extra="forbid")

    t_max: float | Literal["auto"] = "auto"
    samples: int = Field(default=64, ge=2)

    @field_validator("t_max")
    @classmethod
    def _positive_finite(cls, v: float | str) -> float | str:
        if isinstance(v, float) and not (0 < v < float("inf")):
            raise ValueError("must be a positive finite number or 'auto'")
        return v


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    e_max: float = Field(alias="E_max", gt=0, allow_inf_nan=False)
    m: int = Field(alias="M", ge=2)


class GamowRunConfig(RunConfig):
    """Commutator decay scan on the Gamow space."""

    resonances: list[Resonance] = Field(min_length=1)
    family: EvolutionFamily = EvolutionFamily.ASYMMETRIC
    mode: ScanMode = ScanMode.COMMUTE_THEN_EVOLVE
    window: TimeWindow = Field(default_factory=TimeWindow)
    # Operator specs like "D1G1=1; G1D1=0.5i"; absent operators are drawn from seed
    o1: str | None = None
    o2: str | None = None
    seed: int = 0


class ScatterRunConfig(RunConfig):
    """Decay curve of (rho | [O1(t), O2(t)]) on an energy grid."""

    grid: GridSpec
    tag: KernelTag = KernelTag.FREE
    rho_diag: ExpressionText = None
    rho_offdiag: ExpressionText = None
    o1_diag: ExpressionText = None
    o1_offdiag: ExpressionText = None
    o2_diag: ExpressionText = None
    o2_offdiag: ExpressionText = None
    window: ScatterWindow = Field(default_factory=ScatterWindow)
    refine: bool = False
    dump_dir: Path | None = None


class TimeReversalRunConfig(RunConfig):
    """Time reversal comparison for |psi) = a B|psi^D> + b B^dagger|psi^G>."""

    a: ConstantText = "1"
    b: ConstantText = "0"
    resonance: Resonance
    max_n: int = Field(default=5, ge=1)


class SelfcheckRunConfig(RunConfig):
    seed: int = 0
    inject_fault: str | None = None
