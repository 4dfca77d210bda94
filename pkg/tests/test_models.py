"""Tests for Pydantic models."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from commutclass.models import (
    EvolutionFamily,
    GamowRunConfig,
    GridSpec,
    Resonance,
    ScanMode,
    ScatterRunConfig,
    ScatterWindow,
    SelfcheckRunConfig,
    TimeReversalRunConfig,
    TimeWindow,
)
from commutclass.scattering.algebra import KernelTag


class TestResonance:
    def test_aliases(self):
        resonance = Resonance(E_R=2.0, Gamma=0.5)
        assert resonance.energy == 2.0
        assert resonance.width == 0.5
        assert resonance.pole == complex(2.0, -0.25)
        assert resonance.conjugate_pole == complex(2.0, 0.25)

    def test_field_names_accepted(self):
        assert Resonance(energy=1.0, width=0.1) == Resonance(E_R=1.0, Gamma=0.1)

    @pytest.mark.parametrize("gamma", [0.0, -0.5, float("nan"), float("inf")])
    def test_width_must_be_positive(self, gamma: float):
        with pytest.raises(ValidationError):
            Resonance(E_R=2.0, Gamma=gamma)

    def test_frozen(self):
        resonance = Resonance(E_R=2.0, Gamma=0.5)
        with pytest.raises(ValidationError):
            resonance.width = 1.0


class TestGamowRunConfig:
    """Tests for the gamow run configuration."""

    def test_defaults(self):
        config = GamowRunConfig.model_validate({"resonances": [{"E_R": 2.0, "Gamma": 0.5}]})
        assert config.family == EvolutionFamily.ASYMMETRIC
        assert config.mode == ScanMode.COMMUTE_THEN_EVOLVE
        assert config.window == TimeWindow()
        assert config.window.samples == 64
        assert config.o1 is None
        assert config.seed == 0
        assert config.out is None

    def test_enum_values(self):
        config = GamowRunConfig.model_validate(
            {"resonances": [{"E_R": 2.0, "Gamma": 0.5}], "family": "full", "mode": "evolve-then-commute"}
        )
        assert config.family == EvolutionFamily.FULL
        assert config.mode == ScanMode.EVOLVE_THEN_COMMUTE

    def test_needs_a_resonance(self):
        with pytest.raises(ValidationError):
            GamowRunConfig.model_validate({"resonances": []})

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError):
            GamowRunConfig.model_validate({"resonances": [{"E_R": 2.0, "Gamma": 0.5}], "colour": "red"})

    @pytest.mark.parametrize("window", [{"samples": 1}, {"t_max": 0}, {"t_max": -3.0}])
    def test_window_validated(self, window: dict):
        with pytest.raises(ValidationError):
            GamowRunConfig.model_validate({"resonances": [{"E_R": 2.0, "Gamma": 0.5}], "window": window})


class TestScatterRunConfig:
    """Tests for the scatter run configuration."""

    def test_grid_aliases(self):
        config = ScatterRunConfig.model_validate({"grid": {"E_max": 8.0, "M": 256}})
        assert config.grid == GridSpec(e_max=8.0, m=256)
        assert config.tag == KernelTag.FREE
        assert config.window.t_max == "auto"
        assert config.refine is False

    @pytest.mark.parametrize("grid", [{"E_max": 0, "M": 8}, {"E_max": 8.0, "M": 1}, {"E_max": 8.0}])
    def test_grid_validated(self, grid: dict):
        with pytest.raises(ValidationError):
            ScatterRunConfig.model_validate({"grid": grid})

    def test_expressions_parsed(self):
        config = ScatterRunConfig.model_validate({"grid": {"E_max": 8.0, "M": 16}, "o1_diag": "sin(E)"})
        assert config.o1_diag == "sin(E)"

    @pytest.mark.parametrize("text", ["E +", "foo(E)", "exp(1, 2)"])
    def test_bad_expression_rejected(self, text: str):
        with pytest.raises(ValidationError):
            ScatterRunConfig.model_validate({"grid": {"E_max": 8.0, "M": 16}, "o1_offdiag": text})

    def test_dump_dir_is_path(self):
        config = ScatterRunConfig.model_validate({"grid": {"E_max": 8.0, "M": 16}, "dump_dir": "kernels"})
        assert config.dump_dir == Path("kernels")


class TestScatterWindow:
    def test_auto_or_number(self):
        assert ScatterWindow().t_max == "auto"
        assert ScatterWindow(t_max=5.0).t_max == 5.0

    @pytest.mark.parametrize("t_max", [0.0, -1.0, float("inf"), "soon"])
    def test_rejects(self, t_max):
        with pytest.raises(ValidationError):
            ScatterWindow(t_max=t_max)


class TestTimeReversalRunConfig:
    """Tests for the time reversal run configuration."""

    def test_defaults(self):
        config = TimeReversalRunConfig.model_validate({"resonance": {"E_R": 2.0, "Gamma": 0.5}})
        assert config.a == "1"
        assert config.b == "0"
        assert config.max_n == 5

    def test_complex_constants(self):
        config = TimeReversalRunConfig.model_validate(
            {"resonance": {"E_R": 2.0, "Gamma": 0.5}, "a": "sqrt(2)/2", "b": "0.5i"}
        )
        assert config.b == "0.5i"

    def test_coefficient_must_be_constant(self):
        with pytest.raises(ValidationError, match="constant"):
            TimeReversalRunConfig.model_validate({"resonance": {"E_R": 2.0, "Gamma": 0.5}, "a": "E"})

    def test_resonance_required(self):
        with pytest.raises(ValidationError):
            TimeReversalRunConfig.model_validate({})


class TestSelfcheckRunConfig:
    def test_defaults(self):
        config = SelfcheckRunConfig()
        assert config.seed == 0
        assert config.inject_fault is None
