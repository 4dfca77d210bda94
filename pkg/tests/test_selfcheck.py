"""Tests for the numerical invariant suite."""

import pytest

from commutclass.errors import CheckFailedError, InvalidInputError
from commutclass.expr.parser import evaluate, parse
from commutclass.selfcheck import (
    CHECKS,
    PARSER_CORPUS,
    PARSER_ERRORS,
    CheckResult,
    format_table,
    require_passing,
    run_checks,
)


class TestRegistry:
    """Tests for the registered checks."""

    def test_corpus_sizes(self):
        """Thirty valued expressions and ten error cases."""
        assert len(PARSER_CORPUS) == 30
        assert len(PARSER_ERRORS) == 10

    def test_every_check_described(self):
        for name, entry in CHECKS.items():
            assert entry.description, name
            assert entry.tolerance >= 0

    @pytest.mark.parametrize("text,e,ep,expected", PARSER_CORPUS)
    def test_parser_corpus(self, text: str, e: float, ep: float, expected: complex):
        assert abs(evaluate(parse(text), e, ep) - expected) <= 1e-12


class TestRunChecks:
    """Tests for running the suite."""

    @pytest.mark.parametrize("name", list(CHECKS))
    def test_check_passes(self, name: str):
        """Each invariant holds on a correct build."""
        (result,) = run_checks(names=[name])
        assert result.passed, f"{name}: residual {result.residual:.3e} > {result.tolerance:.1e}"

    def test_independent_of_selection(self):
        """A check's residual does not depend on which checks ran before it."""
        alone = run_checks(names=["compose_associative"])
        together = run_checks(names=["gram_table", "compose_associative"])
        assert alone[0].residual == together[1].residual

    def test_seeded_runs_repeat(self):
        """The same seed reproduces the same residuals."""
        first = run_checks(seed=0, names=["compose_associative"])[0].residual
        again = run_checks(seed=0, names=["compose_associative"])[0].residual
        assert first == again

    def test_injected_fault_stops_the_run(self):
        """The broken check fails and nothing after it runs."""
        names = list(CHECKS)
        results = run_checks(inject_fault=names[2])
        assert len(results) == 3
        assert not results[-1].passed
        with pytest.raises(CheckFailedError) as exc_info:
            require_passing(results)
        assert exc_info.value.name == names[2]

    @pytest.mark.parametrize(
        "name",
        [
            "apply_compose",
            "hamiltonian_powers",
            "time_reversal_antilinear",
            "kernel_evolution_group_law",
            "observable_preservation",
            "weak_limit_monotone",
        ],
    )
    def test_fault_injection_reaches(self, name: str):
        """Every invariant can be broken on purpose and is then reported."""
        (result,) = run_checks(names=[name], inject_fault=name)
        assert not result.passed

    def test_unknown_names(self):
        with pytest.raises(InvalidInputError):
            run_checks(inject_fault="no_such_check")
        with pytest.raises(InvalidInputError):
            run_checks(names=["no_such_check"])


class TestFormatTable:
    def test_columns(self):
        results = [
            CheckResult(name="gram_table", residual=0.0, tolerance=0.0),
            CheckResult(name="x", residual=2.0, tolerance=1.0),
        ]
        lines = format_table(results).splitlines()
        assert lines[0].split() == ["check", "residual", "tolerance", "status"]
        assert lines[1].split() == ["gram_table", "0.000e+00", "0.0e+00", "ok"]
        assert lines[2].split() == ["x", "2.000e+00", "1.0e+00", "FAIL"]
