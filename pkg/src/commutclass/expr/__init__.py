"""Kernel expression language."""

from commutclass.expr.parser import (
    BinOp,
    Call,
    Constant,
    Expr,
    Neg,
    Number,
    Variable,
    evaluate,
    evaluate_array,
    parse,
    to_text,
    variables,
)
from commutclass.expr.sampling import ScatterProblem, refinement_gap, sample, sample_functional

__all__ = [
    "BinOp",
    "Call",
    "Constant",
    "Expr",
    "Neg",
    "Number",
    "ScatterProblem",
    "Variable",
    "evaluate",
    "evaluate_array",
    "parse",
    "refinement_gap",
    "sample",
    "sample_functional",
    "to_text",
    "variables",
]
