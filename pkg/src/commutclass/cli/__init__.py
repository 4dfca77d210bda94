"""Command-line interface for commutclass."""

from commutclass.cli.main import build_parser, run_command

__all__ = ["build_parser", "run_command"]
