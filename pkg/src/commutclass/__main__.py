"""Entry point for running commutclass as a module."""

import sys
from collections.abc import Sequence

from commutclass.cli.main import run_command


def main(argv: Sequence[str] | None = None) -> int:
    """Run the commutclass command line."""
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
