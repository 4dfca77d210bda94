"""JSON dump and load for operator kernels."""

import json
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from commutclass.errors import InvalidInputError
from commutclass.scattering.algebra import KernelTag, OperatorKernel, make_grid

logger = logging.getLogger(__name__)

ComplexPair = tuple[float, float]


class GridHeader(BaseModel):
    """Grid header written with every kernel."""

    model_config = ConfigDict(populate_by_name=True)

    e_max: float = Field(alias="E_max", gt=0, allow_inf_nan=False)
    m: int = Field(alias="M", ge=1)


class KernelDocument(BaseModel):
    """On-disk kernel: grid header, tag, d and row-major K as [re, im] pairs."""

    grid: GridHeader
    tag: KernelTag = KernelTag.FREE
    d: list[ComplexPair]
    K: list[list[ComplexPair]]


def _pairs(values: np.ndarray) -> list:
    return np.stack([values.real, values.imag], axis=-1).tolist()


def kernel_to_document(o: OperatorKernel) -> dict:
    return {
        "grid": {"E_max": o.grid.e_max, "M": o.grid.m},
        "tag": str(o.tag),
        "d": _pairs(o.d),
        "K": _pairs(o.k),
    }


def dump_kernel(o: OperatorKernel, path: Path) -> None:
    """Write a kernel as JSON."""
    path.write_text(json.dumps(kernel_to_document(o), indent=2, sort_keys=True) + "\n")
    logger.debug(f"Wrote kernel (M={o.grid.m}, tag={o.tag}) to {path}")


def load_kernel(path: Path) -> OperatorKernel:
    """Read a kernel written by dump_kernel.

    Raises:
        InvalidInputError: If the file is missing or malformed.
    """
    if not path.exists():
        raise InvalidInputError(f"Kernel file not found: {path}")
    try:
        document = KernelDocument.model_validate_json(path.read_text())
    except ValidationError as e:
        raise InvalidInputError(f"Invalid kernel file {path}: {e}") from e

    grid = make_grid(document.grid.e_max, document.grid.m)
    d = np.array(document.d, dtype=float)
    k = np.array(document.K, dtype=float)
    if d.shape != (grid.m, 2) or k.shape != (grid.m, grid.m, 2):
        raise InvalidInputError(f"Kernel file {path} does not match its grid header (M={grid.m})")
    return OperatorKernel(grid, document.tag, d[:, 0] + 1j * d[:, 1], k[..., 0] + 1j * k[..., 1])
