"""Tests for kernel JSON files."""

import json
from pathlib import Path

import numpy as np
import pytest

from commutclass.errors import InvalidInputError
from commutclass.scattering.algebra import KernelTag, make_grid, moller_retag, random_kernel
from commutclass.scattering.io import dump_kernel, kernel_to_document, load_kernel


class TestKernelDocument:
    def test_layout(self):
        """d and K are stored as [re, im] pairs under a grid header."""
        grid = make_grid(2.0, 2)
        o = random_kernel(grid, np.random.default_rng(1))
        document = kernel_to_document(o)
        assert document["grid"] == {"E_max": 2.0, "M": 2}
        assert document["tag"] == "free"
        assert document["d"][1] == [o.d[1].real, o.d[1].imag]
        assert document["K"][0][1] == [o.k[0, 1].real, o.k[0, 1].imag]


class TestDumpLoad:
    """Tests for writing and reading kernel files."""

    def test_reload_is_exact(self, tmp_path: Path, rng: np.random.Generator):
        """A dumped kernel reloads with identical samples and tag."""
        o = moller_retag(random_kernel(make_grid(8.0, 6), rng), KernelTag.OUT)
        path = tmp_path / "o.json"
        dump_kernel(o, path)
        assert load_kernel(path) == o

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(InvalidInputError, match="not found"):
            load_kernel(tmp_path / "absent.json")

    def test_malformed_json(self, tmp_path: Path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInputError):
            load_kernel(path)

    def test_shape_must_match_header(self, tmp_path: Path):
        """A K with the wrong number of rows is rejected."""
        path = tmp_path / "short.json"
        path.write_text(
            json.dumps(
                {
                    "grid": {"E_max": 1.0, "M": 2},
                    "d": [[1.0, 0.0], [2.0, 0.0]],
                    "K": [[[0.0, 0.0], [0.0, 0.0]]],
                }
            )
        )
        with pytest.raises(InvalidInputError, match="grid header"):
            load_kernel(path)

    def test_unknown_tag(self, tmp_path: Path):
        path = tmp_path / "tag.json"
        path.write_text(json.dumps({"grid": {"E_max": 1.0, "M": 1}, "tag": "sideways", "d": [[1, 0]], "K": [[[0, 0]]]}))
        with pytest.raises(InvalidInputError):
            load_kernel(path)
