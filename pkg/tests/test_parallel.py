"""Tests for the ordered parallel map."""

import time

import pytest

from commutclass import parallel
from commutclass.config import Settings
from commutclass.parallel import map_ordered, worker_count


class TestWorkerCount:
    def test_explicit_cap(self):
        assert worker_count(100, max_workers=3) == 3

    def test_never_more_than_items(self):
        assert worker_count(2, max_workers=8) == 2

    def test_at_least_one(self):
        assert worker_count(0, max_workers=4) == 1

    def test_env_cap(self, monkeypatch: pytest.MonkeyPatch):
        """COMMUTCLASS_THREADS caps the pool when no explicit cap is given."""
        monkeypatch.setattr(parallel, "get_settings", lambda: Settings(threads=2))
        assert worker_count(100) == 2


class TestMapOrdered:
    def test_order_preserved(self):
        """Results follow input order even when later items finish first."""

        def slow_for_small(x: int) -> int:
            time.sleep(0.001 * (5 - x))
            return x * x

        assert map_ordered(slow_for_small, [0, 1, 2, 3, 4], max_workers=5) == [0, 1, 4, 9, 16]

    def test_serial_path(self):
        assert map_ordered(str, [3, 1, 2], max_workers=1) == ["3", "1", "2"]
