import os

from quermass import suites
from quermass.config import thread_count
from quermass.reporting import csv_bytes


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("QUERMASS_THREADS", "4")
    assert thread_count() == 4
    monkeypatch.setenv("QUERMASS_THREADS", "junk")
    assert thread_count() == 1
    monkeypatch.delenv("QUERMASS_THREADS")
    assert thread_count() == 1


def test_parallel_map_is_deterministic(monkeypatch):
    def run():
        out = suites.eigen_interpolation_suite(count=16, seed=99)
        return csv_bytes(out["rows"], out["columns"])

    monkeypatch.setenv("QUERMASS_THREADS", "1")
    serial = run()
    monkeypatch.setenv("QUERMASS_THREADS", "2")
    threaded = run()
    assert serial == threaded
