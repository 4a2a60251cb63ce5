import numpy as np
import pytest

from minkenv.envelope import creative_solve, envelope_branches
from minkenv.fixtures import fixture
from minkenv.pipeline import build_family

_CACHE = {}


def family(n):
    if n not in _CACHE:
        _CACHE[n] = build_family(fixture(n).config)
    return _CACHE[n]


def branches(n):
    return envelope_branches(creative_solve(family(n)))


@pytest.fixture
def fam():
    return family


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance results, filled by tests/test_acceptance.py
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
