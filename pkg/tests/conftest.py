import functools

import numpy as np
import pytest

from posetcoh.fixtures import circle_poset
from posetcoh.spacetime import CausalLattice, covering_punctures, generate_diamond_poset

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def diamonds(kind, size, T, max_base=None):
    return generate_diamond_poset(CausalLattice(kind, size, T), max_base)


@functools.lru_cache(maxsize=None)
def charts(kind, size, T, max_base=None):
    return covering_punctures(diamonds(kind, size, T, max_base))


@functools.lru_cache(maxsize=None)
def circle(n):
    return circle_poset(n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"ACCEPTANCE {k:2d}: {'PASS' if ok else 'FAIL'}  {note}")
