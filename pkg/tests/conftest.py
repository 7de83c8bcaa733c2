from __future__ import annotations

import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tropkit.core import INF, TropicalSystem

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

F1 = TropicalSystem.of([[1, 0, 0], [0, 1, 0]])
F2 = TropicalSystem.of([[0, 0, 0, 0, 0], [1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [1, 1, 1, 0, 0]])
UNSAT2 = TropicalSystem.of([[0, 1], [1, 0]])


@pytest.fixture
def f1():
    return F1


@pytest.fixture
def f2():
    return F2


def random_system(rng: random.Random, m_max=4, n_max=4, hi=5, inf_rate=0.0, n_min=2):
    m = rng.randint(1, m_max)
    n = rng.randint(n_min, n_max)
    rows = [[INF if rng.random() < inf_rate else rng.randint(0, hi) for _ in range(n)] for _ in range(m)]
    return TropicalSystem.of(rows, n)


@st.composite
def systems(draw, m_max=4, n_max=4, hi=5, with_inf=False):
    n = draw(st.integers(2, n_max))
    m = draw(st.integers(1, m_max))
    entry = st.integers(0, hi)
    if with_inf:
        entry = st.one_of(entry, st.just(INF))
    rows = draw(st.lists(st.lists(entry, min_size=n, max_size=n), min_size=m, max_size=m))
    return TropicalSystem.of(rows, n)


# one line per acceptance criterion, filled in by test_acceptance.report
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0][1:])):
        terminalreporter.write_line(line)
