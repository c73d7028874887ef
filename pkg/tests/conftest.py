import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from weakrel.bounds import INF  # noqa: E402
from weakrel.dbm import Dbm  # noqa: E402
from weakrel.octagon import OctMatrix  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CORPUS = Path(__file__).parent / "corpus"
FIXTURES = Path(__file__).parent / "fixtures"

bounds = st.one_of(st.integers(-6, 6).map(Fraction), st.just(INF))


@st.composite
def dbms(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    size = n + 1
    rows = [[Fraction(0) if i == j else draw(bounds) for j in range(size)] for i in range(size)]
    return Dbm(n, tuple(tuple(r) for r in rows))


@st.composite
def octs(draw, max_n=2):
    n = draw(st.integers(1, max_n))
    size = 2 * n
    rows = [[Fraction(0) if i == j else draw(bounds) for j in range(size)] for i in range(size)]
    return OctMatrix(n, tuple(tuple(r) for r in rows))


@st.composite
def dbm_pairs(draw, max_n=3):
    a = draw(dbms(max_n))
    size = a.dim + 1
    rows = [[Fraction(0) if i == j else draw(bounds) for j in range(size)] for i in range(size)]
    return a, Dbm(a.dim, tuple(tuple(r) for r in rows))


@st.composite
def oct_pairs(draw, max_n=2):
    a = draw(octs(max_n))
    size = 2 * a.dim
    rows = [[Fraction(0) if i == j else draw(bounds) for j in range(size)] for i in range(size)]
    return a, OctMatrix(a.dim, tuple(tuple(r) for r in rows))


@pytest.fixture
def corpus_files():
    return sorted(CORPUS.glob("*.w"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
