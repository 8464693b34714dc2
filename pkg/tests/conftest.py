from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from aidlab.algebra import BasisVec, Elem, Kind, make_spec
from aidlab.kernel import LPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_rats = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))
nonzero_rats = small_rats.filter(bool)

lpolys = st.dictionaries(st.integers(-6, 6), small_rats, max_size=5).map(LPoly)


def basis_vectors(rank=2, N=6, affine=True):
    hs = st.builds(lambda i, j: BasisVec(Kind.H, i, 2 * j), st.integers(1, rank), st.integers(-N // 2, N // 2))
    xs = st.builds(lambda i, j: BasisVec(Kind.X, i, 2 * j + 1), st.integers(1, rank),
                   st.integers(-(N + 1) // 2, (N - 1) // 2))
    options = [hs, xs] + ([st.just(BasisVec(Kind.K))] if affine else [])
    return st.one_of(*options)


def elements(rank=2, N=6, affine=True, max_size=5):
    return st.lists(st.tuples(basis_vectors(rank, N, affine), small_rats), max_size=max_size).map(Elem)


@pytest.fixture
def a1_affine():
    return make_spec(1, [[2]], "affine")


@pytest.fixture
def a1_loop():
    return make_spec(1, [[2]], "loop")


@pytest.fixture
def id2_affine():
    return make_spec(2, [[1, 0], [0, 1]], "affine")


@pytest.fixture
def id2_loop():
    return make_spec(2, [[1, 0], [0, 1]], "loop")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
