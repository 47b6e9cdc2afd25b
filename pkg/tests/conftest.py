from __future__ import annotations

import pytest
from hypothesis import strategies as st

from mftopo.corpus import poset_corpus
from mftopo.order import FinitePoset


def vposet():
    return FinitePoset("abc", [("a", "c"), ("b", "c")], name="vposet")


def wedge():
    return FinitePoset("zxy", [("z", "x"), ("z", "y")], name="wedge")


def antichain(n=2):
    return FinitePoset("abcdefgh"[:n], name=f"antichain{n}")


def chain(n=3):
    els = [f"c{i}" for i in range(n)]
    return FinitePoset(els, zip(els, els[1:]), name=f"chain{n}")


@st.composite
def posets(draw, max_size=7):
    """Random posets on ``0..n-1``; relations only go up in index, so the
    transitive closure is always antisymmetric."""
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return FinitePoset(range(n), [p for p, k in zip(pairs, keep) if k])


@pytest.fixture(scope="session")
def corpus8():
    return list(poset_corpus(8))


@pytest.fixture(scope="session")
def corpus5():
    return list(poset_corpus(5))


# acceptance results: (criterion, passed, detail), printed after the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
