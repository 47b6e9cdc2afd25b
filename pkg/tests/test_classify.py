from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from conftest import antichain, chain, posets, vposet, wedge
from mftopo.classify import (CHECKS, Extents, clopen_basis_check, covers, is_discrete,
                             is_normal, is_proper, is_regular, is_strongly_regular)
from mftopo.errors import ResourceError
from mftopo.hybrid import finite_poset_upgrade
from mftopo.interval import IntervalSpace, parse_interval, point_at
from mftopo.order import FinitePoset, enumerate_maximal_filters
from mftopo.report import Verdict


def extent(P, p):
    return {m for m in enumerate_maximal_filters(P) if p in m}


def test_proper_examples():
    assert is_proper(antichain(3)).holds
    assert is_proper(vposet()).holds
    r = is_proper(wedge())
    assert r.verdict is Verdict.FAILS
    assert r.witness == ("x", "y")


def test_wedge_witness_replays():
    P = wedge()
    x, y = is_proper(P).witness
    # incomparable, yet the extents are nested
    assert not P.leq(x, y) and not P.leq(y, x)
    assert extent(P, x) <= extent(P, y) or extent(P, y) <= extent(P, x)


def test_comparable_mode_weaker():
    # N_x ∩ N_y = {b, c} is realised by no element; x and y are incomparable
    P = FinitePoset("abcdxy", [("a", "x"), ("b", "x"), ("c", "x"),
                               ("b", "y"), ("c", "y"), ("d", "y")])
    assert is_proper(P, mode="comparable").holds
    r = is_proper(P)
    assert not r.holds and r.witness == ("x", "y") and "meet" in r.detail
    with pytest.raises(ValueError):
        is_proper(P, mode="bogus")


def test_cover_example():
    P = vposet()
    r = covers(P, ["a"])
    assert r.verdict is Verdict.FAILS
    assert r.witness == frozenset({"b", "c"})
    assert covers(P, ["a", "b"]).holds
    assert covers(P, ["c"]).holds


def test_regular_finite_trivial_witness():
    r = is_regular(vposet())
    assert r.holds and "q = p" in r.detail


def test_strongly_regular_finite():
    r, W = is_strongly_regular(finite_poset_upgrade(vposet()))
    assert r.holds
    assert W.contains("c", "a")


def test_strongly_regular_interval():
    r, W = is_strongly_regular(IntervalSpace(), sample=60)
    assert r.holds
    assert W.contains(parse_interval("(1/8,7/8)"), parse_interval("(1/4,1/2)"))


def test_regular_interval_with_oracle():
    H = IntervalSpace()
    pairs = [(point_at(x), parse_interval(p)) for x, p in
             [("1/3", "(1/4,1/2)"), ("0", "[0,1/8)"), ("1", "(7/8,1]")]]
    assert is_regular(H, oracle=pairs, budget=512).holds
    with pytest.raises(ValueError):
        is_regular(H)


def test_normal_both_methods():
    P = antichain(3)
    for method in ("basic", "hybrid"):
        r = is_normal(P, method=method)
        assert r.holds
        assert r.detail.count("|") == 3


def test_discrete_finite():
    assert is_discrete(chain(4)).holds
    assert is_discrete(vposet()).holds


def test_oracle_bound():
    with pytest.raises(ResourceError):
        is_proper(antichain(8), bound=4)


def test_checks_table():
    for name, check in CHECKS.items():
        assert check(vposet()).verdict in (Verdict.HOLDS, Verdict.FAILS), name


# ---------------------------------------------------------------- properties

@settings(max_examples=80, deadline=None)
@given(posets())
def test_finite_spaces_are_regular_discrete_clopen(P):
    assert is_regular(P).holds
    assert is_discrete(P).holds
    assert clopen_basis_check(P).holds
    assert is_strongly_regular(P)[0].holds
    assert is_normal(P).holds


@settings(max_examples=80, deadline=None)
@given(posets())
def test_proper_matches_definition(P):
    pts = enumerate_maximal_filters(P)
    ext = {p: frozenset(m for m in pts if p in m) for p in P.elements}
    order_ok = all(P.leq(p, q) == (ext[p] <= ext[q])
                   for p, q in itertools.product(P.elements, repeat=2))
    realised = set(ext.values())
    meet_ok = all(not (ext[p] & ext[q]) or (ext[p] & ext[q]) in realised
                  for p, q in itertools.combinations(P.elements, 2))
    r = is_proper(P)
    assert r.holds == (order_ok and meet_ok)
    if not r.holds:
        p, q = r.witness
        if "order" in r.detail:
            assert P.leq(p, q) != (ext[p] <= ext[q])
        else:
            assert (ext[p] & ext[q]) not in realised


@settings(max_examples=80, deadline=None)
@given(posets())
def test_cover_witness_replays(P):
    minimal = [p for p in P.elements if not any(P.leq(q, p) and q != p for q in P.elements)]
    pts = minimal[:1]
    r = covers(P, pts)
    if r.holds:
        assert all(set(m) & set(pts) for m in enumerate_maximal_filters(P))
    else:
        assert r.witness in set(enumerate_maximal_filters(P))
        assert not r.witness & set(pts)


def test_extents_closure_is_identity_on_finite():
    E = Extents(vposet())
    for U in range(E.full + 1):
        assert E.closure(U) == U
