from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mftopo.classify import covers, is_discrete, is_proper
from mftopo.corpus import tree_corpus
from mftopo.errors import InputError, ParseError
from mftopo.hybrid import validate_axioms
from mftopo.order import enumerate_maximal_filters
from mftopo.report import Verdict
from mftopo.trees import (STAR, comb_tree, explicit_tree, format_tree, full_tree,
                          maximal_branches, parse_tree, phi, predicate_tree, prefix_poset,
                          star_cover_check, tree_discreteness, tree_poset, tree_to_hybrid,
                          well_founded)

BINARY2 = [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


def points(T):
    return set(enumerate_maximal_filters(tree_poset(T), bound=64))


@st.composite
def finite_trees(draw, max_nodes=9):
    nodes = {()}
    for _ in range(draw(st.integers(0, max_nodes - 1))):
        parent = draw(st.sampled_from(sorted(nodes)))
        nodes.add(parent + (draw(st.integers(0, 2)),))
    return explicit_tree(nodes)


# ---------------------------------------------------------------- phi

def test_phi_root_only():
    F = phi(explicit_tree([]))
    assert F.finite_nodes() == [(), (STAR,)]
    assert len(points(F)) == 1


def test_phi_full_binary_membership():
    F = phi(full_tree(2))
    for s in itertools.product((0, 1), repeat=3):
        assert s in F and s + (STAR,) in F
    assert (2,) not in F
    assert (0, STAR, 0) not in F and (STAR, STAR) not in F


def test_phi_twice_rejected():
    with pytest.raises(InputError):
        phi(phi(full_tree(2)))


@settings(max_examples=60, deadline=None)
@given(finite_trees())
def test_phi_doubles_size(T):
    F = phi(T)
    assert len(F.finite_nodes()) == 2 * len(T.nodes)
    for s in F.finite_nodes():
        assert all(s[:i] in F for i in range(len(s)))
        assert STAR not in s[:-1]


# ---------------------------------------------------------------- posets and points

def test_chain_tree_one_point():
    H = tree_to_hybrid(explicit_tree([(0,), (0, 0)]))
    assert len(H.points()) == 1


def test_binary_depth2_four_isolated_points():
    T = explicit_tree(BINARY2)
    H = tree_to_hybrid(T)
    assert len(H.points()) == 4
    assert is_discrete(tree_poset(T)).holds
    assert validate_axioms(H).ok


def test_phi_star_extents_are_singletons():
    F = phi(explicit_tree(BINARY2))
    pts = points(F)
    for s in F.finite_nodes():
        if s and s[-1] == STAR:
            assert sum(s in m for m in pts) == 1


@settings(max_examples=60, deadline=None)
@given(finite_trees())
def test_points_are_maximal_branches(T):
    assert points(T) == set(maximal_branches(T))
    F = phi(T)
    assert points(F) == set(maximal_branches(F))


def test_prefix_direction_collapses_points():
    T = explicit_tree(BINARY2)
    assert len(enumerate_maximal_filters(prefix_poset(T))) == 1
    assert len(points(T)) == 4


def test_properness_exactly_without_unary_nodes():
    for nodes in tree_corpus(7):
        T = explicit_tree(nodes)
        unary = any(sum(1 for c in T.children(s)) == 1 for s in T.nodes)
        assert is_proper(tree_poset(T)).holds == (not unary), nodes


def test_phi_is_never_proper():
    F = phi(explicit_tree(BINARY2))
    r = is_proper(tree_poset(F))
    assert not r.holds
    leaf, star = r.witness
    # a leaf and its starred child have the same extent
    assert star == leaf + (STAR,) or leaf == star + (STAR,)


# ---------------------------------------------------------------- correspondences

def test_explicit_tree_discrete_and_covered():
    T = explicit_tree([(0,), (0, 0), (0, 0, 0), (1,)])
    assert tree_discreteness(T).holds
    r = star_cover_check(T)
    assert r.holds and "filters checked" in r.detail


def test_root_only_covered():
    assert star_cover_check(explicit_tree([])).holds


@pytest.mark.parametrize("T, label", [(full_tree(2), "0"), (comb_tree(0), "0"),
                                      (comb_tree(3), "3")])
def test_infinite_families_fail_with_path(T, label):
    for check in (tree_discreteness, star_cover_check):
        r = check(T, budget=5)
        assert r.verdict is Verdict.FAILS
        assert r.witness == "path:" + ",".join([label] * 5) + ",..."


def test_comb_membership():
    T = comb_tree(0)
    assert (0, 0, 0) in T and (0, 0, 1) in T
    assert (0, 1, 0) not in T and (1, 1) not in T


def test_full_zero_ary_is_root_only():
    assert tree_discreteness(full_tree(0)).holds


def test_classify_routes_presented_trees():
    assert is_discrete(full_tree(2), budget=4).verdict is Verdict.FAILS
    assert covers(comb_tree(0), budget=4).verdict is Verdict.FAILS


def test_user_predicate_bounded_depth():
    T = predicate_tree(lambda s: len(s) <= 3, lambda d: 1)
    wf = well_founded(T)
    assert wf.verdict is Verdict.HOLDS
    assert tree_discreteness(T).holds


def test_user_predicate_budget():
    T = predicate_tree(lambda s: all(a == 0 for a in s), lambda d: 0)
    r = tree_discreteness(T, budget=6)
    assert r.verdict is Verdict.BUDGET
    assert r.witness == "deepest:0.0.0.0.0.0"


def test_user_predicate_needs_bound():
    with pytest.raises(InputError):
        predicate_tree(lambda s: True, None)


@settings(max_examples=60, deadline=None)
@given(finite_trees())
def test_finite_phi_points_all_starred(T):
    F = phi(T)
    assert all(any(s and s[-1] == STAR for s in m) for m in points(F))
    assert is_discrete(tree_poset(F), bound=64).holds


# ---------------------------------------------------------------- text format

def test_parse_and_format_roundtrip():
    text = "tree depth2\n" + "".join(f"node {'.'.join(map(str, s))}\n" for s in
                                     sorted(BINARY2, key=lambda s: (len(s), s)))
    T = parse_tree(text)
    assert T.nodes == frozenset(BINARY2) | {()}
    assert format_tree(T) == text
    assert parse_tree(format_tree(comb_tree(2))).spine == 2
    assert parse_tree("tree t\nfamily full-k-ary k=3\n").k == 3


@pytest.mark.parametrize("text, line", [
    ("tree t\nnode 0.x\n", 2),
    ("tree t\nnode 1.0\n", None),
    ("tree t\n\nfrob 1\n", 3),
    ("node 0\n", None),
])
def test_parse_errors(text, line):
    with pytest.raises((ParseError, InputError)) as exc:
        parse_tree(text)
    if line is not None:
        assert exc.value.line == line
