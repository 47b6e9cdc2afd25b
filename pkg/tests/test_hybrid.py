from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from mftopo.errors import ParseError, StructuralError, WitnessError
from mftopo.hybrid import (OpenCode, RegularityWitness, TableHybrid, code,
                           finite_poset_upgrade, is_maximal_filter_arithmetic,
                           open_complement, parse_hybrid, strong_regularity_witness,
                           validate_axioms)
from mftopo.interval import FiniteUnion, IntervalSpace, RatInterval, point_at
from mftopo.order import (enumerate_maximal_filters, filters_bruteforce_masks, in_closure,
                          maximal_masks)
from mftopo.report import Verdict
from mftopo.suites import finite_complement_violations

from conftest import antichain, posets, vposet


def test_antichain_upgrade_passes_all_axioms():
    H = finite_poset_upgrade(antichain())
    assert validate_axioms(H).ok
    assert validate_axioms(H.to_table()).ok


def test_mutated_pseudo_complement_breaks_axiom_8():
    T = finite_poset_upgrade(antichain()).to_table()
    bad = T.with_pc("a", T.zero)
    report = validate_axioms(bad)
    assert [r.axiom for r in report.failures()] == [8]
    assert "b" in report[8].witness


def test_interval_axioms_on_fifty_samples():
    H = IntervalSpace()
    assert validate_axioms(H, sample=H.sample(50, random.Random(7))).ok


def test_non_lattice_carrier_is_rejected():
    # the diamond M3: a lattice, but not distributive
    els = ["0", "x", "y", "z", "1"]
    le = [("0", e) for e in "xyz"] + [(e, "1") for e in "xyz"]
    with pytest.raises(StructuralError):
        validate_axioms(TableHybrid(els, le, ["x", "y", "z"]))


def test_open_complement_examples():
    V = finite_poset_upgrade(vposet())
    U = open_complement(code(V.embed("a")), V)
    assert V.extent_of_code(OpenCode(U.gens)) == {frozenset("bc")}
    whole = open_complement(code(V.one), V)
    assert V.extent_of_code(OpenCode(whole.gens)) == frozenset()
    H = IntervalSpace()
    Uc = open_complement(code(FiniteUnion.of(RatInterval(F(1, 4), F(3, 4)))), H)
    assert Uc.summary == FiniteUnion.of(RatInterval(F(0), F(1, 4), True, False),
                                       RatInterval(F(3, 4), F(1), False, True))
    assert Uc.member(RatInterval(F(0), F(1, 5), True, False))
    assert not Uc.member(RatInterval(F(0), F(1, 3), True, False))


def test_strong_regularity_examples():
    H = IntervalSpace()
    W = strong_regularity_witness(H)
    assert W.contains(RatInterval(F(1, 8), F(7, 8)), RatInterval(F(1, 4), F(1, 2)))
    assert not W.contains(RatInterval(F(1, 4), F(1, 2)), RatInterval(F(1, 8), F(7, 8)))
    V = finite_poset_upgrade(vposet())
    WV = strong_regularity_witness(V)
    assert all(p in WV[p] for p in "abc")
    assert WV["c"] == frozenset("abc")


def test_missing_witness_entry():
    V = finite_poset_upgrade(vposet())
    with pytest.raises(WitnessError):
        RegularityWitness(V, {}).members("a")


def test_arithmetic_examples():
    V = finite_poset_upgrade(vposet())
    W = strong_regularity_witness(V)
    assert is_maximal_filter_arithmetic({"a", "c"}, V, W)
    r = is_maximal_filter_arithmetic({"c"}, V, W)
    assert not r and r.witness[0] == "a"
    H = IntervalSpace()
    assert is_maximal_filter_arithmetic(point_at(F(1, 2)), H,
                                        strong_regularity_witness(H), budget=1000) \
        is Verdict.HOLDS


def test_parse_hybrid():
    text = """hybrid two
latt bot
latt a
latt b
latt top
basic a
basic b
le bot a
le bot b
le a top
le b top
"""
    H = parse_hybrid(text)
    assert H.pc("a") == "b" and H.meet("a", "b") == "bot"
    assert validate_axioms(H).ok
    with pytest.raises(ParseError, match="line 2"):
        parse_hybrid("hybrid x\nlatt\n")
    with pytest.raises(ParseError, match="unknown element"):
        parse_hybrid("hybrid x\nlatt a\nle a q\n")


# ---------------------------------------------------------------- properties

@settings(max_examples=80, deadline=None)
@given(posets(max_size=6))
def test_upgrades_pass_the_axioms(P):
    assert validate_axioms(finite_poset_upgrade(P)).ok


@settings(max_examples=120, deadline=None)
@given(posets())
def test_arithmetic_maximality_matches_brute_force(P):
    H = finite_poset_upgrade(P)
    W = strong_regularity_witness(H)
    filters = filters_bruteforce_masks(P)
    maximal = set(maximal_masks(filters))
    for m in filters:
        assert bool(is_maximal_filter_arithmetic(P.unmask(m), H, W)) == (m in maximal)


@settings(max_examples=80, deadline=None)
@given(posets(max_size=6))
def test_complement_lemma(P):
    H = finite_poset_upgrade(P)
    for p in P.elements:
        for q in P.elements:
            assert finite_complement_violations(H, code(H.embed(p), H.embed(q))) == 0


@settings(max_examples=80, deadline=None)
@given(posets())
def test_witness_sound_and_complete(P):
    H = finite_poset_upgrade(P)
    W = strong_regularity_witness(H)
    points = enumerate_maximal_filters(P)
    for p in P.elements:
        Np = {m for m in points if p in m}
        cover = set()
        for q in W[p]:
            closure = {m for m in points if in_closure(m, {q}, P)}
            assert closure <= Np
            cover |= {m for m in points if q in m}
        assert cover == Np
