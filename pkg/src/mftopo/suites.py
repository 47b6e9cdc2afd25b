"""Corpus sweeps.  Each suite yields record dicts (one per item) followed by
a summary record; the CLI prints them and the acceptance tests assert on
the summaries.

Items are numbered in corpus order; ``shard=(i, n)`` keeps items whose
number is ``i`` mod ``n``, so shards merge back by sorting on ``item``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator

from .classify import clopen_basis_check, is_discrete, is_proper
from .corpus import poset_corpus, tree_corpus
from .hybrid import (OpenCode, finite_poset_upgrade, is_maximal_filter_arithmetic,
                     open_complement, strong_regularity_witness, validate_axioms, code)
from .interval import IntervalSpace, RatInterval
from .order import enumerate_maximal_filters, filters_upset_masks, maximal_masks
from .trees import (comb_tree, explicit_tree, full_tree, maximal_branches, phi,
                    star_cover_check, tree_discreteness, tree_poset, well_founded)
from .report import Verdict


def _sharded(items, shard):
    i, n = shard
    for k, item in enumerate(items):
        if k % n == i:
            yield k, item


def suite_points(max_size: int = 8, shard=(0, 1)) -> Iterator[dict]:
    """Arithmetic maximality against brute-force maximality, all filters."""
    total = bad = 0
    for k, P in _sharded(poset_corpus(max_size), shard):
        H = finite_poset_upgrade(P)
        W = strong_regularity_witness(H)
        filters = filters_upset_masks(P)
        maximal = set(maximal_masks(filters))
        wrong = sum(bool(is_maximal_filter_arithmetic(P.unmask(m), H, W)) != (m in maximal)
                    for m in filters)
        total += len(filters)
        bad += wrong
        yield {"item": k, "name": P.name, "filters": len(filters), "disagree": wrong}
    yield {"suite": "points", "filters": total, "disagreements": bad}


def suite_proper(max_size: int = 8, shard=(0, 1)) -> Iterator[dict]:
    """Every proper poset has a clopen basis."""
    proper = exceptions = 0
    for k, P in _sharded(poset_corpus(max_size), shard):
        rp = is_proper(P)
        rc = clopen_basis_check(P) if rp.holds else None
        proper += rp.holds
        exceptions += bool(rc is not None and not rc.holds)
        yield {"item": k, "name": P.name, "proper": rp.verdict,
               "clopen": rc.verdict if rc else None}
    yield {"suite": "proper", "proper": proper, "exceptions": exceptions}


# ---------------------------------------------------------------- complement lemma

def finite_complement_violations(H, U) -> int:
    """Points outside exactly-one-of ``cl(U)``, ``U^c``, plus points of
    ``U ∩ cl(U^c)``.  ``U^c`` is taken from its generators, not its
    summary, so the pseudo-complement is not used to check itself."""
    Uc = OpenCode(open_complement(U, H).gens)
    clU = H.closure_of_code(U)
    ext_c = H.extent_of_code(Uc)
    ext_u = H.extent_of_code(U)
    cl_c = H.closure_of_code(Uc)
    bad = 0
    for m in H.points():
        bad += (m in clU) == (m in ext_c)
        bad += m in ext_u and m in cl_c
    return bad


def _in_complement_code(H, Uc: OpenCode, x, depth: int = 48) -> bool:
    """Some basic interval around ``x`` is a generator of ``U^c``."""
    for j in range(1, depth):
        if Uc.member(RatInterval.around(x, Fraction(1, 2 ** j))):
            return True
    return False


def interval_complement_violations(H: IntervalSpace, U) -> int:
    Uc = open_complement(code(U), H)
    pts = H.decisive_points(U, Uc.summary)
    pts += [Fraction(i, 1000) for i in range(0, 1001, 37)]
    bad = 0
    for x in sorted(set(pts)):
        in_cl = U.closure_contains(x)
        in_c = _in_complement_code(H, Uc, x)
        bad += in_cl == in_c
        bad += U.contains(x) and Uc.summary.closure_contains(x)
    return bad


def suite_complement(max_size: int = 8, samples: int = 100, seed: int = 0,
                     shard=(0, 1)) -> Iterator[dict]:
    bad_total = 0
    for k, P in _sharded(poset_corpus(max_size), shard):
        H = finite_poset_upgrade(P)
        els = P.elements
        opens = [code(H.embed(p)) for p in els]
        opens += [code(H.embed(p), H.embed(q)) for i, p in enumerate(els) for q in els[i + 1:]]
        bad = sum(finite_complement_violations(H, U) for U in opens)
        bad_total += bad
        yield {"item": k, "name": P.name, "opens": len(opens), "violations": bad}
    if shard[0] == 0:
        H = IntervalSpace()
        sample = H.sample(samples, random.Random(seed))
        bad = sum(interval_complement_violations(H, U) for U in sample)
        bad_total += bad
        yield {"item": "interval", "opens": len(sample), "violations": bad}
    yield {"suite": "complement", "violations": bad_total}


# ---------------------------------------------------------------- interval axioms

def suite_interval(size: int = 200, seed: int = 0, shard=(0, 1)) -> Iterator[dict]:
    H = IntervalSpace()
    sample = H.sample(size, random.Random(seed))
    report = validate_axioms(H, sample=sample)
    for r in report.results:
        yield {"axiom": r.axiom, "verdict": Verdict.HOLDS if r.ok else Verdict.FAILS,
               "witness": None if r.ok else str(r.witness)}
    yield {"suite": "interval", "sample": len(sample), "failures": len(report.failures())}


# ---------------------------------------------------------------- trees

def tree_items(max_nodes: int = 12):
    for nodes in tree_corpus(max_nodes):
        yield explicit_tree(nodes)
    yield full_tree(2)
    yield comb_tree(0)


def suite_trees(max_nodes: int = 12, budget: int = 16, shard=(0, 1)) -> Iterator[dict]:
    """Discreteness and the star cover against the well-foundedness
    oracle; finite trees also against the maximal branches of Φ(T)."""
    bad = count = 0
    for k, T in _sharded(tree_items(max_nodes), shard):
        wf = well_founded(T, budget).verdict
        d = tree_discreteness(T, budget).verdict
        c = star_cover_check(T, budget).verdict
        wrong = (d is not wf) + (c is not wf)
        if T.family == "explicit-finite":
            F = phi(T)
            filters = set(enumerate_maximal_filters(tree_poset(F), bound=4 * len(F.nodes)))
            wrong += filters != set(maximal_branches(F))
            starred = all(any(s and s[-1] == "*" for s in m) for m in filters)
            wrong += starred != (wf is Verdict.HOLDS)
            isolated = is_discrete(tree_poset(F), bound=4 * len(F.nodes)).verdict
            wrong += isolated is not wf
        bad += bool(wrong)
        count += 1
        yield {"item": k, "tree": T.name or T.family, "nodes": len(T.nodes) or None,
               "wellfounded": wf, "discrete": d, "cover": c}
    yield {"suite": "trees", "trees": count, "disagreements": bad}


SUITES = {
    "points": suite_points,
    "proper": suite_proper,
    "complement": suite_complement,
    "interval": suite_interval,
    "trees": suite_trees,
}
