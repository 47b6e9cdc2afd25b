from __future__ import annotations

import itertools
import random

import pytest

from mftopo.corpus import (canonical_bruteforce, canonical_form, poset_corpus,
                           posets_of_size, tree_corpus, tree_nodes)
from mftopo.order import _bits

# unlabelled posets (OEIS A000112) and rooted trees (A000081)
POSET_COUNTS = [1, 2, 5, 16, 63, 318, 2045, 16999]
TREE_COUNTS = [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766]


@pytest.mark.parametrize("n", range(1, 9))
def test_poset_counts(n):
    assert len(posets_of_size(n)) == POSET_COUNTS[n - 1]


def _labelled_posets(n):
    """Every strict order on 0..n-1 as up-rows, by brute force over relations."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for keep in itertools.product((0, 1), repeat=len(pairs)):
        rel = {p for p, k in zip(pairs, keep) if k}
        if any((j, i) in rel for i, j in rel):
            continue
        if any((i, l) not in rel for i, j in rel for k, l in rel if j == k and i != l):
            continue
        yield tuple(sum(1 << j for j in range(n) if (i, j) in rel) for i in range(n))


@pytest.mark.parametrize("n", range(1, 5))
def test_classes_match_labelled_brute_force(n):
    classes = {canonical_bruteforce(up) for up in _labelled_posets(n)}
    assert len(classes) == POSET_COUNTS[n - 1]
    assert classes == {canonical_bruteforce(up) for up in posets_of_size(n)}


def _shuffle(up, rng):
    n = len(up)
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            rows[perm[i]] |= 1 << perm[j]
    return tuple(rows)


@pytest.mark.parametrize("n", range(2, 8))
def test_canonical_form_is_label_invariant(n):
    rng = random.Random(n)
    for up in rng.sample(posets_of_size(n), min(60, len(posets_of_size(n)))):
        assert canonical_form(_shuffle(up, rng)) == up
        if n <= 6:
            assert canonical_bruteforce(_shuffle(up, rng)) == canonical_bruteforce(up)


def test_corpus_names_and_validity():
    items = list(poset_corpus(4))
    assert len(items) == sum(POSET_COUNTS[:4])
    assert items[0].name == "n1_0" and len(items[-1]) == 4


def test_tree_counts_and_shapes():
    trees = list(tree_corpus(12))
    sizes = [len(t) for t in trees]
    assert [sizes.count(n) for n in range(1, 13)] == TREE_COUNTS
    for nodes in trees[:500]:
        have = set(nodes)
        assert () in have and all(s[:-1] in have for s in nodes if s)


def test_tree_nodes_of_a_shape():
    assert tree_nodes(((), ((),))) == [(), (0,), (1,), (1, 0)]
