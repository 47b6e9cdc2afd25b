"""Exhaustive corpora: finite posets up to isomorphism and small trees.

Posets are stored as tuples of *strict* up-rows (bit ``j`` of row ``i``
set when ``i < j``).  Every ``n``-element poset arises from an
``(n-1)``-element one by adding a new maximal element above a down-set,
so the corpus grows one size at a time and is deduplicated by a
canonical form.

The canonical form is individualization/refinement: refine the vertex
partition by counts of up- and down-neighbours per cell, then branch on
the first non-singleton cell and keep the least relabelled matrix over
all leaves.  Twins (vertices with the same neighbours) are interchangeable,
so only one per twin class is branched on.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .order import FinitePoset, _bits


def _down_rows(up: tuple) -> list[int]:
    n = len(up)
    down = [0] * n
    for i in range(n):
        for j in _bits(up[i]):
            down[j] |= 1 << i
    return down


def _refine(cells: list[list[int]], up, down) -> list[list[int]]:
    while True:
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci

        def sig(v):
            cu = [0] * len(cells)
            cd = [0] * len(cells)
            for u in _bits(up[v]):
                cu[where[u]] += 1
            for u in _bits(down[v]):
                cd[where[u]] += 1
            return tuple(cu), tuple(cd)

        new = []
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            groups: dict = {}
            for v in cell:
                groups.setdefault(sig(v), []).append(v)
            for key in sorted(groups):
                new.append(groups[key])
        if len(new) == len(cells):
            return new
        cells = new


def _twins(u, v, up, down) -> bool:
    mask = ~(1 << u | 1 << v)
    return (up[u] & mask) == (up[v] & mask) and (down[u] & mask) == (down[v] & mask) \
        and not (up[u] >> v & 1) and not (up[v] >> u & 1)


def canonical_form(up: tuple) -> tuple:
    """Least relabelled strict up-row tuple over the refinement leaves."""
    n = len(up)
    down = _down_rows(up)
    best = None

    def certificate(order):
        pos = {v: k for k, v in enumerate(order)}
        rows = []
        for v in order:
            row = 0
            for u in _bits(up[v]):
                row |= 1 << pos[u]
            rows.append(row)
        return tuple(rows)

    def search(cells):
        nonlocal best
        cells = _refine(cells, up, down)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            cert = certificate([c[0] for c in cells])
            if best is None or cert < best:
                best = cert
            return
        cell = cells[target]
        reps = []
        for v in cell:
            if not any(_twins(v, r, up, down) for r in reps):
                reps.append(v)
        for v in reps:
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(n))])
    return best


def _down_set_masks(up: tuple) -> list[int]:
    n = len(up)
    down = _down_rows(up)
    order = sorted(range(n), key=lambda i: bin(down[i]).count("1"))
    out = []

    def rec(k, mask):
        if k == n:
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        if down[i] & ~mask == 0:
            rec(k + 1, mask | 1 << i)

    rec(0, 0)
    return out


@lru_cache(maxsize=None)
def posets_of_size(n: int) -> tuple:
    """All ``n``-element posets up to isomorphism, as canonical up-rows,
    in sorted order."""
    if n < 1:
        raise ValueError("posets need at least one element")
    if n == 1:
        return ((0,),)
    seen = set()
    for up in posets_of_size(n - 1):
        for D in _down_set_masks(up):
            rows = tuple(row | (1 << (n - 1) if D >> i & 1 else 0)
                         for i, row in enumerate(up)) + (0,)
            seen.add(canonical_form(rows))
    return tuple(sorted(seen))


def poset_from_rows(up: tuple, name: str = "") -> FinitePoset:
    rel = [(f"x{i}", f"x{j}") for i, row in enumerate(up) for j in _bits(row)]
    return FinitePoset([f"x{i}" for i in range(len(up))], rel, name=name)


def poset_corpus(max_size: int = 8, min_size: int = 1) -> Iterator[FinitePoset]:
    """Every poset with ``min_size..max_size`` elements, one per
    isomorphism class, named ``n<size>_<index>``."""
    for n in range(min_size, max_size + 1):
        for k, up in enumerate(posets_of_size(n)):
            yield poset_from_rows(up, name=f"n{n}_{k}")


def canonical_bruteforce(up: tuple) -> tuple:
    """Least relabelled matrix over all ``n!`` permutations (oracle)."""
    n = len(up)
    best = None
    for perm in itertools.permutations(range(n)):
        pos = {v: k for k, v in enumerate(perm)}
        rows = tuple(sum(1 << pos[u] for u in _bits(up[v])) for v in perm)
        if best is None or rows < best:
            best = rows
    return best


# ---------------------------------------------------------------- trees

@lru_cache(maxsize=None)
def _rooted_trees(n: int) -> tuple:
    """Rooted unordered trees with ``n`` nodes as canonical nested tuples."""
    if n == 1:
        return ((),)
    out = set()
    for parts in _partitions(n - 1):
        for combo in _child_combos(parts):
            out.add(tuple(sorted(combo)))
    return tuple(sorted(out))


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _child_combos(sizes):
    pools = [_rooted_trees(s) for s in sizes]
    for combo in itertools.product(*pools):
        yield combo


def tree_nodes(shape: tuple) -> list[tuple]:
    """Node labels (child indices from the root) for a nested-tuple shape."""
    out = [()]
    for i, child in enumerate(shape):
        out += [(i,) + s for s in tree_nodes(child)]
    return out


def tree_corpus(max_nodes: int = 12) -> Iterator[list[tuple]]:
    """Every finite tree with at most ``max_nodes`` nodes up to
    isomorphism, as prefix-closed lists of label sequences."""
    for n in range(1, max_nodes + 1):
        for shape in _rooted_trees(n):
            yield tree_nodes(shape)
