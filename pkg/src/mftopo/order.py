"""Finite posets, filters, maximal filters, extents and closure.

Direction convention used throughout the package: filters are upward
closed and *downward* directed (two members share a common lower bound
inside the filter), and two elements are *compatible* when they have a
common lower bound.  Under this convention ``p <= q`` implies
``N_p ⊆ N_q``.  The textbook pre-filter clause is sometimes written with
a common *upper* bound; that reading makes every proof about meets and
closures fail, so it is not used here (``is_filter`` documents both).

Elements are opaque hashable identifiers.  Internally every element gets
an index and order relations are stored as bitmasks, which keeps the
exhaustive oracles fast enough for corpus sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import (InputError, ParseError, ResourceError, StructuralError,
                     UnknownElementError)

DEFAULT_ORACLE_BOUND = 20


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """Immutable finite partial order.

    ``relations`` are pairs ``(a, b)`` meaning ``a <= b``; reflexivity is
    implicit and the transitive closure is taken on construction.
    """

    def __init__(self, elements: Sequence[Hashable], relations: Iterable[tuple] = (),
                 name: str = ""):
        elements = tuple(elements)
        if not elements:
            raise StructuralError("empty poset: a poset needs at least one element")
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise StructuralError(f"duplicate element {e!r}")
            index[e] = i
        n = len(elements)
        up = [1 << i for i in range(n)]
        for a, b in relations:
            if a not in index:
                raise UnknownElementError(a)
            if b not in index:
                raise UnknownElementError(b)
            up[index[a]] |= 1 << index[b]
        # Warshall on bit rows
        for k in range(n):
            kbit = 1 << k
            row = up[k]
            for i in range(n):
                if up[i] & kbit:
                    up[i] |= row
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        for i in range(n):
            both = up[i] & down[i] & ~(1 << i)
            if both:
                j = next(_bits(both))
                raise StructuralError(
                    f"antisymmetry fails: {elements[i]!r} and {elements[j]!r}",
                    witness=(elements[i], elements[j]))
        self.name = name
        self.elements = elements
        self.index = index
        self.up = tuple(up)
        self.down = tuple(down)
        self.full = (1 << n) - 1

    @classmethod
    def from_masks(cls, up_rows: Sequence[int], name: str = "") -> FinitePoset:
        """Build from already transitively closed ``up`` rows over ``0..n-1``."""
        rel = [(i, j) for i, row in enumerate(up_rows) for j in _bits(row) if i != j]
        return cls(range(len(up_rows)), rel, name=name)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self.index

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinitePoset{label} n={len(self)}>"

    def idx(self, e) -> int:
        try:
            return self.index[e]
        except KeyError:
            raise UnknownElementError(e) from None

    def leq(self, a, b) -> bool:
        return bool(self.up[self.idx(a)] >> self.idx(b) & 1)

    def relations(self):
        """All strict pairs ``(a, b)`` with ``a < b``."""
        for i, row in enumerate(self.up):
            for j in _bits(row & ~(1 << i)):
                yield self.elements[i], self.elements[j]

    def mask(self, subset: Iterable) -> int:
        m = 0
        for e in subset:
            m |= 1 << self.idx(e)
        return m

    def unmask(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in _bits(mask))

    def compatible(self, a, b) -> bool:
        """Common lower bound exists."""
        return bool(self.down[self.idx(a)] & self.down[self.idx(b)])

    def minimal_elements(self) -> tuple:
        return tuple(e for i, e in enumerate(self.elements)
                     if self.down[i] == 1 << i)

    def relabel(self, name: str) -> FinitePoset:
        return FinitePoset(self.elements, self.relations(), name=name)


@dataclass(frozen=True)
class Check:
    """Boolean verdict with a human-readable reason; truthy iff ``ok``."""

    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------- masks

def up_closure_mask(P: FinitePoset, mask: int) -> int:
    out = 0
    for i in _bits(mask):
        out |= P.up[i]
    return out


def is_filter_mask(P: FinitePoset, mask: int) -> bool:
    if not mask:
        return False
    members = list(_bits(mask))
    for i in members:
        if P.up[i] & ~mask:
            return False
    for a in range(len(members)):
        da = P.down[members[a]] & mask
        for b in range(a + 1, len(members)):
            if not da & P.down[members[b]]:
                return False
    return True


def filters_bruteforce_masks(P: FinitePoset) -> list[int]:
    """Every filter, by scanning all ``2^n`` subsets (oracle)."""
    return [m for m in range(1, P.full + 1) if is_filter_mask(P, m)]


def up_set_masks(P: FinitePoset) -> list[int]:
    """Every upward closed subset (including the empty one), found by
    deciding elements from the top down: an element may join only when
    everything above it already has."""
    order = sorted(range(len(P)), key=lambda i: -bin(P.down[i]).count("1"))
    out = []

    def rec(k, mask):
        if k == len(order):
            out.append(mask)
            return
        i = order[k]
        rec(k + 1, mask)
        if P.up[i] & ~(1 << i) & ~mask == 0:
            rec(k + 1, mask | 1 << i)

    rec(0, 0)
    return out


def filters_upset_masks(P: FinitePoset) -> list[int]:
    """Every filter, scanning only the up-sets (each filter is one)."""
    return [m for m in up_set_masks(P) if m and is_filter_mask(P, m)]


def maximal_masks(masks: Sequence[int]) -> list[int]:
    """Inclusion-maximal members of a family of bitmasks."""
    out = []
    for m in masks:
        if not any(m != o and m & o == m for o in masks):
            out.append(m)
    return out


def maximal_filter_masks(P: FinitePoset) -> list[int]:
    # A nonempty downward directed finite set has a least element, so every
    # filter of a finite poset is principal; maximal ones sit on minimal elements.
    return sorted(P.up[i] for i in range(len(P)) if P.down[i] == 1 << i)


# ---------------------------------------------------------------- public API

def _check_subset(S, P: FinitePoset) -> frozenset:
    S = frozenset(S)
    for e in S:
        if e not in P:
            raise UnknownElementError(e)
    return S


def upward_closure(S: Iterable, P: FinitePoset) -> frozenset:
    """``{x : s <= x for some s in S}``."""
    S = _check_subset(S, P)
    return P.unmask(up_closure_mask(P, P.mask(S)))


def is_filter(S: Iterable, P: FinitePoset) -> Check:
    """Nonempty, upward closed, and downward directed.

    The directedness clause asks for a common lower bound inside ``S``.
    An upper-bound reading also circulates; under it an up-closed set
    is directed for free whenever it has a top, and maximal filters
    collapse to ``P`` itself, so it is not the one implemented.
    """
    S = _check_subset(S, P)
    if not S:
        return Check(False, "empty set is not a pre-filter")
    mask = P.mask(S)
    for e in sorted(S, key=P.idx):
        outside = P.up[P.idx(e)] & ~mask
        if outside:
            above = P.elements[next(_bits(outside))]
            return Check(False, f"not upward closed: {e!r} <= {above!r} missing",
                         witness=(e, above))
    members = sorted(S, key=P.idx)
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            x, y = members[a], members[b]
            if not P.down[P.idx(x)] & P.down[P.idx(y)] & mask:
                return Check(False, f"no common lower bound of {x!r} and {y!r} in set",
                             witness=(x, y))
    return Check(True, "filter")


def _canonical(P: FinitePoset, masks: Iterable[int]) -> list[frozenset]:
    ordered = sorted(masks, key=lambda m: tuple(_bits(m)))
    return [P.unmask(m) for m in ordered]


def enumerate_maximal_filters(P: FinitePoset, bound: int = DEFAULT_ORACLE_BOUND,
                              method: str = "principal") -> list[frozenset]:
    """All maximal filters of ``P`` in canonical order.

    ``method="principal"`` uses the fact that finite filters are principal
    up-sets; ``method="subsets"`` scans every subset and ``method="upsets"``
    scans the up-sets only.  The last two are the independent oracles.
    """
    if len(P) > bound:
        raise ResourceError(f"poset has {len(P)} elements, oracle bound is {bound}",
                            bound=bound)
    if method == "principal":
        masks = maximal_filter_masks(P)
    elif method == "subsets":
        masks = maximal_masks(filters_bruteforce_masks(P))
    elif method == "upsets":
        masks = maximal_masks(filters_upset_masks(P))
    else:
        raise InputError(f"unknown enumeration method {method!r}")
    return _canonical(P, masks)


def extent(p, P: FinitePoset, points: Sequence[frozenset] | None = None) -> frozenset:
    """``N_p``: the maximal filters containing ``p``."""
    P.idx(p)
    if points is None:
        points = enumerate_maximal_filters(P)
    return frozenset(m for m in points if p in m)


def extent_of_set(U: Iterable, P: FinitePoset,
                  points: Sequence[frozenset] | None = None) -> frozenset:
    """``N_U``: union of the extents of the members of ``U``."""
    U = _check_subset(U, P)
    if points is None:
        points = enumerate_maximal_filters(P)
    return frozenset(m for m in points if m & U)


def in_closure(m: Iterable, U: Iterable, P: FinitePoset) -> bool:
    """Every ``q`` in ``m`` has a common lower bound with some ``p`` in ``U``."""
    m = _check_subset(m, P)
    U = _check_subset(U, P)
    umask = 0
    for p in U:
        umask |= P.down[P.idx(p)]
    return all(P.down[P.idx(q)] & umask for q in m)


def filter_at(e, P: FinitePoset) -> frozenset:
    """The principal filter ``↑e``."""
    return P.unmask(P.up[P.idx(e)])


# ---------------------------------------------------------------- text format

def parse_poset(text: str) -> FinitePoset:
    """Line-oriented format::

        poset <name>
        elem <id>
        le <id> <id>
    """
    name = ""
    elements: list[str] = []
    rels: list[tuple[str, str, int]] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "poset":
            if seen_header:
                raise ParseError("duplicate poset header", lineno)
            if len(parts) != 2:
                raise ParseError("expected: poset <name>", lineno)
            name, seen_header = parts[1], True
        elif kw == "elem":
            if len(parts) != 2:
                raise ParseError("expected: elem <id>", lineno)
            if parts[1] in elements:
                raise ParseError(f"duplicate element {parts[1]!r}", lineno)
            elements.append(parts[1])
        elif kw == "le":
            if len(parts) != 3:
                raise ParseError("expected: le <id> <id>", lineno)
            rels.append((parts[1], parts[2], lineno))
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
    if not seen_header:
        raise ParseError("missing 'poset <name>' header", 1)
    known = set(elements)
    for a, b, lineno in rels:
        for e in (a, b):
            if e not in known:
                raise ParseError(f"unknown element {e!r}", lineno)
    return FinitePoset(elements, [(a, b) for a, b, _ in rels], name=name)


def format_poset(P: FinitePoset) -> str:
    lines = [f"poset {P.name or 'anon'}"]
    lines += [f"elem {e}" for e in P.elements]
    lines += [f"le {a} {b}" for a, b in P.relations()]
    return "\n".join(lines) + "\n"
