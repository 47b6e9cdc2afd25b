"""Hybrid MF spaces: a pseudo-complemented distributive lattice ``L`` with a
distinguished basic poset ``P``.

Two finite carriers live here:

* :class:`TableHybrid` -- explicit tables, loaded from the text format;
* :class:`ExtentHybrid` -- the upgrade of a finite poset, whose lattice is
  the algebra of unions of basic extents (bitmasks over the points).

The interval presentation of ``[0,1]`` in :mod:`mftopo.interval` shares the
same duck-typed surface (``leq meet join pc zero one embed leq_P`` and
point membership), so the generic routines below run on all three.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import (InputError, ParseError, StructuralError, UnknownElementError,
                     WitnessError)
from .order import (Check, FinitePoset, enumerate_maximal_filters, is_filter,
                    maximal_filter_masks, _bits)


# ---------------------------------------------------------------- open codes

@dataclass(frozen=True)
class OpenCode:
    """Code of an open set: the union of the opens below its generators.

    Finite codes list ``gens`` (lattice elements).  Lazy codes give a
    membership predicate ``member`` on basic elements and an enumerator
    ``enum`` instead.  ``summary``, when set, is a single lattice element
    with the same extent.
    """

    gens: tuple = ()
    member: Callable | None = field(default=None, compare=False)
    enum: Callable[[], Iterator] | None = field(default=None, compare=False)
    summary: object = None

    @property
    def lazy(self) -> bool:
        return self.member is not None

    def generators(self) -> Iterator:
        if self.lazy:
            return iter(self.enum()) if self.enum else iter(())
        return iter(self.gens)


def code(*gens) -> OpenCode:
    return OpenCode(tuple(gens))


# ---------------------------------------------------------------- base

class HybridBase:
    """Shared algorithms.  Subclasses supply the lattice operations,
    ``embed`` (basic element -> lattice element), ``leq_P``, ``basics`` and
    point membership ``point_has(point, p)``."""

    finite = True

    def point_in(self, point, x) -> bool:
        """Point lies in the open coded by lattice element ``x``."""
        return any(self.leq(self.embed(p), x) for p in point)

    def point_in_code(self, point, W: OpenCode) -> bool:
        if W.summary is not None:
            return self.point_in(point, W.summary)
        if W.lazy:
            raise InputError("lazy open code without summary: membership undecidable here")
        return any(self.point_in(point, g) for g in W.gens)

    def basis(self, x) -> frozenset:
        """``B(x)``: basic elements below ``x`` (finite carriers only)."""
        return frozenset(p for p in self.basics() if self.leq(self.embed(p), x))

    def join_all(self, xs: Iterable):
        out = self.zero
        for x in xs:
            out = self.join(out, x)
        return out

    def meet_all(self, xs: Iterable):
        out = self.one
        for x in xs:
            out = self.meet(out, x)
        return out

    def code_value(self, W: OpenCode):
        """A lattice element with the same extent as ``W``."""
        if W.summary is not None:
            return W.summary
        if W.lazy:
            raise InputError("lazy open code without summary")
        return self.join_all(W.gens)

    def is_clopen_pair(self, small, big) -> bool:
        """``pc(small) ∨ big = 1``, i.e. ``cl(small) ⊆ big``."""
        return self.join(self.pc(small), big) == self.one


class FiniteHybrid(HybridBase):
    """Finite carrier: explicit lattice elements, basic poset and points."""

    poset: FinitePoset

    def elements(self) -> tuple:
        raise NotImplementedError

    def basics(self) -> tuple:
        return self.poset.elements

    def leq_P(self, p, q) -> bool:
        return self.poset.leq(p, q)

    def points(self) -> list[frozenset]:
        if self._points is None:
            self._points = enumerate_maximal_filters(self.poset)
        return self._points

    def point_has(self, point, p) -> bool:
        return p in point

    def extent(self, x) -> frozenset:
        """Points lying in lattice element ``x``."""
        return frozenset(m for m in self.points() if self.point_in(m, x))

    def extent_of_code(self, W: OpenCode) -> frozenset:
        return frozenset(m for m in self.points() if self.point_in_code(m, W))

    def basic_extent(self, p) -> frozenset:
        return frozenset(m for m in self.points() if p in m)

    def closure_of_code(self, W: OpenCode) -> frozenset:
        """Topological closure computed pointwise from basic extents."""
        ext = self.extent_of_code(W)
        return frozenset(m for m in self.points()
                         if all(self.basic_extent(p) & ext for p in m))


# ---------------------------------------------------------------- explicit tables

def _closure(elements, pairs):
    up = {e: {e} for e in elements}
    for a, b in pairs:
        up[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in elements:
            new = set().union(*(up[b] for b in up[a]))
            if new != up[a]:
                up[a] = new
                changed = True
    return {(a, b) for a in elements for b in up[a]}


class TableHybrid(FiniteHybrid):
    """Hybrid space given by explicit tables over identifiers.

    ``basics`` is a subset of ``elements``; ``embed`` is the identity.
    ``ple`` gives the order of the basic poset; by default it is the
    restriction of ``le``.  Omitted meets, joins, pseudo-complements and
    bounds are derived from the order.
    """

    def __init__(self, elements, le, basics, *, meet=None, join=None, pc=None,
                 zero=None, one=None, ple=None, name=""):
        self.name = name
        self._elements = tuple(elements)
        known = set(self._elements)
        if len(known) != len(self._elements):
            raise StructuralError("duplicate lattice element")
        for a, b in le:
            for e in (a, b):
                if e not in known:
                    raise UnknownElementError(e)
        self._leq = _closure(self._elements, le)
        for a, b in self._leq:
            if a != b and (b, a) in self._leq:
                raise StructuralError(f"antisymmetry fails: {a!r}, {b!r}", witness=(a, b))
        basics = tuple(basics)
        for p in basics:
            if p not in known:
                raise UnknownElementError(p)
        if ple is None:
            ple = [(a, b) for a in basics for b in basics if a != b and (a, b) in self._leq]
        self.poset = FinitePoset(basics, ple, name=name)
        self._zero = zero if zero is not None else self._extremum(lower=True)
        self._one = one if one is not None else self._extremum(lower=False)
        self._meet = dict(meet or {})
        self._join = dict(join or {})
        for x in self._elements:
            for y in self._elements:
                for table, lower in ((self._meet, True), (self._join, False)):
                    if (x, y) not in table:
                        table[(x, y)] = (table[(y, x)] if (y, x) in table
                                         else self._bound(x, y, lower=lower))
        self._pc = dict(pc or {})
        for x in self._elements:
            if x not in self._pc:
                self._pc[x] = self._derive_pc(x)
        self._points = None

    def _extremum(self, lower):
        for e in self._elements:
            if all(((e, x) if lower else (x, e)) in self._leq for x in self._elements):
                return e
        raise StructuralError("no %s element" % ("least" if lower else "greatest"))

    def _bound(self, x, y, lower):
        if lower:
            cands = [z for z in self._elements if (z, x) in self._leq and (z, y) in self._leq]
            best = [z for z in cands if all((c, z) in self._leq for c in cands)]
        else:
            cands = [z for z in self._elements if (x, z) in self._leq and (y, z) in self._leq]
            best = [z for z in cands if all((z, c) in self._leq for c in cands)]
        if len(best) != 1:
            raise StructuralError(f"no {'meet' if lower else 'join'} of {x!r}, {y!r}",
                                  witness=(x, y))
        return best[0]

    def _derive_pc(self, x):
        if x == self._zero:
            return self._one
        if x == self._one:
            return self._zero
        disjoint = [y for y in self._elements if self._meet[(x, y)] == self._zero]
        top = [y for y in disjoint if all((d, y) in self._leq for d in disjoint)]
        if len(top) != 1:
            raise StructuralError(f"no pseudo-complement of {x!r}", witness=x)
        return top[0]

    zero = property(lambda self: self._zero)
    one = property(lambda self: self._one)

    def elements(self):
        return self._elements

    def embed(self, p):
        return p

    def leq(self, x, y):
        return (x, y) in self._leq

    def meet(self, x, y):
        return self._meet[(x, y)]

    def join(self, x, y):
        return self._join[(x, y)]

    def pc(self, x):
        return self._pc[x]

    def with_pc(self, x, value) -> TableHybrid:
        """Copy with ``pc(x)`` overridden (used to build failing instances)."""
        pc = dict(self._pc)
        pc[x] = value
        return TableHybrid(self._elements, self._leq, self.poset.elements,
                           meet=self._meet, join=self._join, pc=pc, zero=self._zero,
                           one=self._one, ple=list(self.poset.relations()), name=self.name)


# ---------------------------------------------------------------- extent upgrade

class ExtentHybrid(FiniteHybrid):
    """Upgrade of a finite poset.

    Points are the maximal filters of ``P``; a lattice element is a bitmask
    of points (a union of basic extents).  Every finite MF space is discrete,
    so this lattice is the full power set and ``pc`` is set complement.
    """

    def __init__(self, P: FinitePoset):
        self.poset = P
        self.name = P.name
        masks = maximal_filter_masks(P)
        self._points = [P.unmask(m) for m in masks]
        self._npts = len(masks)
        self._one = (1 << self._npts) - 1
        emb = {}
        for i, p in enumerate(P.elements):
            bit = 1 << i
            emb[p] = sum(1 << j for j, m in enumerate(masks) if m & bit)
        self._embed = emb

    zero = 0
    one = property(lambda self: self._one)

    def elements(self):
        return tuple(range(self._one + 1))

    def points(self):
        return self._points

    def embed(self, p):
        try:
            return self._embed[p]
        except KeyError:
            raise UnknownElementError(p) from None

    def leq(self, x, y):
        return x & ~y == 0

    def meet(self, x, y):
        return x & y

    def join(self, x, y):
        return x | y

    def pc(self, x):
        return self._one & ~x

    def point_index(self, point) -> int:
        return self._points.index(frozenset(point))

    def point_in(self, point, x):
        return bool(x >> self.point_index(point) & 1)

    def extent(self, x):
        return frozenset(self._points[i] for i in _bits(x))

    def label(self, x) -> str:
        return "{" + ",".join("/".join(sorted(map(str, self._points[i])))
                              for i in _bits(x)) + "}"

    def to_table(self) -> TableHybrid:
        return _alias_table(self)


def _alias_table(H: ExtentHybrid):
    """Table form when every basic element has a distinct extent."""
    P = H.poset
    ext = {p: H.embed(p) for p in P.elements}
    if len(set(ext.values())) != len(ext):
        raise StructuralError("basic elements share an extent; no table form")
    names = {}
    for p in P.elements:
        names[ext[p]] = p
    for x in H.elements():
        names.setdefault(x, f"u{x}")
    els = [names[x] for x in H.elements()]
    le = [(names[x], names[y]) for x in H.elements() for y in H.elements() if H.leq(x, y)]
    meet = {(names[x], names[y]): names[H.meet(x, y)] for x in H.elements() for y in H.elements()}
    join = {(names[x], names[y]): names[H.join(x, y)] for x in H.elements() for y in H.elements()}
    pc = {names[x]: names[H.pc(x)] for x in H.elements()}
    return TableHybrid(els, le, P.elements, meet=meet, join=join, pc=pc,
                       zero=names[H.zero], one=names[H.one],
                       ple=list(P.relations()), name=H.name)


def finite_poset_upgrade(P: FinitePoset) -> ExtentHybrid:
    return ExtentHybrid(P)


# ---------------------------------------------------------------- structure checks

def check_lattice(H: FiniteHybrid) -> None:
    """Raise :class:`StructuralError` unless ``L`` is a bounded distributive
    lattice with the given meet, join and bounds."""
    els = H.elements()
    leq, meet, join = H.leq, H.meet, H.join
    for x in els:
        if not (leq(H.zero, x) and leq(x, H.one)):
            raise StructuralError(f"{x!r} escapes the bounds", witness=x)
    for x in els:
        for y in els:
            m, j = meet(x, y), join(x, y)
            if not (leq(m, x) and leq(m, y)) or not (leq(x, j) and leq(y, j)):
                raise StructuralError(f"meet/join of {x!r}, {y!r} are not bounds",
                                      witness=(x, y))
            if meet(x, join(x, y)) != x or join(x, meet(x, y)) != x:
                raise StructuralError(f"absorption fails at {x!r}, {y!r}", witness=(x, y))
            for z in els:
                if leq(z, x) and leq(z, y) and not leq(z, m):
                    raise StructuralError(f"meet of {x!r}, {y!r} is not greatest",
                                          witness=(x, y, z))
                if leq(x, z) and leq(y, z) and not leq(j, z):
                    raise StructuralError(f"join of {x!r}, {y!r} is not least",
                                          witness=(x, y, z))
    for x, y, z in itertools.product(els, repeat=3):
        if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)):
            raise StructuralError("distributivity fails", witness=(x, y, z))


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class AxiomResult:
    axiom: int
    ok: bool
    witness: object = None
    note: str = ""


@dataclass
class AxiomReport:
    results: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r.ok]

    def __getitem__(self, axiom: int) -> AxiomResult:
        return next(r for r in self.results if r.axiom == axiom)


def _first(it):
    return next(iter(it), None)


def validate_axioms(H, sample=None, pairs=None) -> AxiomReport:
    """Check the eight hybrid-space axioms.

    Finite carriers are checked exhaustively.  Presented carriers need
    ``sample`` (lattice elements); binary axioms then run over ``pairs``
    (default: all pairs for samples up to 40 elements, otherwise each
    element against its next eight neighbours in sample order) with basic
    elements and points restricted to the probes ``H.axiom_probes(x, y)``
    supplies.  Axiom 1 runs over ``H.probe_basics(sample)`` with the points
    ``H.decisive_points`` picks for each pair.

    Axiom 2 is checked in its finite form (every nonzero element sits above
    at least one basic element); presented carriers additionally exhibit an
    injective enumerator of basic elements below each sampled element.
    Axiom 5 is compared at the level of extents: ``B(x ∨ y)`` may contain
    basic opens straddling ``x`` and ``y`` that neither ``B(x)`` nor ``B(y)``
    has, but both families must cover the same points.
    """
    if H.finite:
        check_lattice(H)
        els = list(H.elements())
        if pairs is None:
            pairs = [(x, y) for x in els for y in els]
        basics = list(H.basics())
        pts = list(H.points())
        probes = lambda *xs: (basics, pts)
    else:
        if sample is None:
            raise InputError("presented carriers need a lattice sample")
        els = list(sample)
        if pairs is None:
            n = len(els)
            if n <= 40:
                pairs = [(x, y) for x in els for y in els]
            else:
                pairs = [(els[i], els[(i + j) % n]) for i in range(n) for j in range(9)]
        probes = H.axiom_probes

    bad = {k: None for k in range(1, 9)}
    notes = {}
    leq, meet, join, pc, emb = H.leq, H.meet, H.join, H.pc, H.embed

    def B(x, basics):
        return frozenset(p for p in basics if leq(emb(p), x))

    def covered(ps, pts):
        return frozenset(i for i, m in enumerate(pts) if any(H.point_has(m, p) for p in ps))

    # axiom 1: order on basics agrees with point inclusion
    if H.finite:
        bad[1] = _first((a, b) for a in basics for b in basics
                        if leq(emb(a), emb(b)) != all(
                            H.point_has(m, b) for m in pts if H.point_has(m, a)))
    else:
        basics1 = H.probe_basics(els)
        for a, b in itertools.product(basics1, repeat=2):
            pts = H.decisive_points(emb(a), emb(b))
            if leq(emb(a), emb(b)) != all(H.point_has(m, b) for m in pts
                                          if H.point_has(m, a)):
                bad[1] = (a, b)
                break

    # axioms 2 and 8: unary
    for x in els:
        basics, pts = probes(x)
        if bad[2] is None and x != H.zero and not B(x, basics):
            bad[2] = x
        if bad[2] is None and not H.finite and x != H.zero:
            below = list(itertools.islice(H.infinitely_many_below(x), 8))
            if len(set(below)) != len(below) or not all(leq(emb(p), x) for p in below):
                bad[2] = x
        if bad[8] is None:
            lhs = B(pc(x), basics)
            rhs = frozenset(p for p in basics if meet(x, emb(p)) == H.zero)
            if lhs != rhs:
                bad[8] = (x, _first(lhs ^ rhs))

    # binary axioms
    for x, y in pairs:
        basics, pts = probes(x, y)
        bx, by = B(x, basics), B(y, basics)
        m, j = meet(x, y), join(x, y)
        bm, bj = B(m, basics), B(j, basics)
        if bad[3] is None and leq(x, y) != (bx <= by):
            bad[3] = (x, y)
        if bad[4] is None and bm != bx & by:
            bad[4] = (x, y, _first(bm ^ (bx & by)))
        if bad[5] is None and covered(bj, pts) != covered(bx | by, pts):
            bad[5] = (x, y)
        if bad[6] is None and not bm and m != H.zero:
            bad[6] = (x, y)
        if bad[7] is None and len(covered(bj, pts)) == len(pts) and j != H.one:
            bad[7] = (x, y)

    notes[2] = "finite relaxation: at least one basic element below"
    notes[5] = "compared on extents"
    report = AxiomReport(checked=len(els))
    for k in range(1, 9):
        report.results.append(AxiomResult(k, bad[k] is None, bad[k], notes.get(k, "")))
    return report


# ---------------------------------------------------------------- complements

def open_complement(U: OpenCode, H) -> OpenCode:
    """``U^c``: the basic elements meeting every generator of ``U`` in 0.

    Meet, not join: ``q ∨ p = 0`` would force ``p = 0``, which would make
    every complement empty.  The resulting code has summary ``pc(⋁U)``,
    since ``p ∧ u = 0`` for all ``u`` exactly when ``p <= pc(⋁U)``.
    """
    J = H.code_value(U)
    summary = H.pc(J)
    if H.finite:
        gens = tuple(dict.fromkeys(
            H.embed(p) for p in H.basics() if H.meet(H.embed(p), J) == H.zero))
        return OpenCode(gens, summary=summary)
    member = lambda p: H.meet(H.embed(p), J) == H.zero
    enum = lambda: (H.embed(p) for p in H.basics() if member(p))
    return OpenCode(member=member, enum=enum, summary=summary)


# ---------------------------------------------------------------- regularity

class RegularityWitness:
    """The family ``D_p``: basic ``q`` with ``cl(N_q) ⊆ N_p``.

    Finite carriers hold an explicit table; presented carriers answer
    ``contains`` by the pseudo-complement test and enumerate lazily.
    """

    def __init__(self, space, table: dict | None = None):
        self.space = space
        self.table = table

    def members(self, p) -> Iterable:
        if self.table is not None:
            try:
                return self.table[p]
            except KeyError:
                raise WitnessError(f"no witness set for {p!r}", witness=p) from None
        return self.space.witness_members(p)

    def contains(self, p, q) -> bool:
        if self.table is not None:
            return q in self.members(p)
        H = self.space
        return H.is_clopen_pair(H.embed(q), H.embed(p))

    def __getitem__(self, p):
        return self.members(p)


def strong_regularity_witness(H) -> RegularityWitness:
    """``D_q = {p : pc(p) ∨ q = 1}``."""
    if not H.finite:
        return RegularityWitness(H)
    table = {}
    for q in H.basics():
        eq = H.embed(q)
        table[q] = frozenset(p for p in H.basics() if H.is_clopen_pair(H.embed(p), eq))
    return RegularityWitness(H, table)


def is_maximal_filter_arithmetic(M, H, W: RegularityWitness, budget: int = 1000):
    """Arithmetic maximality test.

    ``M`` is a maximal filter iff it is a filter and every basic ``p``
    outside ``M`` either (1) meets some member of ``M`` in 0, or (2) every
    ``r`` in ``D_p`` meets some member of ``M`` in 0.

    Finite carriers: ``M`` is a set of basic elements; returns a
    :class:`Check`.  Presented carriers: ``M`` is a point code; the clauses
    are checked over the first ``budget`` queries and a :class:`Verdict`
    is returned.
    """
    if not H.finite:
        return H.check_point_arithmetic(M, W, budget)
    M = frozenset(M)
    fc = is_filter(M, H.poset)
    if not fc:
        return Check(False, f"not a filter: {fc.reason}", fc.witness)
    zero, meet, emb = H.zero, H.meet, H.embed
    for p in H.basics():
        if p in M:
            continue
        ep = emb(p)
        if any(meet(ep, emb(m)) == zero for m in M):
            continue
        for r in W.members(p):
            er = emb(r)
            if not any(meet(er, emb(n)) == zero for n in M):
                return Check(False, f"{p!r} fails clause 1, and {r!r} in D_{p} "
                                    f"meets every member", witness=(p, r))
    return Check(True, "maximal")


# ---------------------------------------------------------------- text format

def parse_hybrid(text: str) -> TableHybrid:
    """Format::

        hybrid <name>
        latt <id>            lattice element
        basic <id>           declares id in P (must also be a latt)
        le <id> <id>         order on L
        ple <id> <id>        order on P (default: restriction of le)
        meet|join <x> <y> <z>
        pc <x> <y>
        zero <id> / one <id>
    """
    name, els, basics, le, ple = "", [], [], [], []
    meet, join, pc = {}, {}, {}
    zero = one = None
    header = False
    refs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, *args = line.split()
        arity = {"hybrid": 1, "latt": 1, "basic": 1, "le": 2, "ple": 2, "meet": 3,
                 "join": 3, "pc": 2, "zero": 1, "one": 1}
        if kw not in arity:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
        if len(args) != arity[kw]:
            raise ParseError(f"{kw} takes {arity[kw]} argument(s)", lineno)
        if kw == "hybrid":
            name, header = args[0], True
            continue
        refs.append((lineno, args))
        if kw == "latt":
            if args[0] in els:
                raise ParseError(f"duplicate element {args[0]!r}", lineno)
            els.append(args[0])
        elif kw == "basic":
            basics.append(args[0])
        elif kw == "le":
            le.append(tuple(args))
        elif kw == "ple":
            ple.append(tuple(args))
        elif kw == "meet":
            meet[(args[0], args[1])] = args[2]
        elif kw == "join":
            join[(args[0], args[1])] = args[2]
        elif kw == "pc":
            pc[args[0]] = args[1]
        elif kw == "zero":
            zero = args[0]
        else:
            one = args[0]
    if not header:
        raise ParseError("missing 'hybrid <name>' header", 1)
    known = set(els)
    for lineno, args in refs:
        for a in args:
            if a not in known:
                raise ParseError(f"unknown element {a!r}", lineno)
    return TableHybrid(els, le, basics, meet=meet, join=join, pc=pc, zero=zero,
                       one=one, ple=ple or None, name=name)
