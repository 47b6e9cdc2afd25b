"""Urysohn metrization for hybrid spaces.

Pipeline: the regular enumeration ``e(W, n)``, the separating functionals
``nu``, dyadic chains of opens, their Urysohn functions, the metric, the
embedding function code, and (for the interval presentation) point-finite
refinements, bounded G-delta witness levels and the G-delta re-metrization.

Everything is exact: lattice checks use the carrier's own operations and
real-valued outputs are :class:`ApproxReal` brackets.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import interval as iv
from .approx import ApproxReal, as_fraction
from .errors import Deferred, DomainError, InputError, ResourceError, WitnessError
from .hybrid import OpenCode, RegularityWitness, open_complement, strong_regularity_witness

MAX_NU_TERMS = 5000
DEFAULT_GDELTA_DEPTH = int(os.environ.get("MFTOP_DEPTH_BUDGET", "3"))


def _value(H, U):
    """Lattice element for an open given as a code or an element."""
    return H.code_value(U) if isinstance(U, OpenCode) else U


def _in(H, point, x) -> bool:
    """Point membership in lattice element ``x``; deferred answers raise."""
    if isinstance(point, iv.PointCode):
        if not x:
            return False
        ans = point.query(x)
        if ans is iv.Membership.DEFERRED:
            raise Deferred(f"membership of {point!r} in {x} deferred")
        return ans is iv.Membership.MEMBER
    return H.point_in(point, x)


# ---------------------------------------------------------------- e(W, n)

class RegularEnumeration:
    """``e(W, n)``: an enumeration of the basic elements lying in ``D_p``
    for some basic ``p`` below ``W``, i.e. with closure inside ``W``.

    Finite carriers list that set in the order of ``P`` and then repeat the
    last member.  The interval presentation interleaves two streams: even
    indices exhaust each component of ``W`` from inside (so compact subsets
    are covered after few terms), odd indices walk the fixed enumeration
    of ``P`` and emit its next element when that lies in the set, else
    repeat the previous term.  Every member therefore appears.  An empty
    set yields ``None`` (read as 0).
    """

    def __init__(self, H, W, witness: RegularityWitness | None = None):
        self.H = H
        self.W = _value(H, W)
        self.witness = witness
        self._terms: list = []
        self._gen = self._finite() if H.finite else self._interval()

    def __getitem__(self, n: int):
        while len(self._terms) <= n:
            self._terms.append(next(self._gen))
        return self._terms[n]

    def element(self, n: int):
        t = self[n]
        return self.H.zero if t is None else self.H.embed(t)

    def _finite(self):
        H, W = self.H, self.W
        D = self.witness or strong_regularity_witness(H)
        below = [p for p in H.basics() if H.leq(H.embed(p), W)]
        wanted = set()
        for p in below:
            wanted.update(D.members(p))
        members = [r for r in H.basics() if r in wanted]
        yield from members
        last = members[-1] if members else None
        while True:
            yield last

    def _interval(self):
        W = self.W
        if not W:
            while True:
                yield None
        exhaust = _exhaustion(W)
        glob = iv.enumerate_basic()
        prev = None
        while True:
            prev = next(exhaust)
            yield prev
            cand = next(glob)
            if iv.leq_P_union(cand, W):
                prev = cand
            yield prev


def _exhaustion(W) -> Iterator:
    """Stage ``s`` moves each open end of each part inward by between
    ``w/2^(s+2)`` and twice that (``w`` the part's width), rounded to a
    dyadic so endpoints keep small denominators."""
    for s in itertools.count():
        for part in W.parts:
            shrink = part.width / 2 ** (s + 2)
            t = 0
            while Fraction(1, 2 ** t) > shrink:
                t += 1
            grid = 2 ** t
            lo = part.lo if part.closed_lo else _ceil_to(part.lo + shrink, grid)
            hi = part.hi if part.closed_hi else _floor_to(part.hi - shrink, grid)
            yield iv.RatInterval(lo, hi, part.closed_lo, part.closed_hi)


def _ceil_to(x: Fraction, grid: int) -> Fraction:
    return Fraction(-((-x.numerator * grid) // x.denominator), grid)


def _floor_to(x: Fraction, grid: int) -> Fraction:
    return Fraction((x.numerator * grid) // x.denominator, grid)


# ---------------------------------------------------------------- nu

@dataclass
class Separation:
    """Output of :func:`nu`: the sequences ``U(n)``, ``V(n)`` up to the
    index ``N`` by which both closures are covered.  ``nu1`` joins the
    ``V(n)`` up to the first index covering ``cl(U)``; ``nu2`` likewise."""

    U: object
    V: object
    u_terms: list
    v_terms: list
    N: int
    nu1: object      # contains cl(U)
    nu2: object      # contains cl(V)
    extend: Callable[[int], None] = field(repr=False, default=None)

    def nu1_code(self) -> OpenCode:
        return self._code(self.v_terms)

    def nu2_code(self) -> OpenCode:
        return self._code(self.u_terms)

    def _code(self, terms):
        def enum():
            for n in itertools.count():
                if n >= len(terms):
                    self.extend(n)
                yield terms[n]
        summary = self.nu1 if terms is self.v_terms else self.nu2
        return OpenCode(member=lambda x: True, enum=enum, summary=summary)


def closures_disjoint(H, U, V) -> bool:
    """``cl(U) ∩ cl(V) = ∅``, i.e. ``cl(U) ⊆ pc(V)``."""
    return H.is_clopen_pair(U, H.pc(V))


def _closure_witness(H, U, V):
    if H.finite:
        cu = H.closure_of_code(OpenCode((U,)))
        cv = H.closure_of_code(OpenCode((V,)))
        return next(iter(sorted(cu & cv, key=sorted)), None)
    for z in H.decisive_points(U, V):
        if U.closure_contains(z) and V.closure_contains(z):
            return z
    return None


def nu(U, V, H, W: RegularityWitness | None = None, max_terms: int = MAX_NU_TERMS
       ) -> Separation:
    """Separate two opens with disjoint closures.

    ``U(n) = e(U^c, n) ∧ ⋀_{i<=n} pc(e(V^c, i))`` and symmetrically for
    ``V(n)``; ``nu1 = {V(n)}`` contains ``cl(U)`` and ``nu2 = {U(n)}``
    contains ``cl(V)``.  The sequences are extended until both closures
    are covered by finitely many terms (compactness makes this finite);
    the returned codes continue lazily beyond that point.
    """
    U, V = _value(H, U), _value(H, V)
    if not closures_disjoint(H, U, V):
        raise WitnessError("closures of U and V meet", witness=_closure_witness(H, U, V))
    Uc = open_complement(OpenCode((U,)), H)
    Vc = open_complement(OpenCode((V,)), H)
    eU = RegularEnumeration(H, Uc, W)
    eV = RegularEnumeration(H, Vc, W)
    u_terms, v_terms = [], []
    state = {"pu": H.one, "pv": H.one}

    def extend(n):
        while len(u_terms) <= n:
            i = len(u_terms)
            state["pu"] = H.meet(state["pu"], H.pc(eU.element(i)))
            state["pv"] = H.meet(state["pv"], H.pc(eV.element(i)))
            u_terms.append(H.meet(eU.element(i), state["pv"]))
            v_terms.append(H.meet(eV.element(i), state["pu"]))

    # each side stops at its own first covering index, so a slow side
    # does not push the other's terms needlessly close to the boundary
    j1 = j2 = H.zero
    n1 = n2 = None
    for n in range(max_terms):
        extend(n)
        if n1 is None:
            j1 = H.join(j1, v_terms[n])
            if H.is_clopen_pair(U, j1):
                n1 = n
        if n2 is None:
            j2 = H.join(j2, u_terms[n])
            if H.is_clopen_pair(V, j2):
                n2 = n
        if n1 is not None and n2 is not None:
            return Separation(U, V, u_terms, v_terms, max(n1, n2), j1, j2, extend)
    raise ResourceError(f"nu did not cover both closures within {max_terms} terms",
                        bound=max_terms)


# ---------------------------------------------------------------- dyadic chains

def _split(k: Fraction):
    """Neighbours of a dyadic ``b/2^m`` at the coarser level ``2^(m-1)``."""
    step = Fraction(1, k.denominator)
    return k - step, k + step


class DyadicChain:
    """Opens ``U_k`` for dyadic ``k`` in ``[0,1]`` with ``cl(U_k) ⊆ U_k'``
    whenever ``k < k'``; ``U_0 = q``, ``U_1 = p`` and ``U_k`` is the whole
    space for ``k > 1``.

    Levels are built on demand and memoized.  A new level between
    neighbours ``k < k'`` is ``pc(pc(J))`` where ``J`` is the truncated
    ``nu1(U_k, pc(U_k'))``: taking the regular-open hull keeps every level
    regular open, which is what makes ``cl(U_l) ⊆ U_k'`` follow from
    disjointness with ``nu2``.
    """

    def __init__(self, H, p, q, W: RegularityWitness | None = None,
                 depth: int | None = None):
        self.H = H
        self.p, self.q = p, q
        self.W = W
        ep, eq = H.embed(p), H.embed(q)
        ok = W.contains(p, q) if W is not None else H.is_clopen_pair(eq, ep)
        if not ok:
            raise WitnessError(f"{q} is not in D_{p}", witness=(p, q))
        self.depth = depth
        self.levels = {Fraction(0): eq, Fraction(1): ep}

    def __getitem__(self, k) -> object:
        k = as_fraction(k)
        if k > 1:
            return self.H.one
        if k < 0:
            raise InputError("chain levels start at 0")
        if k in self.levels:
            return self.levels[k]
        if k.denominator & (k.denominator - 1):
            raise InputError(f"{k} is not dyadic")
        if self.depth is not None and k.denominator > 2 ** self.depth:
            raise ResourceError(f"level {k} is deeper than the chain depth {self.depth}",
                                bound=self.depth)
        lo, hi = _split(k)
        H = self.H
        small, big = self[lo], self[hi]
        sep = nu(small, H.pc(big), H, self.W)
        level = H.pc(H.pc(sep.nu1))
        self.levels[k] = level
        return level

    def code(self, k) -> OpenCode:
        x = self[k]
        return OpenCode((x,), summary=x)

    def build(self, depth: int) -> dict:
        """All levels with denominator up to ``2^depth``."""
        for j in range(2 ** depth + 1):
            self[Fraction(j, 2 ** depth)]
        return {k: v for k, v in sorted(self.levels.items()) if (2 ** depth) % k.denominator == 0}

    def verify(self, depth: int | None = None) -> list:
        """Pairs ``k < k'`` among the constructed levels violating
        ``pc(U_k) ∨ U_k' = 1``."""
        H = self.H
        ks = sorted(self.levels) if depth is None else sorted(self.build(depth))
        return [(a, b) for a, b in itertools.combinations(ks, 2)
                if not H.is_clopen_pair(self.levels[a], self.levels[b])]


def dyadic_chain(H, p, q, depth: int, W: RegularityWitness | None = None) -> DyadicChain:
    chain = DyadicChain(H, p, q, W)
    chain.build(depth)
    return chain


def urysohn_eval(chain: DyadicChain, x, k: int) -> ApproxReal:
    """``f(x) = inf{k : x ∈ U_k}`` to within ``2^-k``.

    Exactly 0 on ``N_q`` and exactly 1 off ``N_p``; otherwise a bisection
    over the levels ``j/2^k`` keeps ``x ∉ U_lo`` and ``x ∈ U_hi``.
    """
    H = chain.H
    if _in(H, x, chain[0]):
        return ApproxReal.exact(0)
    if not _in(H, x, chain[1]):
        return ApproxReal.exact(1)
    lo, hi = 0, 2 ** k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        try:
            inside = _in(H, x, chain[Fraction(mid, 2 ** k)])
        except Deferred as exc:
            raise Deferred(str(exc), partial=ApproxReal.from_bounds(
                Fraction(lo, 2 ** k), Fraction(hi, 2 ** k))) from None
        if inside:
            hi = mid
        else:
            lo = mid
    return ApproxReal.from_bounds(Fraction(lo, 2 ** k), Fraction(hi, 2 ** k))


# ---------------------------------------------------------------- metric

def priority_pair(t: int):
    """The ``t``-th dyadic priority pair of the interval presentation.

    Level ``m >= 1`` contributes one pair per cell ``[j/2^m, (j+1)/2^m]``:
    ``q`` widens the cell by ``2^-m-2`` on each side and ``p`` by twice that,
    both clipped to ``[0,1]``.  Their Urysohn functions vanish on the cell
    and equal 1 a short distance away, so finitely many of them already
    separate any two distinct points.
    """
    m, j = 1, t
    while j >= 2 ** m:
        j -= 2 ** m
        m += 1
    c, e = Fraction(j, 2 ** m), Fraction(j + 1, 2 ** m)
    eps = Fraction(1, 2 ** (m + 2))
    return _clipped(c - 2 * eps, e + 2 * eps), _clipped(c - eps, e + eps)


def _clipped(lo, hi) -> iv.RatInterval:
    return iv.RatInterval(max(lo, iv.ZERO), min(hi, iv.ONE), lo < 0, hi > 1)


class MetricFamily:
    """A reindexing ``n -> (p, q)`` of all pairs with ``q ∈ D_p`` and the
    matching dyadic chains ``f_n``.

    Finite carriers list the pairs in the order of ``P``.  For the interval
    presentation the first ``priority_slots`` indices, and every even index
    after them, go to :func:`priority_pair`; the remaining odd indices
    walk all other pairs in Cantor order of their positions in the fixed
    enumeration.  The map is a bijection onto the pairs.
    """

    def __init__(self, H, W: RegularityWitness | None = None, priority_slots: int = 64):
        self.H = H
        self.W = W
        self.priority_slots = priority_slots
        self._chains: dict[int, DyadicChain] = {}
        if H.finite:
            D = W or strong_regularity_witness(H)
            self._pairs = [(p, q) for p in H.basics() for q in H.basics() if D.contains(p, q)]
            self.size = len(self._pairs)
        else:
            self._pairs = []
            self._general = self._general_pairs()
            self.size = None

    def _general_pairs(self):
        seen = set()
        for s in itertools.count():
            for i in range(s + 1):
                p, q = iv.basic_at(i), iv.basic_at(s - i)
                if iv.leq_P(q, p) and (p, q) not in seen:
                    seen.add((p, q))
                    if not _is_priority(p, q):
                        yield p, q

    def pair(self, n: int):
        if self.size is not None:
            return self._pairs[n]
        if n < self.priority_slots:
            return priority_pair(n)
        extra = n - self.priority_slots
        if extra % 2 == 0:
            return priority_pair(self.priority_slots + extra // 2)
        while len(self._pairs) <= extra // 2:
            self._pairs.append(next(self._general))
        return self._pairs[extra // 2]

    def chain(self, n: int) -> DyadicChain:
        if n not in self._chains:
            p, q = self.pair(n)
            self._chains[n] = DyadicChain(self.H, p, q, self.W)
        return self._chains[n]

    def terms(self, k: int) -> tuple[int, Fraction]:
        """How many functions to evaluate for precision ``2^-k``, and the
        tail bound for the rest."""
        if self.size is not None:
            return self.size, Fraction(0)
        N = k + 2
        return N, Fraction(1, 2 ** (N - 1))


def _is_priority(p, q) -> bool:
    # a level-m q is between 2^-m and 1.5 * 2^-m wide
    m = 1
    while Fraction(3, 2 ** (m + 1)) >= q.width:
        eps = Fraction(1, 2 ** (m + 2))
        for j in ((q.lo + eps) * 2 ** m, (q.hi - eps) * 2 ** m - 1):
            if j.denominator == 1 and 0 <= j < 2 ** m:
                if priority_pair(2 ** m - 2 + int(j)) == (p, q):
                    return True
        m += 1
    return False


def metric_eval(x, y, k: int, fam: MetricFamily) -> ApproxReal:
    """``d(x, y) = Σ 2^-n |f_n(x) - f_n(y)|`` as a bracket of width at most
    ``2^-k``: ``k + 2`` terms, each ``f_n`` to within ``2^-(k+3)``, plus
    the tail."""
    N, tail = fam.terms(k)
    total = ApproxReal.exact(0)
    for n in range(N):
        ch = fam.chain(n)
        fx = urysohn_eval(ch, x, k + 3)
        fy = urysohn_eval(ch, y, k + 3)
        total = total + abs(fx - fy).scale(Fraction(1, 2 ** n))
    return total.extend_up(tail)


def _greatest_level(chain: DyadicChain, depth: int, pred) -> int:
    """Largest ``j`` in ``[0, 2^depth]`` with ``pred(U_{j/2^depth})``, given
    ``pred`` is true up to some point and false after; -1 if never."""
    if not pred(chain[0]):
        return -1
    lo, hi = 0, 2 ** depth + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(chain[Fraction(mid, 2 ** depth)]):
            lo = mid
        else:
            hi = mid
    return lo


def diam_upper(p, fam: MetricFamily, k: int) -> Fraction:
    """Certified upper bound on ``sup d(a, b)`` over points of ``N_p``.

    On ``N_p`` each ``f_n`` is at least the greatest level disjoint from
    ``p`` and at most the least level containing ``p``.
    """
    H = fam.H
    ep = H.embed(p)
    N, tail = fam.terms(k)
    depth = k + 3
    scale = Fraction(1, 2 ** depth)
    bound = tail
    for n in range(N):
        ch = fam.chain(n)
        low = _greatest_level(ch, depth, lambda u: H.meet(ep, u) == H.zero)
        f_lo = 0 if low < 0 else low * scale
        above = _greatest_level(ch, depth, lambda u: not H.leq(ep, u))
        f_hi = (above + 1) * scale if above < 2 ** depth else 1
        bound += Fraction(1, 2 ** n) * max(f_hi - f_lo, 0)
    return bound


# ---------------------------------------------------------------- function codes

@dataclass
class FunctionCode:
    """A set of triples ``<p, <a, r>>``: the image of ``N_p`` lies in the
    ball of radius ``r`` around ``a``.

    ``admits(p, a, r)`` decides membership; ``candidates(p)`` yields the
    pairs ``(a, r)`` the extraction procedure tries for ``p``, in order.
    """

    admits: Callable
    candidates: Callable
    name: str = ""
    target: str = "euclidean"

    def triples(self, basics) -> Iterator[tuple]:
        for p in basics:
            for a, r in self.candidates(p):
                yield p, (a, r)


@dataclass
class CauchyCode:
    """Points ``a_i`` of the dense set with radii ``r_i``: the limit lies
    within ``r_i`` of ``a_i``."""

    points: list
    radii: list
    neighbourhoods: list

    @property
    def approx(self):
        return self.points[-1]

    @property
    def radius(self):
        return self.radii[-1]


def apply_function_code(F: FunctionCode, m, k: int, budget: int = 48) -> CauchyCode:
    """Run ``F`` along the shrinking neighbourhoods of point ``m`` until a
    triple with ``r <= 2^-k`` turns up."""
    target = Fraction(1, 2 ** k)
    pts, radii, nbs = [], [], []
    for i, nb in enumerate(m.neighborhoods()):
        if i >= budget:
            break
        for a, r in F.candidates(nb):
            if not F.admits(nb, a, r):
                continue
            pts.append(a)
            radii.append(r)
            nbs.append(nb)
            if r <= target:
                return CauchyCode(pts, radii, nbs)
            break
    raise Deferred(f"no triple of radius <= 2^-{k} within {budget} neighbourhoods",
                   partial=CauchyCode(pts, radii, nbs))


def identity_code() -> FunctionCode:
    """Inclusion of the interval presentation into ``[0,1]`` with the
    Euclidean metric: ``<p, <mid(p), width(p)>>``."""

    def admits(p, a, r):
        return p.closure_contains(a) and a - r < p.lo and p.hi < a + r

    def candidates(p):
        yield (p.lo + p.hi) / 2, p.width

    return FunctionCode(admits, candidates, name="identity")


def embedding_code(H, fam: MetricFamily, k: int) -> FunctionCode:
    """The code ``H``: triples with ``diam(p) < r`` and ``a ∈ N_p``, ``a``
    from the dense set.  ``diam`` is the certified upper bound of
    :func:`diam_upper` at precision ``k + 1``; candidate radii are that
    bound plus ``2^-(k+4)``."""
    cache: dict = {}

    def diam(p):
        if p not in cache:
            cache[p] = diam_upper(p, fam, k + 1)
        return cache[p]

    def admits(p, a, r):
        return p.contains(a) and diam(p) < r

    def candidates(p):
        _, a = iv.first_dense_in(p)
        yield a, diam(p) + Fraction(1, 2 ** (k + 4))

    return FunctionCode(admits, candidates, name="embedding", target="metric")


# ---------------------------------------------------------------- refinement

@dataclass
class Refinement:
    """A point-finite refinement of an interval cover of ``[0,1]``.

    ``sets[i]`` lies inside ``cover[i]``; ``chosen`` lists the basic
    intervals kept by the sweep with their parent index.
    """

    cover: list
    sets: list
    chosen: list
    bound: int = 2

    def refines(self) -> bool:
        return all(iv.leq_L(v, u) for v, u in zip(self.sets, self.cover))

    def covers_point(self, x) -> bool:
        return any(v.contains(x) for v in self.sets)

    def multiplicity(self, x) -> int:
        return sum(1 for v in self.sets if v.contains(x))

    def check_points(self) -> list[Fraction]:
        """Every endpoint of the chosen intervals and each midpoint between
        consecutive ones: membership is constant in between."""
        return iv.IntervalSpace().decisive_points(*self.sets)


def point_finite_refinement(cover: Sequence) -> Refinement:
    """Greedy sweep from 0: at each stage keep the part that contains the
    current frontier and reaches furthest right.  Kept parts ``I_j`` and
    ``I_{j+2}`` are disjoint (otherwise ``I_{j+2}`` would have been picked
    at stage ``j+1``), so every point lies in at most two of them.

    Raises :class:`DomainError` carrying an uncovered rational when the
    family does not cover ``[0,1]``.
    """
    cover = [c.summary if isinstance(c, OpenCode) else c for c in cover]
    parts = [(part, i) for i, u in enumerate(cover) for part in u.parts]
    chosen = []
    frontier = iv.ZERO   # next point to cover
    while True:
        best = None
        for part, i in parts:
            if part.contains(frontier):
                key = (part.hi, part.closed_hi)
                if best is None or key > best[0]:
                    best = (key, part, i)
        if best is None:
            raise DomainError(f"{frontier} is not covered", index=frontier)
        _, part, i = best
        chosen.append((part, i))
        if part.closed_hi:
            break
        frontier = part.hi
    sets = [iv.FiniteUnion(p for p, j in chosen if j == i) for i in range(len(cover))]
    return Refinement(cover, sets, chosen)


# ---------------------------------------------------------------- G-delta levels

@dataclass
class GDeltaLevels:
    """Levels ``C_0 .. C_k`` of the witness tree for the image of the
    interval presentation in its completion.

    ``families[i]`` is the level-``i`` family: intervals of width
    ``2^-(2i+1)`` centred on a grid of spacing half that width, so each
    point lies in at most two of them (it is its own point-finite
    refinement).  ``admissible[i]`` keeps the members ``q_i`` whose closure
    sits inside an admissible ``q_{i-1}``; ``C_i`` is their union.
    """

    depth: int
    families: list
    admissible: list
    C: list
    parent: list

    def contains(self, i: int, x) -> bool:
        return self.C[i].contains(x)

    def branch(self, z, node_budget: int = 10_000) -> list:
        """Bounded König search for ``q_0 ⊇ q_1 ⊇ ... ⊇ q_k`` around ``z``
        with ``cl(q_i) ⊆ q_{i-1}``; tries more central intervals first."""
        z = as_fraction(z)
        visited = 0

        def dfs(i, prev):
            nonlocal visited
            if i > self.depth:
                return []
            cands = [q for q in self.admissible[i] if q.contains(z)
                     and (prev is None or iv.leq_P(q, prev))]
            cands.sort(key=lambda q: abs((q.lo + q.hi) / 2 - z))
            for q in cands:
                visited += 1
                if visited > node_budget:
                    raise ResourceError("branch search budget exhausted", bound=node_budget)
                rest = dfs(i + 1, q)
                if rest is not None:
                    return [q] + rest
            return None

        path = dfs(0, None)
        if path is None:
            raise DomainError(f"no branch through {z}", index=z)
        return path


def _level_family(i: int) -> list:
    width = Fraction(1, 2 ** (2 * i + 1))
    step = width / 2
    out = []
    for j in range(int(1 / step) + 1):
        c = j * step
        out.append(_clipped(c - width / 2, c + width / 2))
    return out


def gdelta_witness_levels(k: int, bound: int | None = None) -> GDeltaLevels:
    """Levels ``C_0 .. C_k`` for the interval presentation, measured with
    the Euclidean metric of its completion ``[0,1]``.

    ``W_0 = [0,1]`` is the refinement of the balls ``B(a, 1)``; level ``i``
    keeps the members of the level-``i`` family whose closure lies in an
    admissible level ``i-1`` member, and ``W_{i+1}`` ranges over those.
    """
    bound = DEFAULT_GDELTA_DEPTH if bound is None else bound
    if k > bound:
        raise ResourceError(f"depth {k} exceeds the configured bound {bound}", bound=bound)
    if k < 0:
        raise InputError("depth must be non-negative")
    root = point_finite_refinement([iv.UNIT]).sets[0]
    families, admissible, C, parent = [], [], [], []
    prev = list(root.parts)
    for i in range(k + 1):
        fam = _level_family(i)
        keep, par = [], {}
        for q in fam:
            for r in prev:
                if iv.leq_P(q, r):
                    keep.append(q)
                    par[q] = r
                    break
        families.append(fam)
        admissible.append(keep)
        C.append(iv.FiniteUnion(keep))
        parent.append(par)
        prev = keep
    return GDeltaLevels(k, families, admissible, C, parent)


# ---------------------------------------------------------------- re-metrization

def _dist_to_complement(x: Fraction, U) -> Fraction | None:
    """Euclidean distance from ``x`` to ``[0,1] \\ U``; ``None`` if that
    complement is empty; raises ``ValueError`` if ``x`` is outside ``U``."""
    for part in U.parts:
        if part.contains(x):
            gaps = []
            if not part.closed_lo:
                gaps.append(x - part.lo)
            if not part.closed_hi:
                gaps.append(part.hi - x)
            return min(gaps) if gaps else None
    raise ValueError(x)


def remetrize_gdelta(U, x, y, k: int, base: Callable | None = None) -> ApproxReal:
    """``d'(x, y) = d(x, y) + Σ_{i>=1} 2^-i min(1, |1/dist(x, ∁U_i) -
    1/dist(y, ∁U_i)|)`` on ``⋂ U_i``.

    ``U`` is a finite list of unions (evaluated exactly) or a callable
    ``i -> U_i`` for ``i >= 1`` (truncated after ``k + 1`` terms, with the
    tail added to the bracket).  ``base`` gives ``d`` as a bracket; the
    default is the Euclidean distance.  Opens equal to the whole space
    contribute nothing.
    """
    x, y = as_fraction(x), as_fraction(y)
    d = base(x, y) if base is not None else ApproxReal.exact(abs(x - y))
    if callable(U):
        seq = [U(i) for i in range(1, k + 2)]
        tail = Fraction(1, 2 ** (k + 1))
    else:
        seq, tail = list(U), Fraction(0)
    extra = Fraction(0)
    for i, Ui in enumerate(seq, start=1):
        try:
            dx = _dist_to_complement(x, Ui)
            dy = _dist_to_complement(y, Ui)
        except ValueError as exc:
            raise DomainError(f"point {exc.args[0]} is outside U_{i}", index=i) from None
        if dx is None:
            continue
        extra += Fraction(1, 2 ** i) * min(Fraction(1), abs(1 / dx - 1 / dy))
    return (d + extra).extend_up(tail)
