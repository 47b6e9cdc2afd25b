"""Checkers for space classes: proper, clopen basis, regular, strongly
regular, normal, discrete, and covering.

Finite checks work on extents as point bitmasks (bit ``j`` is the ``j``-th
maximal filter).  Every failing report carries a witness that can be
replayed through the order module.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .hybrid import ExtentHybrid, finite_poset_upgrade, strong_regularity_witness
from .order import DEFAULT_ORACLE_BOUND, FinitePoset, _bits, maximal_filter_masks
from .errors import ResourceError, WitnessError
from .report import ClassReport, Verdict

HOLDS, FAILS, BUDGET = Verdict.HOLDS, Verdict.FAILS, Verdict.BUDGET


class Extents:
    """Extent bitmasks of a finite poset over its maximal filters."""

    def __init__(self, P: FinitePoset, bound: int = DEFAULT_ORACLE_BOUND):
        if len(P) > bound:
            raise ResourceError(f"poset has {len(P)} elements, oracle bound is {bound}",
                                bound=bound)
        self.P = P
        self.points = maximal_filter_masks(P)
        self.full = (1 << len(self.points)) - 1
        self.ext = [sum(1 << j for j, m in enumerate(self.points) if m >> i & 1)
                    for i in range(len(P))]

    def point_label(self, j: int) -> frozenset:
        return self.P.unmask(self.points[j])

    def closure(self, U: int) -> int:
        """Points every basic neighbourhood of which meets ``U``."""
        out = 0
        for j, m in enumerate(self.points):
            if all(self.ext[i] & U for i in _bits(m)):
                out |= 1 << j
        return out


def _finite(space) -> FinitePoset:
    if isinstance(space, FinitePoset):
        return space
    if isinstance(space, ExtentHybrid):
        return space.poset
    raise TypeError(f"expected a finite poset or its upgrade, got {type(space).__name__}")


def _presented_tree(space) -> bool:
    from .trees import PresentedTree
    return isinstance(space, PresentedTree)


# ---------------------------------------------------------------- proper

def is_proper(P: FinitePoset, mode: str = "compatible",
              bound: int = DEFAULT_ORACLE_BOUND) -> ClassReport:
    """Order agrees with extent inclusion, and intersections of basic
    extents are basic.

    ``mode="compatible"`` asks for the meet clause on every pair whose
    extents intersect; ``mode="comparable"`` only on comparable pairs,
    where it is automatic once the order clause holds.
    """
    if mode not in ("compatible", "comparable"):
        raise ValueError(f"unknown mode {mode!r}")
    E = Extents(_finite(P), bound)
    P, ext, n = E.P, E.ext, len(E.P)
    els = P.elements
    # incomparable pairs first: they give the most telling witnesses
    pairs = sorted(itertools.product(range(n), repeat=2),
                   key=lambda ij: bool(P.up[ij[0]] >> ij[1] & 1 or P.up[ij[1]] >> ij[0] & 1))
    for i, j in pairs:
        order = bool(P.up[i] >> j & 1)
        incl = ext[i] & ~ext[j] == 0
        if order != incl:
            how = "p <= q but N_p not inside N_q" if order else "N_p inside N_q but not p <= q"
            return ClassReport("proper", FAILS, witness=(els[i], els[j]),
                               detail=f"order clause: {how}")
    realised = set(ext)
    for i in range(n):
        for j in range(i + 1, n):
            both = ext[i] & ext[j]
            if mode == "compatible":
                if not both:
                    continue
            elif not (P.up[i] >> j & 1 or P.up[j] >> i & 1):
                continue
            if both not in realised:
                return ClassReport("proper", FAILS, witness=(els[i], els[j]),
                                   detail="meet clause: no r with N_r = N_p ∩ N_q")
    return ClassReport("proper", HOLDS, detail=f"mode={mode}")


def clopen_basis_check(P: FinitePoset, bound: int = DEFAULT_ORACLE_BOUND) -> ClassReport:
    """Every basic extent equals its closure."""
    E = Extents(_finite(P), bound)
    for i, e in enumerate(E.ext):
        extra = E.closure(e) & ~e
        if extra:
            j = next(_bits(extra))
            return ClassReport("clopen-basis", FAILS,
                               witness=(E.P.elements[i], E.point_label(j)),
                               detail="boundary point outside the basic open")
    return ClassReport("clopen-basis", HOLDS)


# ---------------------------------------------------------------- regularity

def is_regular(space, oracle: Iterable | None = None, budget: int = 4096,
               bound: int = DEFAULT_ORACLE_BOUND) -> ClassReport:
    """Each point ``x`` in ``N_p`` has ``q`` with ``x ∈ N_q ⊆ cl(N_q) ⊆ N_p``.

    Finite spaces are checked over every point and basic element, trying
    ``q = p`` first.  Presented spaces need ``oracle``: an iterable of
    ``(point, p)`` pairs; ``q`` is searched among the first ``budget`` basics.
    """
    if getattr(space, "finite", True) is False:
        return _regular_presented(space, oracle, budget)
    E = Extents(_finite(space), bound)
    els = E.P.elements
    found = {}
    for j, m in enumerate(E.points):
        for p in _bits(m):
            for q in [p] + [q for q in _bits(m) if q != p]:
                if E.closure(E.ext[q]) & ~E.ext[p] == 0:
                    found[(j, p)] = q
                    break
            else:
                return ClassReport("regular", FAILS, witness=(E.point_label(j), els[p]),
                                   detail="no basic neighbourhood with closure inside")
    trivial = all(p == q for (_, p), q in found.items())
    return ClassReport("regular", HOLDS, detail="q = p throughout" if trivial else "")


def _regular_presented(H, oracle, budget) -> ClassReport:
    if oracle is None:
        raise ValueError("presented spaces need an oracle of (point, basic) pairs")
    W = strong_regularity_witness(H)
    for x, p in oracle:
        if not H.point_has(x, p):
            continue
        for q in itertools.islice(W.members(p), budget):
            if H.point_has(x, q):
                break
        else:
            return ClassReport("regular", BUDGET, witness=(x, p),
                               detail=f"no witness among {budget} candidates")
    return ClassReport("regular", HOLDS)


def is_strongly_regular(space, sample: int = 200):
    """Build ``D`` from the pseudo-complement test and validate it.

    Returns ``(report, witness)``.  Finite spaces: each ``q ∈ D_p`` has
    ``cl(N_q) ⊆ N_p`` (soundness) and each point of ``N_p`` lies in some
    member of ``D_p`` (completeness).  Presented spaces: the first
    ``sample`` basics each get a nonempty ``D_p`` whose first member is
    checked by closure containment.
    """
    if getattr(space, "finite", True) is False:
        return _strong_presented(space, sample)
    P = _finite(space)
    H = space if isinstance(space, ExtentHybrid) else finite_poset_upgrade(P)
    W = strong_regularity_witness(H)
    E = Extents(P)
    els = P.elements
    for i, p in enumerate(els):
        cover = 0
        for q in W.members(p):
            eq = E.ext[P.idx(q)]
            if E.closure(eq) & ~E.ext[i]:
                return ClassReport("strongly-regular", FAILS, witness=(p, q),
                                   detail="member of D_p with closure leaving N_p"), W
            cover |= eq
        missing = E.ext[i] & ~cover
        if missing:
            j = next(_bits(missing))
            return ClassReport("strongly-regular", FAILS, witness=(p, E.point_label(j)),
                               detail="point of N_p in no member of D_p"), W
    return ClassReport("strongly-regular", HOLDS), W


def _strong_presented(H, sample):
    from .interval import enumerate_basic, leq_P, least_shrink
    W = strong_regularity_witness(H)
    for p in itertools.islice(enumerate_basic(), sample):
        r = least_shrink(p, p.width / 2)
        if not W.contains(p, r) or not leq_P(r, p):
            return ClassReport("strongly-regular", FAILS, witness=(p, r),
                               detail="shrunken interval not in D_p"), W
    return ClassReport("strongly-regular", HOLDS,
                       detail=f"D_p nonempty for the first {sample} basics"), W


# ---------------------------------------------------------------- normality

def is_normal(space, method: str = "basic") -> ClassReport:
    """Basic pairs with disjoint closures are separated by disjoint opens.

    ``method="basic"`` searches basic ``r ⊇ cl(N_p)``, ``t ⊇ cl(N_q)`` with
    ``N_r ∩ N_t = ∅``.  ``method="hybrid"`` builds the separating lattice
    elements with the normality functionals and reports them.
    """
    P = _finite(space)
    E = Extents(P)
    els, n = P.elements, len(P)
    cl = [E.closure(e) for e in E.ext]
    H = None
    separated = []
    for i in range(n):
        for j in range(i + 1, n):
            if cl[i] & cl[j]:
                continue
            if method == "basic":
                pair = _basic_separation(E, cl[i], cl[j])
            elif method == "hybrid":
                if H is None:
                    H = space if isinstance(space, ExtentHybrid) else finite_poset_upgrade(P)
                pair = _hybrid_separation(H, els[i], els[j])
            else:
                raise ValueError(f"unknown method {method!r}")
            if pair is None:
                return ClassReport("normal", FAILS, witness=(els[i], els[j]),
                                   detail="closures disjoint but no separating opens")
            separated.append(pair)
    detail = " ".join(f"{a}|{b}" for a, b in separated[:8])
    return ClassReport("normal", HOLDS, detail=detail)


def _basic_separation(E: Extents, ci: int, cj: int):
    els = E.P.elements
    rs = [r for r, e in enumerate(E.ext) if ci & ~e == 0]
    ts = [t for t, e in enumerate(E.ext) if cj & ~e == 0]
    for r in rs:
        for t in ts:
            if not E.ext[r] & E.ext[t]:
                return els[r], els[t]
    return None


def _hybrid_separation(H: ExtentHybrid, p, q):
    from .metrize import nu
    try:
        sep = nu(H.embed(p), H.embed(q), H)
    except WitnessError:
        return None
    if H.meet(sep.nu1, sep.nu2) != H.zero:
        return None
    return H.label(sep.nu1), H.label(sep.nu2)


# ---------------------------------------------------------------- discreteness, covers

def is_discrete(space, budget: int = 64, bound: int = DEFAULT_ORACLE_BOUND) -> ClassReport:
    """Every point is isolated by a basic open.  Presented trees are
    answered through well-foundedness."""
    if _presented_tree(space):
        from .trees import tree_discreteness
        return tree_discreteness(space, budget)
    E = Extents(_finite(space), bound)
    singles = set(E.ext)
    for j in range(len(E.points)):
        if 1 << j not in singles:
            return ClassReport("discrete", FAILS, witness=E.point_label(j),
                               detail="no basic extent isolates this point")
    return ClassReport("discrete", HOLDS)


def covers(space, pts: Sequence = (), budget: int = 64,
           bound: int = DEFAULT_ORACLE_BOUND) -> ClassReport:
    """Every point contains one of ``pts``.  Presented trees take the
    ``{σ⌢*}`` family and are answered through well-foundedness."""
    if _presented_tree(space):
        from .trees import star_cover_check
        return star_cover_check(space, budget)
    P = _finite(space)
    E = Extents(P, bound)
    want = P.mask(pts)
    for j, m in enumerate(E.points):
        if not m & want:
            return ClassReport("cover", FAILS, witness=E.point_label(j),
                               detail="point contains none of the listed elements")
    return ClassReport("cover", HOLDS)


CHECKS = {
    "proper": is_proper,
    "clopen": clopen_basis_check,
    "regular": is_regular,
    "strongly-regular": lambda s: is_strongly_regular(s)[0],
    "normal": is_normal,
    "discrete": is_discrete,
}
