"""Trees as MF spaces and the Φ construction.

A node is a tuple of labels (naturals, plus :data:`STAR` as a final entry
after Φ).  Viewed as a poset, ``σ <= τ`` iff ``τ`` is a prefix of ``σ``:
longer nodes code smaller opens, and maximal filters are maximal branches.
Φ(T) adds a leaf ``σ⌢*`` under every node of ``T``; it is discrete, and
the leaves ``σ⌢*`` cover it, exactly when ``T`` has no infinite path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import InputError, ParseError
from .hybrid import ExtentHybrid
from .order import DEFAULT_ORACLE_BOUND, FinitePoset, enumerate_maximal_filters
from .report import ClassReport, Verdict

STAR = "*"
FAMILIES = ("explicit-finite", "full-k-ary", "comb", "user-predicate")


def _label(x) -> str:
    return str(x)


def node_str(node: tuple) -> str:
    return ".".join(map(_label, node)) if node else "ε"


@dataclass(frozen=True)
class PresentedTree:
    """Prefix-closed set of nodes given by a family tag and its data.

    ``branching_bound(depth)`` is the largest natural child label worth
    probing at that depth.  ``phi`` marks the Φ image of the underlying
    tree; membership is then decided from the underlying tree.
    """

    family: str
    name: str = ""
    nodes: frozenset = frozenset()
    k: int = 2
    spine: int = 0
    predicate: Callable | None = field(default=None, compare=False)
    bound: Callable | None = field(default=None, compare=False)
    phi: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown tree family {self.family!r}")
        if self.family == "explicit-finite":
            nodes = frozenset(tuple(s) for s in self.nodes) | {()}
            for s in nodes:
                if s[:-1] not in nodes and s:
                    raise InputError(f"node {node_str(s)} has no parent in the tree")
                if STAR in s:
                    raise InputError("explicit nodes may not use '*'")
            object.__setattr__(self, "nodes", nodes)
        if self.family == "user-predicate" and (self.predicate is None or self.bound is None):
            raise InputError("user-predicate trees need a predicate and a branching bound")
        if self.family == "full-k-ary" and self.k < 0:
            raise InputError("k must be non-negative")

    # -- the underlying tree T
    def base_contains(self, s: tuple) -> bool:
        if self.family == "explicit-finite":
            return s in self.nodes
        if self.family == "full-k-ary":
            return all(isinstance(a, int) and 0 <= a < self.k for a in s)
        if self.family == "comb":
            # spine^n, or spine^n followed by one tooth label
            body = s[:-1] if s and s[-1] == self.spine + 1 else s
            return all(a == self.spine for a in body)
        return all(self.predicate(s[:i]) for i in range(len(s) + 1))

    def branching_bound(self, depth: int) -> int:
        if self.family == "explicit-finite":
            return max((s[depth] for s in self.nodes if len(s) > depth), default=-1)
        if self.family == "full-k-ary":
            return self.k - 1
        if self.family == "comb":
            return self.spine + 1
        return self.bound(depth)

    # -- the presented tree (T or Φ(T))
    def __contains__(self, s) -> bool:
        s = tuple(s)
        if self.phi and s and s[-1] == STAR:
            return STAR not in s[:-1] and self.base_contains(s[:-1])
        return STAR not in s and self.base_contains(s)

    def children(self, s: tuple) -> Iterator[tuple]:
        if self.phi and s and s[-1] == STAR:
            return
        for a in range(self.branching_bound(len(s)) + 1):
            if s + (a,) in self:
                yield s + (a,)
        if self.phi:
            yield s + (STAR,)

    def base(self) -> PresentedTree:
        return _replace(self, phi=False)

    def finite_nodes(self) -> list[tuple]:
        if self.family != "explicit-finite":
            raise InputError(f"{self.family} trees are not explicitly finite")
        out = sorted(self.nodes, key=lambda s: (len(s), s))
        if self.phi:
            out += [s + (STAR,) for s in out]
        return out


def _replace(T: PresentedTree, **kw) -> PresentedTree:
    from dataclasses import replace
    return replace(T, **kw)


def explicit_tree(nodes, name: str = "") -> PresentedTree:
    return PresentedTree("explicit-finite", name=name, nodes=frozenset(map(tuple, nodes)))


def full_tree(k: int = 2, name: str = "") -> PresentedTree:
    return PresentedTree("full-k-ary", name=name or f"full-{k}-ary", k=k)


def comb_tree(spine: int = 0, name: str = "") -> PresentedTree:
    return PresentedTree("comb", name=name or "comb", spine=spine)


def predicate_tree(predicate, bound, name: str = "") -> PresentedTree:
    return PresentedTree("user-predicate", name=name, predicate=predicate, bound=bound)


def phi(T: PresentedTree) -> PresentedTree:
    """Φ(T) = T ∪ {σ⌢* : σ ∈ T}."""
    if T.phi:
        raise InputError("Φ is applied to plain trees only")
    if () not in T:
        raise InputError("tree must contain the empty sequence")
    return _replace(T, phi=True)


# ---------------------------------------------------------------- posets

def tree_poset(T: PresentedTree) -> FinitePoset:
    """Nodes ordered by reverse prefix: ``σ <= τ`` iff ``τ`` is a prefix of ``σ``."""
    nodes = T.finite_nodes()
    rel = [(s, s[:-1]) for s in nodes if s]
    return FinitePoset(nodes, rel, name=T.name)


def prefix_poset(T: PresentedTree) -> FinitePoset:
    """The other direction, ``σ <= τ`` iff ``σ`` is a prefix of ``τ``.
    Kept only to show it gives the wrong points."""
    nodes = T.finite_nodes()
    return FinitePoset(nodes, [(s[:-1], s) for s in nodes if s], name=T.name)


def maximal_branches(T: PresentedTree) -> list[frozenset]:
    """Leaf-to-root branches of a finite tree."""
    nodes = T.finite_nodes()
    have = set(nodes)
    leaves = [s for s in nodes if not any(c in have for c in T.children(s))]
    return [frozenset(s[:i] for i in range(len(s) + 1)) for s in leaves]


def tree_to_hybrid(T: PresentedTree) -> ExtentHybrid:
    return ExtentHybrid(tree_poset(T))


# ---------------------------------------------------------------- well-foundedness

@dataclass(frozen=True)
class Foundedness:
    """Three-valued well-foundedness answer with an infinite-path prefix
    (``path``) or the deepest node reached."""

    verdict: Verdict
    path: tuple = ()
    detail: str = ""


def well_founded(T: PresentedTree, budget: int = 64,
                 node_budget: int = 100_000) -> Foundedness:
    """Family oracle; user predicates get a bounded search.

    ``HOLDS`` means no infinite path.  Explicit finite trees hold; full
    ``k``-ary trees (``k >= 1``) and combs fail along ``0^ω`` / the spine.
    A user predicate holds only if the search exhausts the tree below the
    branching bound; reaching depth ``budget`` or ``node_budget`` nodes
    gives ``BUDGET`` with the deepest node found.
    """
    T = T.base()
    if T.family == "explicit-finite":
        return Foundedness(Verdict.HOLDS, detail=f"{len(T.nodes)} nodes")
    if T.family == "full-k-ary":
        if T.k == 0:
            return Foundedness(Verdict.HOLDS, detail="root only")
        return Foundedness(Verdict.FAILS, path=(0,) * budget, detail="leftmost branch")
    if T.family == "comb":
        return Foundedness(Verdict.FAILS, path=(T.spine,) * budget, detail="spine")
    deepest = ()
    seen = 0
    stack = [()]
    while stack:
        s = stack.pop()
        seen += 1
        if len(s) > len(deepest):
            deepest = s
        if len(s) >= budget or seen > node_budget:
            return Foundedness(Verdict.BUDGET, path=deepest,
                               detail=f"search stopped at depth {len(deepest)}")
        stack.extend(reversed(list(T.children(s))))
    return Foundedness(Verdict.HOLDS, detail=f"exhausted {seen} nodes")


def _path_witness(path: tuple) -> str:
    return "path:" + ",".join(map(_label, path)) + ",..."


def _from_foundedness(name: str, wf: Foundedness) -> ClassReport:
    if wf.verdict is Verdict.HOLDS:
        return ClassReport(name, Verdict.HOLDS, detail=wf.detail)
    if wf.verdict is Verdict.FAILS:
        return ClassReport(name, Verdict.FAILS, witness=_path_witness(wf.path),
                           detail=f"(A|n)⌢* -> A along the {wf.detail}")
    return ClassReport(name, Verdict.BUDGET, witness="deepest:" + node_str(wf.path),
                       detail=wf.detail)


def tree_discreteness(T: PresentedTree, budget: int = 64) -> ClassReport:
    """Is Φ(T) discrete?  Accepts ``T`` or ``Φ(T)``."""
    return _from_foundedness("discrete", well_founded(T, budget))


def star_cover_check(T: PresentedTree, budget: int = 64,
                     bound: int = DEFAULT_ORACLE_BOUND * 4) -> ClassReport:
    """Do the leaves ``σ⌢*`` cover Φ(T)?

    Answered through well-foundedness; explicit finite trees are also
    checked by enumerating the maximal filters of Φ(T).
    """
    report = _from_foundedness("cover", well_founded(T, budget))
    if T.family != "explicit-finite":
        return report
    F = phi(T.base())
    points = enumerate_maximal_filters(tree_poset(F), bound=bound)
    bad = [m for m in points if not any(s and s[-1] == STAR for s in m)]
    if bad:
        return ClassReport("cover", Verdict.FAILS,
                           witness=sorted(map(node_str, bad[0])),
                           detail="maximal filter with no starred node")
    return ClassReport("cover", report.verdict, detail=report.detail + "; filters checked")


# ---------------------------------------------------------------- text format

def parse_tree(text: str) -> PresentedTree:
    """``tree <name>`` then ``node 0.1.1`` lines, or one ``family`` line:
    ``family full-binary``, ``family full-k-ary k=3``, ``family comb spine=0``."""
    name, nodes, family, opts = None, [], None, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, *rest = line.split()
        if kw == "tree":
            if name is not None or len(rest) != 1:
                raise ParseError("expected a single 'tree <name>' header", lineno)
            name = rest[0]
        elif kw == "node":
            if len(rest) != 1:
                raise ParseError("expected: node <label>.<label>...", lineno)
            try:
                node = tuple(int(a) for a in rest[0].split("."))
            except ValueError:
                raise ParseError(f"bad node {rest[0]!r}", lineno) from None
            if any(a < 0 for a in node):
                raise ParseError("labels are naturals", lineno)
            nodes.append((node, lineno))
        elif kw == "family":
            if family is not None or not rest:
                raise ParseError("expected a single 'family <kind>' line", lineno)
            family = rest[0]
            for opt in rest[1:]:
                key, _, val = opt.partition("=")
                if not val.isdigit():
                    raise ParseError(f"bad option {opt!r}", lineno)
                opts[key] = int(val)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno)
    if name is None:
        raise ParseError("missing 'tree <name>' header", 1)
    if family is not None:
        if nodes:
            raise ParseError("node lines and a family line cannot be mixed", nodes[0][1])
        if family == "full-binary":
            return full_tree(2, name)
        if family == "full-k-ary":
            return full_tree(opts.get("k", 2), name)
        if family == "comb":
            return comb_tree(opts.get("spine", 0), name)
        raise ParseError(f"unknown family {family!r}", 1)
    have = {()} | {n for n, _ in nodes}
    for n, lineno in nodes:
        if n[:-1] not in have:
            raise ParseError(f"node {node_str(n)} has no parent", lineno)
    return explicit_tree(have, name)


def format_tree(T: PresentedTree) -> str:
    lines = [f"tree {T.name or 'anon'}"]
    if T.family == "explicit-finite":
        lines += [f"node {node_str(s)}" for s in sorted(T.nodes, key=lambda s: (len(s), s)) if s]
    elif T.family == "full-k-ary":
        lines.append(f"family full-k-ary k={T.k}")
    elif T.family == "comb":
        lines.append(f"family comb spine={T.spine}")
    else:
        raise InputError("user-predicate trees have no text form")
    return "\n".join(lines) + "\n"
