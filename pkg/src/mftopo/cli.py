"""Command-line front end.

Every subcommand parses its inputs, calls one library operation and prints
``key=value`` records.  Exit status: 0 holds, 1 fails, 2 budget exhausted,
64 usage error, 65 parse/input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import classify, formats, hybrid, metrize, order, suites, trees
from .errors import (Deferred, DomainError, InputError, MFError, ResourceError,
                     StructuralError, WitnessError)
from .interval import IntervalSpace, parse_interval, parse_rational
from .report import Verdict

EX_USAGE, EX_DATAERR = 64, 65


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    paths: list = field(default_factory=list)
    k: int = 6
    oracle_bound: int = order.DEFAULT_ORACLE_BOUND
    query_budget: int = 64
    depth_budget: int = 3
    seed: int = 0
    human: bool = False

    def __post_init__(self):
        for name in ("oracle_bound", "query_budget", "depth_budget"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name} must be positive")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


class Out:
    def __init__(self, cfg: RunConfig, stream):
        self.cfg, self.stream = cfg, stream
        self.worst = Verdict.HOLDS

    def emit(self, **fields):
        text = formats.human(fields) if self.cfg.human else formats.record(fields) + "\n"
        self.stream.write(text)

    def verdict(self, v: Verdict):
        rank = {Verdict.HOLDS: 0, Verdict.BUDGET: 1, Verdict.FAILS: 2}
        if rank[v] > rank[self.worst]:
            self.worst = v

    def report(self, r):
        self.verdict(r.verdict)
        self.emit(property=r.name, verdict=r.verdict, witness=r.witness)


# ---------------------------------------------------------------- commands

def _bounded(P, cfg: RunConfig):
    if len(P) > cfg.oracle_bound:
        raise ResourceError(f"poset has {len(P)} elements, oracle bound is "
                            f"{cfg.oracle_bound}", bound=cfg.oracle_bound)
    return P


def _space(path: str, cfg: RunConfig):
    if path == formats.INTERVAL:
        return "interval", IntervalSpace()
    kind, obj = formats.load(path)
    if kind == "poset":
        return kind, hybrid.finite_poset_upgrade(_bounded(obj, cfg))
    if kind == "tree":
        return kind, obj
    if kind == "hybrid":
        return kind, obj
    raise InputError(f"{path}: a {kind} file does not describe a space")


def cmd_validate(args, cfg, out):
    kind, H = _space(args.path, cfg)
    if kind == "tree":
        H = trees.tree_to_hybrid(H)
    if kind == "interval":
        import random
        sample = H.sample(args.sample, random.Random(cfg.seed))
        report = hybrid.validate_axioms(H, sample=sample)
    else:
        hybrid.check_lattice(H)
        report = hybrid.validate_axioms(H)
    for r in report.results:
        v = Verdict.HOLDS if r.ok else Verdict.FAILS
        out.verdict(v)
        out.emit(axiom=r.axiom, verdict=v, witness=None if r.ok else str(r.witness))


def cmd_maxfilters(args, cfg, out):
    kind, obj = formats.load(args.path)
    if kind == "tree":
        obj = trees.tree_poset(trees.phi(obj) if args.phi else obj)
    elif kind != "poset":
        raise InputError(f"{args.path}: maxfilters needs a poset or tree file")
    points = order.enumerate_maximal_filters(obj, bound=cfg.oracle_bound, method=args.method)
    for m in points:
        out.emit(filter=m)
    out.emit(count=len(points))


def cmd_check(args, cfg, out):
    if args.path == formats.INTERVAL:
        kind, obj = "interval", IntervalSpace()
    else:
        kind, obj = formats.load(args.path)
    props = [p.strip() for p in args.properties.split(",") if p.strip()]
    if kind == "tree":
        checks = {"discrete": lambda T: classify.is_discrete(T, cfg.depth_budget),
                  "cover": lambda T: classify.covers(T, budget=cfg.depth_budget)}
    elif kind == "poset":
        _bounded(obj, cfg)
        checks = {**classify.CHECKS,
                  "cover": lambda P: classify.covers(P, args.points.split(",")
                                                     if args.points else ())}
    elif kind == "interval":
        checks = {"strongly-regular":
                  lambda H: classify.is_strongly_regular(H, cfg.query_budget)[0]}
    else:
        raise InputError(f"{args.path}: check needs a poset or tree file, or 'interval'")
    for p in props:
        if p not in checks:
            raise UsageError(f"unknown property {p!r}; known: {','.join(sorted(checks))}")
    for p in props:
        out.report(checks[p](obj))


def _need_interval(space):
    if space != formats.INTERVAL:
        raise UsageError("only the 'interval' space is presented for metric commands")


def cmd_dist(args, cfg, out):
    _need_interval(args.space)
    x, y = parse_rational(args.x), parse_rational(args.y)
    fam = metrize.MetricFamily(IntervalSpace())
    d = metrize.metric_eval(x, y, args.k, fam)
    out.emit(d=d, lo=d.lo, hi=d.hi)


def cmd_metrize(args, cfg, out):
    _need_interval(args.space)
    H = IntervalSpace()
    p, q = parse_interval(args.p), parse_interval(args.q)
    depth = args.depth if args.depth is not None else cfg.depth_budget
    chain = metrize.dyadic_chain(H, p, q, depth)
    for k, U in sorted(chain.build(depth).items()):
        out.emit(level=k, open=U)
    bad = chain.verify(depth)
    v = Verdict.FAILS if bad else Verdict.HOLDS
    out.verdict(v)
    out.emit(verify=v, witness=bad[0] if bad else None)


def cmd_tree(args, cfg, out):
    T = formats.load_tree(args.tree)
    budget = args.budget if args.budget is not None else cfg.depth_budget
    if args.phi:
        T = trees.phi(T)
        if T.family == "explicit-finite":
            for node in T.finite_nodes():
                out.emit(node=node)
        else:
            out.emit(phi=T.name or T.family)
    if args.discrete:
        out.report(trees.tree_discreteness(T, budget))
    if args.cover:
        out.report(trees.star_cover_check(T, budget))


def cmd_refine(args, cfg, out):
    kind, obj = formats.load(args.path)
    if kind != "cover":
        raise InputError(f"{args.path}: refine needs a cover file")
    _, cover = obj
    R = metrize.point_finite_refinement(cover)
    for i, s in enumerate(R.sets):
        out.emit(set=i, open=s)
    pts = R.check_points()
    worst = max(R.multiplicity(x) for x in pts)
    ok = R.refines() and all(R.covers_point(x) for x in pts) and worst <= R.bound
    v = Verdict.HOLDS if ok else Verdict.FAILS
    out.verdict(v)
    out.emit(refines=R.refines(), multiplicity=worst, verdict=v,
             witness=None if ok else "refinement contract")


def cmd_gdelta(args, cfg, out):
    _need_interval(args.space)
    depth = args.depth if args.depth is not None else cfg.depth_budget
    L = metrize.gdelta_witness_levels(depth, bound=cfg.depth_budget)
    for i in range(depth + 1):
        out.emit(level=i, members=len(L.admissible[i]), C=L.C[i])
    for raw in args.point or ():
        z = parse_rational(raw)
        out.emit(point=z, branch=[str(q) for q in L.branch(z)])


def cmd_corpus(args, cfg, out):
    runner = suites.SUITES[args.suite]
    i, _, n = args.shard.partition("/")
    try:
        shard = (int(i), int(n))
    except ValueError:
        raise UsageError("--shard takes i/n") from None
    if not 0 <= shard[0] < shard[1]:
        raise UsageError("--shard needs 0 <= i < n")
    kw = {"shard": shard}
    if args.size is not None:
        kw[{"trees": "max_nodes", "interval": "size"}.get(args.suite, "max_size")] = args.size
    if args.suite in ("interval", "complement"):
        kw["seed"] = cfg.seed
    summary = None
    for rec in runner(**kw):
        if "suite" in rec:
            summary = rec
        elif args.verbose:
            out.emit(**rec)
    out.emit(**summary)
    bad = summary.get("disagreements", 0) + summary.get("exceptions", 0) \
        + summary.get("violations", 0) + summary.get("failures", 0)
    out.verdict(Verdict.FAILS if bad else Verdict.HOLDS)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mftopo", description="Maximal-filter spaces at desk scale.")
    ap.add_argument("--human", action="store_true", help="aligned key/value blocks")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the hybrid axioms")
    p.add_argument("path", help="poset/hybrid/tree file, or 'interval'")
    p.add_argument("--sample", type=int, default=200)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("maxfilters", help="list the points of a finite poset")
    p.add_argument("path")
    p.add_argument("--method", choices=("principal", "subsets", "upsets"), default="principal")
    p.add_argument("--phi", action="store_true", help="apply Φ to a tree first")
    p.set_defaults(func=cmd_maxfilters)

    p = sub.add_parser("check", help="classification properties")
    p.add_argument("path")
    p.add_argument("--properties", default="proper")
    p.add_argument("--points", help="comma-separated elements for the cover property")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dist", help="metric bracket between two rationals")
    p.add_argument("space")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("-k", type=int, default=6)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("metrize", help="dyadic open chain for p and q in D_p")
    p.add_argument("space")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_metrize)

    p = sub.add_parser("tree", help="tree spaces and Φ")
    p.add_argument("tree", help="tree file or family: full-binary, comb")
    p.add_argument("--phi", action="store_true")
    p.add_argument("--discrete", action="store_true")
    p.add_argument("--cover", action="store_true")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("refine", help="point-finite refinement of an interval cover")
    p.add_argument("path")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("gdelta", help="G_δ witness levels")
    p.add_argument("space")
    p.add_argument("--depth", type=int)
    p.add_argument("--point", action="append")
    p.set_defaults(func=cmd_gdelta)

    p = sub.add_parser("corpus", help="run a corpus suite")
    p.add_argument("suite", choices=sorted(suites.SUITES))
    p.add_argument("--size", type=int)
    p.add_argument("--shard", default="0/1")
    p.add_argument("-v", "--verbose", action="store_true", help="one record per item")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command, k=getattr(args, "k", 6), seed=args.seed, human=args.human,
            oracle_bound=_env_int("MFTOP_ORACLE_BOUND", order.DEFAULT_ORACLE_BOUND),
            query_budget=_env_int("MFTOP_QUERY_BUDGET", 64),
            depth_budget=_env_int("MFTOP_DEPTH_BUDGET", 3))
        out = Out(cfg, stdout)
        args.func(args, cfg, out)
    except UsageError as exc:
        print(f"mftopo: error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ResourceError, Deferred) as exc:
        print(formats.record({"verdict": Verdict.BUDGET}), file=stdout)
        print(f"mftopo: {exc}", file=sys.stderr)
        return Verdict.BUDGET.exit_code
    except (WitnessError, DomainError, StructuralError) as exc:
        witness = getattr(exc, "witness", None)
        if witness is None:
            witness = getattr(exc, "index", None)
        print(formats.record({"verdict": Verdict.FAILS, "witness": witness}), file=stdout)
        print(f"mftopo: {exc}", file=sys.stderr)
        return Verdict.FAILS.exit_code
    except (InputError, MFError) as exc:
        print(f"mftopo: error: {exc}", file=sys.stderr)
        return EX_DATAERR
    return out.worst.exit_code


if __name__ == "__main__":
    sys.exit(main())
