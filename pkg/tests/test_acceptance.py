"""The eleven acceptance criteria at their stated sizes and tolerances.

Each criterion is a function returning ``(passed, detail)``.  Under pytest
the results are collected and printed one line per criterion after the
run; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction as F

import pytest

from mftopo.interval import (FiniteUnion, IntervalSpace, RatInterval, basic_at, dense_set,
                             least_shrink, meet, point_at)
from mftopo.metrize import (MetricFamily, apply_function_code, dyadic_chain, embedding_code,
                            gdelta_witness_levels, metric_eval, nu, point_finite_refinement,
                            urysohn_eval)
from mftopo.suites import (suite_complement, suite_interval, suite_points, suite_proper,
                           suite_trees)

H = IntervalSpace()
GRID = [F(i, 1000) for i in range(1001)]


def summary(records):
    *_, last = records
    return last


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# ---------------------------------------------------------------- corpus criteria

def criterion_1():
    s, secs = timed(lambda: summary(suite_points(8)))
    ok = s["disagreements"] == 0 and secs <= 120
    return ok, f"{s['filters']} filters, {s['disagreements']} disagreements, {secs:.1f}s"


def criterion_2():
    s = summary(suite_proper(8))
    return s["exceptions"] == 0, f"{s['proper']} proper posets, {s['exceptions']} exceptions"


def criterion_3():
    s = summary(suite_interval(200, seed=0))
    ok = s["failures"] == 0 and s["sample"] >= 200
    return ok, f"{s['sample']} lattice elements, {s['failures']} failures"


def criterion_4():
    s = summary(suite_complement(8, samples=100, seed=0))
    return s["violations"] == 0, f"{s['violations']} violations"


def criterion_11():
    s = summary(suite_trees(12))
    return s["disagreements"] == 0, f"{s['trees']} trees, {s['disagreements']} disagreements"


# ---------------------------------------------------------------- normality

def disjoint_closure_pair(rng, den=24):
    """Two unions built from alternating pieces of one sorted endpoint
    list, so their closures never meet."""
    m = rng.randint(2, 4)
    ends = sorted(rng.sample(range(den + 1), 2 * m))
    parts = [RatInterval(F(a, den), F(b, den), a == 0, b == den)
             for a, b in zip(ends[::2], ends[1::2])]
    side = [i % 2 for i in range(m)]
    rng.shuffle(side)
    U = FiniteUnion(p for p, s in zip(parts, side) if s == 0)
    V = FiniteUnion(p for p, s in zip(parts, side) if s == 1)
    return U, V


def criterion_5():
    rng = random.Random(5)
    bad = 0
    for _ in range(50):
        U, V = disjoint_closure_pair(rng)
        sep = nu(U, V, H)
        bad += sum(1 for x in GRID if U.closure_contains(x) and not sep.nu1.contains(x))
        bad += sum(1 for x in GRID if V.closure_contains(x) and not sep.nu2.contains(x))
        bad += sum(1 for a in sep.u_terms for b in sep.v_terms if meet(a, b))
    return bad == 0, f"50 pairs, {bad} violations"


def criterion_6():
    rng = random.Random(6)
    bad = 0
    for _ in range(20):
        p = basic_at(rng.randrange(2, 400))
        q = least_shrink(p, p.width * F(rng.randint(1, 3), 4))
        bad += len(dyadic_chain(H, p, q, 4).verify(4))
    return bad == 0, f"20 chains at depth 4, {bad} failed pc(U(k)) v U(k') = 1 checks"


# ---------------------------------------------------------------- Urysohn and metric

def _urysohn_ends(fam, k):
    bad = 0
    for n in range(10):
        ch = fam.chain(n)
        for x in GRID[::17]:
            if ch.q.contains(x):
                bad += not urysohn_eval(ch, point_at(x), k).contains(0)
            elif not ch.p.contains(x):
                bad += not urysohn_eval(ch, point_at(x), k).contains(1)
    return bad


def _rational(rng):
    den = rng.randint(1, 48)
    return F(rng.randint(0, den), den)


def criterion_7():
    k = 8
    tol = F(3, 2 ** k)
    rng = random.Random(7)
    t0 = time.perf_counter()
    fam = MetricFamily(H)
    problems = {}
    problems["ends"] = _urysohn_ends(fam, k)
    pts = [_rational(rng) for _ in range(20)]
    problems["identity"] = sum(not metric_eval(x, x, k, fam).contains(0) for x in pts)
    problems["symmetry"] = sum(metric_eval(x, y, k, fam) != metric_eval(y, x, k, fam)
                               for x, y in zip(pts, pts[1:]))
    tri = 0
    for _ in range(200):
        x, y, z = (_rational(rng) for _ in range(3))
        xy, yz, xz = (metric_eval(a, b, k, fam) for a, b in ((x, y), (y, z), (x, z)))
        tri += xz.center > xy.center + yz.center + tol
    problems["triangle"] = tri
    pos = n = 0
    while n < 50:
        x, y = _rational(rng), _rational(rng)
        if abs(x - y) < F(1, 4):
            continue
        n += 1
        pos += not metric_eval(x, y, k, fam).excludes_zero()
    problems["positivity"] = pos
    conv = 0
    for _ in range(10):
        x = _rational(rng)
        sign = 1 if x < F(1, 2) else -1
        seq = [metric_eval(x + sign * F(1, 2 ** j), x, k, fam).hi for j in range(2, 18)]
        conv += not all(h <= F(2, 2 ** k) for h in seq[-4:])
    problems["convergence"] = conv
    secs = time.perf_counter() - t0
    ok = not any(problems.values()) and secs <= 300
    detail = " ".join(f"{name}={v}" for name, v in problems.items())
    return ok, f"k={k} {detail} {secs:.1f}s"


def criterion_8():
    k = 8
    fam = MetricFamily(H)
    E = embedding_code(H, fam, k)
    dense = list(itertools.islice(dense_set(), 40))
    worst = F(0)
    for a, b in zip(dense[::2], dense[1::2]):
        ha, hb = apply_function_code(E, a, k), apply_function_code(E, b, k)
        d = metric_eval(a.value, b.value, k + 2, fam)
        dh = metric_eval(ha.approx, hb.approx, k + 2, fam)
        # |d(a,b) - d^(h a, h b)| <= bracket gap + the radii of h a and h b
        err = max(d.hi - dh.lo, dh.hi - d.lo) + ha.radius + hb.radius
        worst = max(worst, err)
    return worst <= F(1, 64), f"20 dense pairs, worst certified error {float(worst):.5f}"


# ---------------------------------------------------------------- refinement, G-delta

def random_cover(rng, den=32):
    cuts = sorted(rng.sample(range(1, den), rng.randint(0, 6)))
    pts = [0] + cuts + [den]
    out = []
    for a, b in zip(pts, pts[1:]):
        lo, hi = max(a - rng.randint(1, 3), 0), min(b + rng.randint(1, 3), den)
        out.append(FiniteUnion([RatInterval(F(lo, den), F(hi, den), lo == 0, hi == den)]))
    rng.shuffle(out)
    return out


def criterion_9():
    rng = random.Random(9)
    bad = 0
    for _ in range(20):
        R = point_finite_refinement(random_cover(rng))
        bad += not R.refines()
        for x in R.check_points() + GRID:
            bad += not R.covers_point(x) or R.multiplicity(x) > 2
    return bad == 0, f"20 covers, {bad} violations"


def criterion_10():
    rng = random.Random(10)
    L = gdelta_witness_levels(3)
    bad = 0
    for _ in range(25):
        z = _rational(rng)
        bad += not all(L.contains(i, z) for i in range(4))
        path = L.branch(z)
        bad += any(q.width >= F(1, 2 ** i) for i, q in enumerate(path))
    return bad == 0, f"depth 3, 25 points, {bad} violations"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    from conftest import ACCEPTANCE
    ok, detail = CRITERIA[n]()
    ACCEPTANCE.append((n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
