"""Brute-force reference answers for cross-checking the exact solvers.

Everything here is deliberately written from scratch against the problem
statements, sharing only the exact-arithmetic layer with the main pipeline,
so that an agreement between solver and oracle actually means something.
All oracles are exponential and guarded by small size caps.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

from .errors import InputError, ResourceError
from .exactmath import (lp_optimize, solve_linear_system, INFEASIBLE,
                        OPTIMAL, UNIQUE)
from .rational import Rat, ZERO, ONE

BP_BRUTE_ITEM_CAP = 12
PATTERN_BUDGET = 200_000
COVER_SCAN_BUDGET = 2_000_000
BRUTE_JOB_CAP = 6
BRUTE_HORIZON_CAP = 50


# ---------------------------------------------------------------------------
# bin packing


def _patterns_within(sizes, limit):
    """All integer vectors 0 <= x <= limit with sizes . x <= 1."""
    d = len(sizes)
    out = []

    def rec(j, prefix, slack):
        if j == d:
            out.append(tuple(prefix))
            return
        count = 0
        left = slack
        while count <= limit[j]:
            rec(j + 1, prefix + [count], left)
            count += 1
            left = left - sizes[j]
            if left < 0:
                break

    rec(0, [], ONE)
    return out


def bp_brute_force(sizes: Sequence, multiplicities: Sequence[int],
                   cap: int = BP_BRUTE_ITEM_CAP) -> int:
    """Minimum bins by dynamic programming over residual demands."""
    sizes = [Rat(s) for s in sizes]
    a = tuple(int(v) for v in multiplicities)
    if len(sizes) != len(a):
        raise InputError("sizes and multiplicities must align")
    if any(s <= 0 for s in sizes):
        raise InputError("sizes must be positive")
    if any(v < 0 for v in a):
        raise InputError("multiplicities must be non-negative")
    total = sum(a)
    if total > cap:
        raise ResourceError("bin packing brute force", cap,
                            f"instance has {total} items")
    if any(s > 1 for s in sizes):
        raise InputError("an item larger than the bin can never pack")
    memo = {}

    def best(residual):
        if all(v == 0 for v in residual):
            return 0
        if residual in memo:
            return memo[residual]
        memo[residual] = sum(residual)  # one item per bin always works
        for p in _patterns_within(sizes, residual):
            if all(v == 0 for v in p):
                continue
            rest = tuple(r - v for r, v in zip(residual, p))
            cand = 1 + best(rest)
            if cand < memo[residual]:
                memo[residual] = cand
        return memo[residual]

    return best(a)


def fractional_opt(sizes: Sequence, multiplicities: Sequence[int]) -> Rat:
    """Exact optimum of the fractional relaxation over all patterns.

    Patterns are not clipped to the demand: a pattern holding more copies
    of an item than are demanded may still appear with a fractional weight.
    """
    sizes = [Rat(s) for s in sizes]
    a = [Rat(int(v)) for v in multiplicities]
    if any(s <= 0 for s in sizes):
        raise InputError("sizes must be positive")
    if all(v == 0 for v in a):
        return ZERO
    caps = []
    cells = 1
    for s in sizes:
        cap = int(ONE / s) if s <= 1 else 0
        caps.append(cap)
        cells *= cap + 1
        if cells > PATTERN_BUDGET:
            raise ResourceError("pattern enumeration", PATTERN_BUDGET,
                                "too many knapsack patterns")
    patterns = [p for p in _patterns_within(sizes, caps)
                if any(v != 0 for v in p)]
    d = len(sizes)
    rows = [[Rat(p[j]) for p in patterns] for j in range(d)]
    res = lp_optimize(rows, a, [ONE] * len(patterns), sense="min",
                      senses=["=="] * d, lo=[ZERO] * len(patterns))
    if res.status != OPTIMAL:
        raise InputError("fractional relaxation is infeasible or unbounded")
    return res.value


# ---------------------------------------------------------------------------
# integer cone membership


def _scan_integer_points(A, b, lo, hi):
    """Integer points of {A x <= b} inside the box, by plain scanning."""
    d = len(lo)
    out = []

    def rec(j, prefix):
        if j == d:
            p = tuple(prefix)
            if all(sum(r * v for r, v in zip(row, p)) <= bound
                   for row, bound in zip(A, b)):
                out.append(p)
            return
        for v in range(lo[j], hi[j] + 1):
            rec(j + 1, prefix + [v])

    rec(0, [])
    return out


def int_cone_brute(source, target, box: Sequence,
                   max_weight: Optional[int] = None,
                   gen_box: Optional[Sequence] = None):
    """Search every reachable sum of the source's integer points in the box.

    ``source`` is a polytope-like object (``A``/``b`` rows) whose integer
    points are found by an independent box scan over ``gen_box`` (falling
    back to ``box``), or simply an explicit list of generator points.
    ``target`` needs a ``contains_int`` method; ``box`` lists (lo, hi)
    integer bounds that confine the search.  With non-negative generators
    the closure inside the box is exhaustive, so Empty answers are
    decisive; generators with negative entries additionally require
    ``max_weight`` (and Empty then only means: not reachable with that
    many summands).  Returns (found, point, weights) with weights a
    generator -> count dict.
    """
    d = len(box)
    if hasattr(source, "A"):
        scan = [(int(lo), int(hi)) for lo, hi in (gen_box or box)]
        gens = _scan_integer_points(source.A, source.b,
                                    [lo for lo, _ in scan],
                                    [hi for _, hi in scan])
    else:
        gens = [tuple(int(v) for v in g) for g in source]
    gens = [g for g in gens if any(v != 0 for v in g)]
    for g in gens:
        if len(g) != d:
            raise InputError("generator dimension mismatch")
    box = [(int(lo), int(hi)) for lo, hi in box]
    origin = (0,) * d
    if target.contains_int(origin):
        return (True, origin, {})
    mixed = any(any(v < 0 for v in g) for g in gens)
    if mixed and max_weight is None:
        raise InputError("generators with negative entries need max_weight")

    def inside(p):
        return all(lo <= v <= hi for (lo, hi), v in zip(box, p))

    parents = {origin: None}
    frontier = [origin]
    level = 0
    while frontier:
        level += 1
        if max_weight is not None and level > max_weight:
            break
        new = []
        for base in frontier:
            for gi, g in enumerate(gens):
                p = tuple(b + v for b, v in zip(base, g))
                if p in parents or not inside(p):
                    continue
                parents[p] = (base, gi)
                if target.contains_int(p):
                    weights = {}
                    cur = p
                    while parents[cur] is not None:
                        prev, gj = parents[cur]
                        weights[gens[gj]] = weights.get(gens[gj], 0) + 1
                        cur = prev
                    return (True, p, weights)
                new.append(p)
        frontier = new
    return (False, None, None)


# ---------------------------------------------------------------------------
# cover verification


@dataclass(frozen=True)
class CoverReport:
    ok: bool
    violations: tuple = ()


def _box_from_rows(A, b, d):
    """Exact coordinate bounds of {A x <= b} via d small LPs per side.

    Returns None when the polytope is empty; raises on an unbounded one,
    which a finite scan could never verify.
    """
    lo, hi = [], []
    for j in range(d):
        obj = [ONE if i == j else ZERO for i in range(d)]
        up = lp_optimize(A, b, obj, sense="max")
        dn = lp_optimize(A, b, obj, sense="min")
        if up.status == INFEASIBLE or dn.status == INFEASIBLE:
            return None
        if up.status != OPTIMAL or dn.status != OPTIMAL:
            raise InputError("cannot scan an unbounded polytope")
        hi.append(up.value)
        lo.append(dn.value)
    return lo, hi


def cover_verify(poly, cover: Sequence,
                 scan_budget: int = COVER_SCAN_BUDGET) -> CoverReport:
    """Independently check that a parallelepiped cover is sound and complete.

    Sound: every parallelepiped vertex is an integer point of the polytope.
    Complete: every integer point of the polytope (found by a plain box
    scan over its exact coordinate bounds) lies in at least one
    parallelepiped, decided by solving for its coordinates directly.
    ``poly`` needs ``A``/``b``/``dim``; cover members need
    ``center``/``directions``.
    """
    A = [[Rat(v) for v in row] for row in poly.A]
    b = [Rat(v) for v in poly.b]
    d = poly.dim
    violations = []

    def point_in_poly(p):
        for row, bound in zip(poly.A, poly.b):
            if sum(r * v for r, v in zip(row, p)) > bound:
                return False
        return True

    def pp_vertices(pp):
        verts = [tuple(pp.center)]
        for direction in pp.directions:
            verts = [tuple(c + e * s for c, e in zip(v, direction))
                     for v in verts for s in (Rat(1), Rat(-1))]
        return verts

    for i, pp in enumerate(cover):
        for v in pp_vertices(pp):
            if any(c.denominator != 1 for c in (Rat(x) for x in v)):
                violations.append(("vertex-not-integral", i, v))
                continue
            vi = tuple(int(x) for x in v)
            if not point_in_poly(vi):
                violations.append(("vertex-outside-polytope", i, vi))

    def membership(pp, p):
        cols = [list(direction) for direction in pp.directions]
        if not cols:
            return all(Rat(a) == Rat(c) for a, c in zip(p, pp.center))
        rhs = [Rat(a) - Rat(c) for a, c in zip(p, pp.center)]
        matrix = [[cols[k][i] for k in range(len(cols))] for i in range(d)]
        res = solve_linear_system(matrix, rhs)
        if res.status != UNIQUE:
            return False
        return all(-1 <= m <= 1 for m in res.solution)

    bounds = _box_from_rows(A, b, d)
    if bounds is None:
        # empty polytope: the cover must be empty too
        if cover:
            violations.append(("cover-of-empty-polytope", len(cover)))
        return CoverReport(not violations, tuple(violations))
    lo = []
    hi = []
    for v in bounds[0]:
        q = v.numerator // v.denominator
        lo.append(int(q))
    for v in bounds[1]:
        q = -((-v.numerator) // v.denominator)
        hi.append(int(q))
    cells = 1
    for a_, b_ in zip(lo, hi):
        cells *= max(0, b_ - a_ + 1)
    if cells > scan_budget:
        raise ResourceError("cover verification scan", scan_budget,
                            f"box holds {cells} candidate points")

    def scan(j, prefix):
        if j == d:
            p = tuple(prefix)
            if point_in_poly(p):
                if not any(membership(pp, p) for pp in cover):
                    violations.append(("point-uncovered", p))
            return
        for v in range(lo[j], hi[j] + 1):
            scan(j + 1, prefix + [v])

    scan(0, [])
    return CoverReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# single-machine non-preemptive feasibility


def nonpreemptive_brute(jobs: Sequence, horizon: int,
                        job_cap: int = BRUTE_JOB_CAP,
                        horizon_cap: int = BRUTE_HORIZON_CAP) -> Optional[tuple]:
    """Schedule all jobs on one machine without preemption, or None.

    ``jobs`` lists (release, deadline, length) integer triples, one entry
    per job copy.  Tries every distinct job order and places each job at
    the earliest start respecting its release and the previous job's end.
    This is exhaustive: take any feasible schedule and list its jobs by
    start time; moving each job of that order to its earliest feasible
    start only shifts starts earlier, never later, so the order stays
    feasible under earliest-start placement and is eventually tried.
    Returns ((start, release, deadline, length), ...) or None.
    """
    jobs = tuple((int(r), int(d), int(p)) for r, d, p in jobs)
    if len(jobs) > job_cap:
        raise ResourceError("brute schedule jobs", job_cap,
                            f"{len(jobs)} job copies")
    if horizon > horizon_cap:
        raise ResourceError("brute schedule horizon", horizon_cap,
                            f"horizon {horizon}")
    for r, d, p in jobs:
        if p < 1 or r < 0 or d > horizon:
            raise InputError(f"job ({r}, {d}, {p}) is out of range")
        if r + p > d:
            return None
    if not jobs:
        return ()
    for order in sorted(set(permutations(jobs))):
        t = 0
        placed = []
        ok = True
        for r, d, p in order:
            start = max(t, r)
            if start + p > d:
                ok = False
                break
            placed.append((start, r, d, p))
            t = start + p
        if ok:
            return tuple(placed)
    return None


def nonpreemptive_brute_counts(x: Sequence[int], inst, machine_type: int,
                               job_cap: int = BRUTE_JOB_CAP,
                               horizon_cap: int = BRUTE_HORIZON_CAP):
    """Count-vector front end: x_j copies of job type j on one machine.

    ``inst`` needs ``releases``/``deadlines``/``lengths`` indexed by
    machine type then job type.
    """
    jobs = []
    for j, count in enumerate(x):
        if count < 0:
            raise InputError("negative job count")
        triple = (inst.releases[machine_type][j],
                  inst.deadlines[machine_type][j],
                  inst.lengths[machine_type][j])
        jobs.extend([triple] * int(count))
    horizon = max([d for _r, d, _p in jobs], default=0)
    return nonpreemptive_brute(jobs, horizon, job_cap=job_cap,
                               horizon_cap=horizon_cap)
