"""Exact solvers for integer-cone intersection, bin packing, and cutting stock.

``int_cone_intersect`` decides whether some non-negative integer combination
of a polytope's lattice points lands in a target polytope, in two modes:

* ``faithful``: guess a small set of cover parallelepipeds (their vertices
  may carry arbitrary weights) plus a handful of free lattice points, and
  solve one small integer program per guess, cheapest guesses first.  A
  hit is returned immediately; otherwise the joint program settles the
  answer.
* ``joint``: one integer program with a weight variable per cover vertex
  and a 0/1 variable per remaining lattice point.  Decisive in both
  directions because every solvable target admits a witness of exactly
  this shape.

``bin_packing`` lifts patterns by a unit coordinate that counts bins and
binary-searches the bin count; ``cutting_stock`` and the machine-assignment
problems reduce to ``multi_polytope_select``, which couples several
candidate polytopes with selector and cost coordinates into one lifted
intersection problem.  Every returned solution is re-verified exactly
before it is surfaced.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations as _combinations
from typing import Optional, Sequence

from .errors import InfeasibleError, InputError, InternalError
from .exactmath import ExactLp
from .geometry import (
    Polytope,
    coordinate_bounds,
    lattice_points,
    DEFAULT_LATTICE_BUDGET,
)
from .ilp import IlpProblem, ilp_feasible, DEFAULT_NODE_BUDGET
from .rational import Rat, ZERO, rat_ceil, rat_floor, as_int, dot
from .structure import (
    Combination,
    StructureSet,
    combo_sum,
    compute_structure_set,
    normalize_combination,
)

DEFAULT_GUESS_BUDGET = 64


# ---------------------------------------------------------------------------
# instances and solutions


class BinPackingInstance:
    """Item sizes in (0, 1] with integer multiplicities."""

    def __init__(self, sizes: Sequence, multiplicities: Sequence[int]):
        self.sizes = tuple(Rat(s) for s in sizes)
        self.multiplicities = tuple(int(a) for a in multiplicities)
        if len(self.sizes) != len(self.multiplicities):
            raise InputError("sizes and multiplicities must align")
        if not self.sizes:
            raise InputError("at least one item type required")
        for s in self.sizes:
            if s <= 0:
                raise InputError(f"item size {s} must be positive")
            if s > 1:
                raise InputError(f"item size {s} exceeds the bin capacity 1")
        if any(a < 0 for a in self.multiplicities):
            raise InputError("multiplicities must be non-negative")
        self.dim = len(self.sizes)

    @property
    def delta(self) -> int:
        """Largest number in the instance: denominators and multiplicities."""
        return max([int(s.denominator) for s in self.sizes]
                   + [int(s.numerator) for s in self.sizes]
                   + list(self.multiplicities) + [1])

    def __repr__(self):
        return f"BinPackingInstance(sizes={self.sizes}, a={self.multiplicities})"


class CuttingStockInstance:
    """Bin packing with several bin types of given capacity and cost."""

    def __init__(self, sizes: Sequence, multiplicities: Sequence[int],
                 bin_types: Sequence):
        self.sizes = tuple(Rat(s) for s in sizes)
        self.multiplicities = tuple(int(a) for a in multiplicities)
        if len(self.sizes) != len(self.multiplicities):
            raise InputError("sizes and multiplicities must align")
        for s in self.sizes:
            if s <= 0:
                raise InputError(f"item size {s} must be positive")
        self.bin_types = tuple((Rat(w), int(c)) for w, c in bin_types)
        if not self.bin_types:
            raise InputError("at least one bin type required")
        for w, c in self.bin_types:
            if w <= 0:
                raise InputError(f"bin capacity {w} must be positive")
            if c < 1:
                raise InputError(f"bin cost {c} must be a positive integer")
        self.dim = len(self.sizes)


@dataclass(frozen=True)
class PackingSolution:
    """Patterns with bin types and multiplicities, plus the exact objective.

    ``guess_record`` documents how the witness was found: a tuple of the
    special-point subset size and the number of free points for the
    faithful mode, or None for the joint mode.
    """

    patterns: tuple            # ((pattern, bin_type_index, multiplicity), ...)
    objective: int
    guess_record: Optional[tuple] = None


@dataclass(frozen=True)
class IntConeResult:
    found: bool
    target: Optional[tuple]            # the reached point y
    combination: Optional[Combination]
    mode_used: str = ""
    guesses_tried: int = 0
    guess: Optional[tuple] = None      # (special points used, free points)


@dataclass(frozen=True)
class SelectResult:
    found: bool
    target: Optional[tuple]
    part_combinations: tuple = ()      # one Combination per part
    total_cost: Optional[int] = None


# ---------------------------------------------------------------------------
# shared ILP plumbing


def _eq_rows(row, value):
    """An exact equality as two inequality rows."""
    return [(tuple(row), value), (tuple(-v for v in row), -value)]


def _target_box(target: Polytope, y_bounds):
    """Integer bounds for each target coordinate, honoring overrides."""
    bounds = coordinate_bounds(target)
    if bounds is None:
        return None
    out = []
    for j, (lo, hi) in enumerate(bounds):
        olo = ohi = None
        if y_bounds is not None and y_bounds[j] is not None:
            olo, ohi = y_bounds[j]
        lo = lo if lo is not None else olo
        hi = hi if hi is not None else ohi
        if lo is None or hi is None:
            raise InputError(
                f"target unbounded in coordinate {j}; supply y_bounds")
        out.append((rat_ceil(lo), rat_floor(hi)))
    return out


def _combination_rows(generators, target, box, extra_free=0,
                      source=None):
    """Rows of 'sum of weighted generators (+ free points) lies in target'.

    Variables: one weight per generator, then ``extra_free`` blocks of
    ``d`` coordinates each (free lattice points of ``source``).  Equality
    targets are expressed through the target rows themselves plus the box.
    """
    d = target.dim
    n = len(generators)
    nf = extra_free * d
    rows, rhs = [], []

    def sum_coeffs(q):
        # coefficients of q . (sum lambda_g g + sum w_t) over all variables
        coeff = [sum(qi * g[i] for i, qi in enumerate(q)) for g in generators]
        for _ in range(extra_free):
            coeff.extend(q)
        return coeff

    for q, qb in zip(target.A, target.b):
        rows.append(sum_coeffs(q))
        rhs.append(qb)
    for j, (lo, hi) in enumerate(box):
        unit = [0] * d
        unit[j] = 1
        coeff = sum_coeffs(unit)
        rows.append(coeff)
        rhs.append(hi)
        rows.append([-v for v in coeff])
        rhs.append(-lo)
    if extra_free:
        if source is None:
            raise InternalError("free points need their source polytope")
        for t in range(extra_free):
            off = n + t * d
            for a_row, b in zip(source.A, source.b):
                row = [0] * (n + nf)
                for i, v in enumerate(a_row):
                    row[off + i] = v
                rows.append(row)
                rhs.append(b)
    return rows, rhs


def _run_combination_ilp(generators, target, box, gen_hi=None,
                         extra_free=0, source=None, free_box=None,
                         max_total_weight=None,
                         node_budget=DEFAULT_NODE_BUDGET):
    """Solve for generator weights (and free points); None when infeasible."""
    n = len(generators)
    d = target.dim
    rows, rhs = _combination_rows(generators, target, box,
                                  extra_free=extra_free, source=source)
    lo = [0] * n
    hi = list(gen_hi) if gen_hi is not None else [None] * n
    for _ in range(extra_free):
        for a, b in free_box:
            lo.append(a)
            hi.append(b)
    if max_total_weight is not None:
        rows.append([1] * n + [0] * (extra_free * d))
        rhs.append(max_total_weight)
    problem = IlpProblem.build(rows, rhs, lo=lo, hi=hi)
    try:
        res = ilp_feasible(problem, node_budget=node_budget)
    except InputError as exc:
        raise InputError(
            f"cannot bound the combination program ({exc}); "
            "pass max_total_weight") from exc
    if not res.feasible:
        return None
    x = res.witness
    weights = {}
    for g, w in zip(generators, x[:n]):
        if w:
            weights[g] = weights.get(g, 0) + w
    for t in range(extra_free):
        pt = tuple(x[n + t * d:n + (t + 1) * d])
        weights[pt] = weights.get(pt, 0) + 1
    return weights


def _relaxation_feasible(generators, target, box, extra_free=0, source=None):
    """Rational feasibility of the combination program (fast prefilter)."""
    rows, rhs = _combination_rows(generators, target, box,
                                  extra_free=extra_free, source=source)
    n = len(generators)
    nf = extra_free * (target.dim if extra_free else 0)
    lp = ExactLp(rows, rhs, lo=[ZERO] * n + [None] * nf,
                 hi=[None] * (n + nf))
    return lp.find_feasible()


# ---------------------------------------------------------------------------
# the intersection solver


def int_cone_intersect(source: Polytope, target: Polytope,
                       mode: str = "faithful",
                       y_bounds: Optional[Sequence] = None,
                       max_total_weight: Optional[int] = None,
                       structure: Optional[StructureSet] = None,
                       guess_budget: int = DEFAULT_GUESS_BUDGET,
                       lattice_budget: int = DEFAULT_LATTICE_BUDGET,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> IntConeResult:
    """Find a point of the target reachable as an integer combination.

    Searches for ``y = sum_x lambda_x x`` with non-negative integer weights
    over the source's lattice points and ``y`` inside the target, returning
    the witness combination (normalized: support at most ``2^{2d+1}``) or a
    decisive Empty.  ``y_bounds`` supplies (lo, hi) pairs for target
    coordinates the target rows leave unbounded; ``max_total_weight`` is
    required when generators of mixed sign defeat bound derivation.
    """
    if source.dim != target.dim:
        raise InputError("source and target dimensions differ")
    if mode not in ("faithful", "joint"):
        raise InputError(f"unknown mode {mode!r}")
    if target.contains_int((0,) * target.dim):
        return IntConeResult(True, (0,) * target.dim,
                             Combination(dim=source.dim), mode, 0)
    box = _target_box(target, y_bounds)
    if box is None or any(a > b for a, b in box):
        return IntConeResult(False, None, None, mode, 0)
    lattice = lattice_points(source, budget=lattice_budget)
    generators = [p for p in lattice if any(v != 0 for v in p)]
    if not generators:
        return IntConeResult(False, None, None, mode, 0)
    if not _relaxation_feasible(generators, target, box):
        return IntConeResult(False, None, None, mode, 0)
    sset = structure if structure is not None \
        else compute_structure_set(source, budget=lattice_budget)
    lattice_set = set(lattice)

    def finish(weights, mode_used, guesses, guess=None):
        combo = Combination(weights, dim=source.dim)
        y = combo_sum(combo)
        for p in combo.weights:
            if p not in lattice_set:
                raise InternalError(f"witness point {p} is not a generator")
        if not target.contains_int(y):
            raise InternalError("witness sum escapes the target")
        normal = normalize_combination(combo, sset)
        if combo_sum(normal) != y:
            raise InternalError("normalization changed the reached point")
        if len(normal.weights) > 2 ** (2 * source.dim + 1):
            raise InternalError("normalized support exceeds its bound")
        return IntConeResult(True, y, normal, mode_used, guesses, guess)

    guesses = 0
    if mode == "faithful":
        status, guesses, weights, guess = _faithful_search(
            sset, generators, target, box, guess_budget, node_budget)
        if status == "found":
            return finish(weights, "faithful", guesses, guess)
        # Exhausted or out of budget: either way the joint program below
        # settles the answer.  Guessed subsets span only the vertices of a
        # few parallelepipeds, and a reachable target may normalize onto
        # vertices outside every such span, so exhaustion alone cannot
        # certify Empty.

    weights = _joint_program(sset, generators, target, box,
                             max_total_weight, node_budget)
    if weights is None:
        return IntConeResult(False, None, None, "joint", guesses)
    return finish(weights, "joint", guesses)


def _faithful_search(sset, generators, target, box, guess_budget, node_budget):
    """Guess-driven search.

    Returns (status, guesses, weights, guess) where status is "found",
    "exhausted" or "budget"; weights and guess are set only on a hit.
    """
    d = sset.polytope.dim
    cover = sset.cover
    pp_cap = min(1 << d, len(cover))
    k_cap = 1 << (2 * d)
    genset = set(generators)
    source = sset.polytope
    src_bounds = coordinate_bounds(source)
    free_box = [(rat_ceil(lo), rat_floor(hi)) for lo, hi in src_bounds]
    guesses = 0
    for total in range(1, pp_cap + k_cap + 1):
        for size in range(0, min(total, pp_cap) + 1):
            k = total - size
            if k > k_cap:
                continue
            for subset in _combinations(range(len(cover)), size):
                guesses += 1
                if guesses > guess_budget:
                    return ("budget", guesses - 1, None, None)
                special = sorted({v for i in subset
                                  for v in cover[i].vertices()
                                  if v in genset})
                if not special and k == 0:
                    continue
                if not _relaxation_feasible(special, target, box,
                                            extra_free=k, source=source):
                    continue
                weights = _run_combination_ilp(
                    special, target, box, extra_free=k, source=source,
                    free_box=free_box, node_budget=node_budget)
                if weights is not None:
                    return ("found", guesses, weights, (len(special), k))
    return ("exhausted", guesses, None, None)


def _joint_program(sset, generators, target, box, max_total_weight,
                   node_budget):
    """One decisive program over all generators.

    Cover vertices get unbounded integer weights; every other lattice point
    gets a 0/1 variable, which is enough because any reachable target has a
    normalized witness of that shape.
    """
    special = sset.special_set
    gens = sorted(generators)
    hi = [None if g in special else 1 for g in gens]
    return _run_combination_ilp(gens, target, box, gen_hi=hi,
                                max_total_weight=max_total_weight,
                                node_budget=node_budget)


# ---------------------------------------------------------------------------
# bin packing


def _lifted_pattern_polytope(inst: BinPackingInstance) -> Polytope:
    """Patterns with a unit counter coordinate: {(x, 1) : x >= 0, s.x <= 1}.

    The box x <= a is added: patterns exceeding the demand can never appear
    in an exact decomposition of a.
    """
    d = inst.dim
    rows, rhs = [], []
    scale = 1
    for s in inst.sizes:
        scale = scale * int(s.denominator) // _gcd(scale, int(s.denominator))
    size_row = [as_int(s * scale) for s in inst.sizes] + [0]
    rows.append(size_row)
    rhs.append(scale)
    for j in range(d):
        unit = [0] * (d + 1)
        unit[j] = -1
        rows.append(unit)
        rhs.append(0)
        cap = [0] * (d + 1)
        cap[j] = 1
        rows.append(cap)
        rhs.append(inst.multiplicities[j])
    last = [0] * (d + 1)
    last[d] = 1
    rows.append(last)
    rhs.append(1)
    rows.append([-v for v in last])
    rhs.append(-1)
    return Polytope(rows, rhs)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _count_window_target(a: Sequence[int], count_hi: int) -> Polytope:
    """{a} x [0, count_hi] in d+1 dimensions."""
    d = len(a)
    rows, rhs = [], []
    for j in range(d):
        unit = [0] * (d + 1)
        unit[j] = 1
        rows.append(unit)
        rhs.append(a[j])
        rows.append([-v for v in unit])
        rhs.append(-a[j])
    last = [0] * (d + 1)
    last[d] = 1
    rows.append(last)
    rhs.append(count_hi)
    rows.append([-v for v in last])
    rhs.append(0)
    return Polytope(rows, rhs)


def bin_packing(inst: BinPackingInstance, mode: str = "faithful",
                guess_budget: int = DEFAULT_GUESS_BUDGET,
                node_budget: int = DEFAULT_NODE_BUDGET) -> PackingSolution:
    """Minimum number of unit bins packing all items, exactly.

    Binary search on the bin count b: b bins suffice iff the lifted pattern
    polytope reaches {a} x [0, b].  The lower end is the fractional volume
    bound ceil(s . a); the upper end is one bin per item.
    """
    a = inst.multiplicities
    if all(v == 0 for v in a):
        return PackingSolution((), 0, None)
    source = _lifted_pattern_polytope(inst)
    sset = compute_structure_set(source)
    lo = rat_ceil(dot(inst.sizes, [Rat(v) for v in a]))
    hi = sum(a)
    best = None

    def probe(b):
        return int_cone_intersect(source, _count_window_target(a, b),
                                  mode=mode, structure=sset,
                                  guess_budget=guess_budget,
                                  node_budget=node_budget)

    res = probe(hi)
    if not res.found:
        raise InternalError("one bin per item must always pack")
    best = res
    hi = res.combination.total_weight
    while lo < hi:
        mid = (lo + hi) // 2
        res = probe(mid)
        if res.found:
            best = res
            hi = min(mid, res.combination.total_weight)
        else:
            lo = mid + 1
    solution = _packing_solution_from(best.combination, bin_type=0,
                                      record=best.guess)
    _verify_bin_packing(inst, solution)
    if solution.objective != hi:
        raise InternalError("objective drifted from the binary search bound")
    return solution


def _packing_solution_from(combo: Combination, bin_type: int,
                           record) -> PackingSolution:
    patterns = []
    for point, w in sorted(combo.weights.items()):
        patterns.append((point[:-1], bin_type, w))
    objective = combo.total_weight
    return PackingSolution(tuple(patterns), objective, record)


def _verify_bin_packing(inst: BinPackingInstance, sol: PackingSolution):
    d = inst.dim
    total = [0] * d
    count = 0
    for pattern, _bt, mult in sol.patterns:
        if mult < 1:
            raise InternalError("non-positive multiplicity in solution")
        load = dot(inst.sizes, [Rat(v) for v in pattern])
        if load > 1:
            raise InternalError(f"pattern {pattern} overfills a bin")
        if any(v < 0 for v in pattern):
            raise InternalError(f"negative pattern {pattern}")
        for j in range(d):
            total[j] += mult * pattern[j]
        count += mult
    if tuple(total) != inst.multiplicities:
        raise InternalError("solution does not meet the demand exactly")
    if count != sol.objective:
        raise InternalError("objective does not count the bins")


# ---------------------------------------------------------------------------
# multi-polytope selection


def multi_polytope_select(parts: Sequence, target: Polytope, budget: int,
                          mode: str = "faithful",
                          guess_budget: int = DEFAULT_GUESS_BUDGET,
                          node_budget: int = DEFAULT_NODE_BUDGET,
                          lattice_budget: int = DEFAULT_LATTICE_BUDGET) -> SelectResult:
    """Reach the target with copies drawn from several candidate polytopes.

    ``parts`` is a list of (Polytope over the target's dimension, positive
    integer cost); a copy of a lattice point of part i costs ``c_i`` and the
    total cost must stay within ``budget``.  Implemented by coupling the
    parts into one lifted polytope with a cost coordinate and one selector
    coordinate per part, then intersecting its integer cone with
    ``target x [0, budget] x (free selectors)``.
    """
    n = len(parts)
    if n == 0:
        raise InputError("at least one part required")
    d = target.dim
    costs = []
    polys = []
    for poly, cost in parts:
        if poly.dim != d:
            raise InputError("every part must match the target dimension")
        if not isinstance(cost, int) or cost < 1:
            raise InputError(f"part cost {cost!r} must be a positive integer")
        polys.append(poly)
        costs.append(cost)
    if budget < 0:
        return SelectResult(False, None)

    part_bounds = []
    for poly in polys:
        bounds = coordinate_bounds(poly)
        if bounds is None:
            part_bounds.append(None)
            continue
        if any(lo is None or hi is None for lo, hi in bounds):
            raise InputError("every part must be bounded")
        part_bounds.append([(rat_ceil(lo), rat_floor(hi)) for lo, hi in bounds])
    if all(b is None for b in part_bounds):
        return SelectResult(False, None)
    glo = [min(b[j][0] for b in part_bounds if b is not None) for j in range(d)]
    ghi = [max(b[j][1] for b in part_bounds if b is not None) for j in range(d)]

    D = d + 1 + n  # x coords, cost coord, selector coords
    rows, rhs = [], []

    def pad(row_x=None, cost=0, sel=None):
        row = list(row_x) if row_x is not None else [0] * d
        row.append(cost)
        row.extend(sel if sel is not None else [0] * n)
        return row

    cmax = max(costs)
    for i, poly in enumerate(polys):
        for a_row, b in zip(poly.A, poly.b):
            # a.x <= b + M(1 - z_i), with M the worst violation on the box
            worst = sum(v * (ghi[j] if v > 0 else glo[j])
                        for j, v in enumerate(a_row))
            M = max(0, worst - b)
            sel = [0] * n
            sel[i] = M
            rows.append(pad(a_row, 0, sel))
            rhs.append(b + M)
        # cost coordinate pinned to c_i when z_i = 1:
        # sign=+1 relaxes to the global cap, sign=-1 to the global floor
        for sign in (1, -1):
            bound = cmax if sign > 0 else 0
            gap = (bound - costs[i]) if sign > 0 else (costs[i] - bound)
            sel = [0] * n
            sel[i] = gap
            row = pad(None, sign, sel)
            rows.append(row)
            rhs.append(sign * costs[i] + gap)
    # exactly one selector on, each in [0,1]
    rows.append(pad(None, 0, [1] * n))
    rhs.append(1)
    rows.append(pad(None, 0, [-1] * n))
    rhs.append(-1)
    for i in range(n):
        sel = [0] * n
        sel[i] = 1
        rows.append(pad(None, 0, sel))
        rhs.append(1)
        rows.append(pad(None, 0, [-v for v in sel]))
        rhs.append(0)
    # global box keeps the lift bounded
    for j in range(d):
        unit = [0] * d
        unit[j] = 1
        rows.append(pad(unit, 0, None))
        rhs.append(ghi[j])
        rows.append(pad([-v for v in unit], 0, None))
        rhs.append(-glo[j])
    rows.append(pad(None, 1, None))
    rhs.append(cmax)
    rows.append(pad(None, -1, None))
    rhs.append(0)
    lifted = Polytope(rows, rhs)

    t_rows, t_rhs = [], []
    for q, qb in zip(target.A, target.b):
        t_rows.append(pad(q, 0, None))
        t_rhs.append(qb)
    t_rows.append(pad(None, 1, None))
    t_rhs.append(budget)
    t_rows.append(pad(None, -1, None))
    t_rhs.append(0)
    lifted_target = Polytope(t_rows, t_rhs)

    y_bounds = [None] * d + [None] + [(0, budget)] * n
    res = int_cone_intersect(lifted, lifted_target, mode=mode,
                             y_bounds=y_bounds,
                             guess_budget=guess_budget,
                             node_budget=node_budget,
                             lattice_budget=lattice_budget)
    if not res.found:
        return SelectResult(False, None)
    per_part = [dict() for _ in range(n)]
    total_cost = 0
    reached = [0] * d
    for point, w in res.combination.weights.items():
        x, gamma = point[:d], point[d]
        sel = point[d + 1:]
        if sum(sel) != 1 or any(v not in (0, 1) for v in sel):
            raise InternalError(f"lifted point {point} has a broken selector")
        i = sel.index(1)
        if gamma != costs[i]:
            raise InternalError(f"lifted point {point} mislabels its cost")
        if not polys[i].contains_int(x):
            raise InternalError(f"pattern {x} escapes part {i}")
        per_part[i][x] = per_part[i].get(x, 0) + w
        total_cost += costs[i] * w
        for j in range(d):
            reached[j] += w * x[j]
    if total_cost > budget:
        raise InternalError("selection exceeds the cost budget")
    if not target.contains_int(tuple(reached)):
        raise InternalError("selection misses the target")
    return SelectResult(True, tuple(reached),
                        tuple(Combination(p, dim=d) for p in per_part),
                        total_cost)


def select_from_generators(groups: Sequence, costs: Sequence[int],
                           target: Polytope, budget: int,
                           y_bounds: Optional[Sequence] = None,
                           node_budget: int = DEFAULT_NODE_BUDGET) -> SelectResult:
    """Selection over explicitly listed generator points per part.

    The integer-projection variant of ``multi_polytope_select``: each group
    is a finite list of integer points in the target's dimension (already
    projected from whatever auxiliary space defined them), a copy from
    group i costs ``c_i``, and the weighted sum must land in the target
    with total cost at most ``budget``.  One joint integer program decides.
    """
    if len(groups) != len(costs):
        raise InputError("groups and costs must align")
    d = target.dim
    box = _target_box(target, y_bounds)
    if box is None or any(a > b for a, b in box):
        return SelectResult(False, None)
    if budget < 0:
        return SelectResult(False, None)
    tagged = []
    for i, group in enumerate(groups):
        if not isinstance(costs[i], int) or costs[i] < 0:
            raise InputError(f"cost {costs[i]!r} must be a non-negative integer")
        for g in group:
            pt = tuple(int(v) for v in g)
            if len(pt) != d:
                raise InputError("generator dimension mismatch")
            if all(v == 0 for v in pt):
                continue  # contributes nothing; dropping keeps answers
            tagged.append((i, pt))
    rows, rhs = [], []
    n = len(tagged)
    for q, qb in zip(target.A, target.b):
        rows.append([sum(qi * g[j] for j, qi in enumerate(q))
                     for _i, g in tagged])
        rhs.append(qb)
    for j, (lo, hi) in enumerate(box):
        coeff = [g[j] for _i, g in tagged]
        rows.append(coeff)
        rhs.append(hi)
        rows.append([-v for v in coeff])
        rhs.append(-lo)
    rows.append([costs[i] for i, _g in tagged])
    rhs.append(budget)
    if n == 0:
        feasible = all(b >= 0 for b in rhs) and \
            all(lo <= 0 <= hi for lo, hi in box)
        if feasible and target.contains_int((0,) * d):
            return SelectResult(True, (0,) * d,
                                tuple(Combination(dim=d) for _ in groups), 0)
        return SelectResult(False, None)
    problem = IlpProblem.build(rows, rhs, lo=[0] * n)
    try:
        res = ilp_feasible(problem, node_budget=node_budget)
    except InputError as exc:
        raise InputError(f"selection program is unbounded ({exc}); "
                         "tighten the target or bounds") from exc
    if not res.feasible:
        return SelectResult(False, None)
    per_part = [dict() for _ in groups]
    total_cost = 0
    reached = [0] * d
    for (i, g), w in zip(tagged, res.witness):
        if w:
            per_part[i][g] = per_part[i].get(g, 0) + w
            total_cost += costs[i] * w
            for j in range(d):
                reached[j] += w * g[j]
    if total_cost > budget or not target.contains_int(tuple(reached)):
        raise InternalError("selection verification failed")
    return SelectResult(True, tuple(reached),
                        tuple(Combination(p, dim=d) for p in per_part),
                        total_cost)


# ---------------------------------------------------------------------------
# cutting stock


def cutting_stock(inst: CuttingStockInstance, mode: str = "faithful",
                  guess_budget: int = DEFAULT_GUESS_BUDGET,
                  node_budget: int = DEFAULT_NODE_BUDGET) -> PackingSolution:
    """Cheapest multiset of bins (by type) packing all items exactly."""
    d = inst.dim
    a = inst.multiplicities
    if all(v == 0 for v in a):
        return PackingSolution((), 0, None)
    # cost of the cheapest bin type that fits one copy of each item alone
    singles = []
    for j, s in enumerate(inst.sizes):
        fitting = [c for w, c in inst.bin_types if s <= w]
        if not fitting:
            raise InfeasibleError(
                f"item type {j} (size {s}) fits no bin type")
        singles.append(min(fitting))
    hi = sum(aj * cj for aj, cj in zip(a, singles))

    parts = []
    for w, c in inst.bin_types:
        rows, rhs = [], []
        den = int(w.denominator)
        scale = 1
        for s in inst.sizes:
            sden = int((s).denominator)
            scale = scale * sden // _gcd(scale, sden)
        scale = scale * den // _gcd(scale, den)
        rows.append([as_int(s * scale) for s in inst.sizes])
        rhs.append(as_int(w * scale))
        for j in range(d):
            unit = [0] * d
            unit[j] = -1
            rows.append(unit)
            rhs.append(0)
            cap = [0] * d
            cap[j] = 1
            rows.append(cap)
            rhs.append(a[j])
        parts.append((Polytope(rows, rhs), c))

    t_rows, t_rhs = [], []
    for j in range(d):
        unit = [0] * d
        unit[j] = 1
        t_rows.append(unit)
        t_rhs.append(a[j])
        t_rows.append([-v for v in unit])
        t_rhs.append(-a[j])
    target = Polytope(t_rows, t_rhs)

    def probe(delta):
        return multi_polytope_select(parts, target, delta, mode=mode,
                                     guess_budget=guess_budget,
                                     node_budget=node_budget)

    best = probe(hi)
    if not best.found:
        raise InternalError("single-item bins must pack everything")
    hi = best.total_cost
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        res = probe(mid)
        if res.found:
            best = res
            hi = min(mid, res.total_cost)
        else:
            lo = mid + 1
    patterns = []
    for i, combo in enumerate(best.part_combinations):
        for point, w in sorted(combo.weights.items()):
            patterns.append((point, i, w))
    solution = PackingSolution(tuple(patterns), best.total_cost, None)
    _verify_cutting_stock(inst, solution)
    if solution.objective != hi:
        raise InternalError("objective drifted from the binary search bound")
    return solution


def verify_solution(inst, sol: PackingSolution) -> None:
    """Exact validity check of a packing solution; InternalError on failure."""
    if isinstance(inst, BinPackingInstance):
        _verify_bin_packing(inst, sol)
    elif isinstance(inst, CuttingStockInstance):
        _verify_cutting_stock(inst, sol)
    else:
        raise InputError(f"cannot verify solutions for {type(inst).__name__}")


def _verify_cutting_stock(inst: CuttingStockInstance, sol: PackingSolution):
    d = inst.dim
    total = [0] * d
    cost = 0
    for pattern, bt, mult in sol.patterns:
        if mult < 1:
            raise InternalError("non-positive multiplicity in solution")
        w, c = inst.bin_types[bt]
        load = dot(inst.sizes, [Rat(v) for v in pattern])
        if load > w:
            raise InternalError(f"pattern {pattern} overfills bin type {bt}")
        if any(v < 0 for v in pattern):
            raise InternalError(f"negative pattern {pattern}")
        for j in range(d):
            total[j] += mult * pattern[j]
        cost += c * mult
    if tuple(total) != inst.multiplicities:
        raise InternalError("solution does not meet the demand exactly")
    if cost != sol.objective:
        raise InternalError("objective does not add up")
