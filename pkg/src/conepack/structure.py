"""Support reduction and weight redistribution for integer combinations.

A ``Combination`` is a finitely supported map from integer points to
positive integer weights, standing for the sum ``sum_x weight[x] * x``.
Three procedures keep that sum and the total weight invariant while
simplifying the support:

* ``reduce_support``: parity-pairing descent to at most ``2^d`` points,
  all inside the convex hull of the original support.
* ``redistribute_in_pp``: moves weight from one point of an integral
  parallelepiped onto its vertices, leaving at most ``2^d`` non-vertex
  points of weight 1.
* ``normalize_combination``: combines both against a precomputed
  ``StructureSet`` so that off the special-point set X all weights are
  0/1 and the support is small both inside and outside X.

All arithmetic is exact; each rewriting step asserts its progress measure
(squared-norm potential or off-X mass), which is what guarantees
termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Union

from .errors import InputError, InternalError
from .geometry import (
    Parallelepiped,
    Polytope,
    lattice_points,
    parallelepiped_cover,
    DEFAULT_LATTICE_BUDGET,
)
from .rational import as_int, is_integral


class Combination:
    """Sparse non-negative integer weights on integer points.

    Zero weights are dropped on construction; negative weights are
    rejected.  ``dim`` is inferred from the points (an empty combination
    may carry an explicit ``dim`` or leave it None).
    """

    __slots__ = ("weights", "dim")

    def __init__(self,
                 weights: Union[Mapping, Iterable, None] = None,
                 dim: Optional[int] = None):
        items = []
        if weights is None:
            pass
        elif isinstance(weights, Mapping):
            items = list(weights.items())
        else:
            items = list(weights)
        store: Dict[tuple, int] = {}
        for point, w in items:
            pt = tuple(point)
            if not all(isinstance(v, int) or (hasattr(v, "denominator") and v.denominator == 1)
                       for v in pt):
                raise InputError(f"non-integer point {pt}")
            pt = tuple(int(v) for v in pt)
            if not (isinstance(w, int)
                    or (hasattr(w, "denominator") and w.denominator == 1)):
                raise InputError(f"non-integer weight {w!r} at {pt}")
            w = int(w)
            if w < 0:
                raise InputError(f"negative weight {w} at {pt}")
            if dim is None:
                dim = len(pt)
            elif len(pt) != dim:
                raise InputError(f"point {pt} has dim {len(pt)}, expected {dim}")
            if w > 0:
                store[pt] = store.get(pt, 0) + w
        self.weights = store
        self.dim = dim

    @property
    def support(self) -> list:
        return sorted(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())

    def __eq__(self, other):
        return isinstance(other, Combination) and self.weights == other.weights

    def __len__(self):
        return len(self.weights)

    def __repr__(self):
        inner = ", ".join(f"{p}:{w}" for p, w in sorted(self.weights.items()))
        return f"Combination({{{inner}}})"

    def to_json(self) -> list:
        return [{"point": list(p), "weight": w}
                for p, w in sorted(self.weights.items())]

    @classmethod
    def from_json(cls, data) -> "Combination":
        if not isinstance(data, list):
            raise InputError("combination JSON must be a list")
        items = []
        for entry in data:
            if not isinstance(entry, dict) or "point" not in entry or "weight" not in entry:
                raise InputError(f"bad combination entry {entry!r}")
            items.append((tuple(entry["point"]), entry["weight"]))
        return cls(items)


def combo_sum(combo: Combination) -> tuple:
    """Exact ``sum_x weight[x] * x``; the empty combination sums to zeros."""
    if combo.dim is None:
        return ()
    acc = [0] * combo.dim
    for p, w in combo.weights.items():
        for i, v in enumerate(p):
            acc[i] += w * v
    return tuple(acc)


def _potential(weights: Mapping[tuple, int]) -> int:
    # strictly midpoint-convex and exact: squared euclidean norm
    return sum(w * sum(v * v for v in p) for p, w in weights.items())


def _first_parity_pair(points: Sequence[tuple]):
    for i in range(len(points)):
        pi = tuple(v & 1 for v in points[i])
        for j in range(i + 1, len(points)):
            if pi == tuple(v & 1 for v in points[j]):
                return points[i], points[j]
    return None


def reduce_support(combo: Combination) -> Combination:
    """Shrink the support to at most ``2^d`` points.

    While more than ``2^d`` points carry weight, two of them agree
    coordinate-wise mod 2; both shed ``t = min(weight)`` units onto their
    integral midpoint.  The squared-norm potential drops by
    ``t * |x - y|^2 / 2 >= 2t`` per step, so the loop terminates; sum and
    total weight are preserved exactly, and new points are midpoints, hence
    stay in the convex hull of the original support.
    """
    if combo.dim is None:
        return Combination(dim=None)
    bound = 1 << combo.dim
    if len(combo.weights) <= bound:
        return Combination(combo.weights, dim=combo.dim)
    weights = dict(combo.weights)
    while len(weights) > bound:
        pair = _first_parity_pair(sorted(weights))
        if pair is None:
            raise InternalError("pigeonhole failed: no same-parity pair")
        x, y = pair
        z = tuple((a + b) // 2 for a, b in zip(x, y))
        t = min(weights[x], weights[y])
        drop = t * sum((a - b) ** 2 for a, b in zip(x, y)) // 2
        if drop <= 0:
            raise InternalError("pairing step failed to decrease the potential")
        for p in (x, y):
            weights[p] -= t
            if weights[p] == 0:
                del weights[p]
        weights[z] = weights.get(z, 0) + 2 * t
    return Combination(weights, dim=combo.dim)


def _settle_in_pp(pp: Parallelepiped, weights: Dict[tuple, int],
                  frozen) -> bool:
    """Rewrite weights of movable points inside ``pp`` toward its vertices.

    ``frozen`` is a membership predicate (set) of points that never move;
    it must contain every vertex of ``pp``.  On return, every movable point
    inside ``pp`` has weight at most 1 and there are at most ``2^d`` of
    them.  Mutates ``weights`` in place; returns whether any step ran.
    """
    d = pp.dim
    bound = 1 << d
    coords_cache: dict = {}

    def coords(p):
        if p not in coords_cache:
            coords_cache[p] = pp.coordinates(p)
        return coords_cache[p]

    stepped = False
    while True:
        movable = sorted(p for p, w in weights.items()
                         if w > 0 and p not in frozen and coords(p) is not None)
        target = next((p for p in movable if weights[p] >= 2), None)
        if target is not None:
            alpha = coords(target)
            y = list(pp.center)
            for a, dvec in zip(alpha, pp.directions):
                sign = 1 if a >= 0 else -1
                for i, v in enumerate(dvec):
                    y[i] += sign * v
            if not all(is_integral(v) for v in y):
                raise InternalError("parallelepiped vertex is not integral")
            yv = tuple(as_int(v) for v in y)
            z = tuple(2 * a - b for a, b in zip(target, yv))
            if coords(z) is None:
                raise InternalError(f"mirror point {z} left the parallelepiped")
            t = weights[target] // 2
            mass_before = sum(w for p, w in weights.items() if p not in frozen)
            weights[target] -= 2 * t
            if weights[target] == 0:
                del weights[target]
            weights[yv] = weights.get(yv, 0) + t
            weights[z] = weights.get(z, 0) + t
            mass_after = sum(w for p, w in weights.items() if p not in frozen)
            if mass_after >= mass_before:
                raise InternalError("mirror step failed to shed movable mass")
            stepped = True
            continue
        if len(movable) > bound:
            pair = _first_parity_pair(movable)
            if pair is None:
                raise InternalError("pigeonhole failed inside a parallelepiped")
            x, yv = pair
            z = tuple((a + b) // 2 for a, b in zip(x, yv))
            if coords(z) is None:
                raise InternalError(f"midpoint {z} left the parallelepiped")
            for p in (x, yv):
                weights[p] -= 1
                if weights[p] == 0:
                    del weights[p]
            weights[z] = weights.get(z, 0) + 2
            stepped = True
            continue
        return stepped


def redistribute_in_pp(pp: Parallelepiped, x_star: Sequence[int],
                       w: int) -> Combination:
    """Spread ``w`` copies of a parallelepiped point onto its vertices.

    Returns a combination with the same sum ``w * x_star`` and total weight
    ``w`` whose non-vertex support points all carry weight 1 and number at
    most ``2^d``.  A vertex input comes back unchanged.
    """
    if not isinstance(w, int) or w <= 0:
        raise InputError(f"weight must be a positive integer, got {w!r}")
    x = tuple(int(v) for v in x_star)
    if pp.coordinates(x) is None:
        raise InputError(f"{x} is not inside the parallelepiped")
    weights = {x: w}
    _settle_in_pp(pp, weights, frozenset(pp.vertices()))
    out = Combination(weights, dim=pp.dim)
    if combo_sum(out) != tuple(w * v for v in x) or out.total_weight != w:
        raise InternalError("redistribution broke the sum or the weight")
    return out


@dataclass(eq=False)
class StructureSet:
    """Cover of a polytope's lattice together with its special points.

    ``special_points`` (X) are exactly the parallelepiped vertices of the
    cover; ``locator`` maps every lattice point to the lowest index of a
    parallelepiped containing it.
    """

    special_points: tuple
    cover: tuple
    locator: dict
    polytope: Polytope
    special_set: frozenset = field(init=False)

    def __post_init__(self):
        self.special_set = frozenset(self.special_points)

    def locate(self, point) -> Optional[int]:
        return self.locator.get(tuple(point))


def compute_structure_set(poly: Polytope,
                          budget: int = DEFAULT_LATTICE_BUDGET) -> StructureSet:
    """Cover the polytope and index its lattice points by parallelepiped."""
    cover = tuple(parallelepiped_cover(poly, budget=budget))
    special = set()
    for pp in cover:
        special.update(pp.vertices())
    locator = {}
    for p in lattice_points(poly, budget=budget):
        for idx, pp in enumerate(cover):
            if pp.coordinates(p) is not None:
                locator[p] = idx
                break
        else:
            raise InternalError(f"lattice point {p} missed by the cover")
    return StructureSet(tuple(sorted(special)), cover, locator, poly)


def normalize_combination(combo: Combination, sset: StructureSet) -> Combination:
    """Rewrite a combination into the structured normal form.

    Post-conditions (asserted): sum and total weight unchanged; off the
    special set X every weight is 0 or 1; at most ``2^{2d}`` support points
    inside X and at most ``2^{2d}`` outside.  Every support point must be a
    covered lattice point, otherwise the input is rejected.
    """
    reduced = reduce_support(combo)
    if not reduced.weights:
        return reduced
    d = sset.polytope.dim
    if reduced.dim != d:
        raise InputError(f"combination dim {reduced.dim} vs polytope dim {d}")
    xset = sset.special_set
    weights = dict(reduced.weights)
    used = set()
    for p in weights:
        if p not in sset.locator:
            raise InputError(f"support point {p} is not a covered lattice point")
        if p not in xset:
            used.add(sset.locator[p])
    order = sorted(used)
    # settle every claimed parallelepiped until a full sweep is silent;
    # each step strictly shrinks (off-X mass, potential) lexicographically
    while True:
        if not any(_settle_in_pp(sset.cover[idx], weights, xset)
                   for idx in order):
            break
    result = Combination(weights, dim=d)
    if combo_sum(result) != combo_sum(combo) or \
            result.total_weight != combo.total_weight:
        raise InternalError("normalization broke the sum or the weight")
    on_x = sum(1 for p in result.weights if p in xset)
    off_x = len(result.weights) - on_x
    cap = 1 << (2 * d)
    if any(w > 1 for p, w in result.weights.items() if p not in xset):
        raise InternalError("off-X weight above 1 after normalization")
    if on_x > cap or off_x > cap:
        raise InternalError(
            f"support bounds violated: {on_x} on X, {off_x} off X, cap {cap}")
    return result
