"""Rational polytopes, their lattice points, and parallelepiped covers.

A ``Polytope`` is ``{x : A x <= b}`` with integer ``A`` and ``b`` (use
``Polytope.from_rational`` to clear denominators).  On top of it:

* exact coordinate bounds and bounded lattice-point enumeration,
* exact convex-hull machinery in any small dimension (vertex filtering by
  exact LP; a monotone-chain path for rank-2 point sets),
* the slack-interval grid that groups lattice points into cells whose
  constraint slacks agree within a factor ``1 + 1/d^2``,
* minimum-volume enclosing ellipsoid contact points (float iteration,
  answers re-verified exactly, with a sound fallback), and
* ``parallelepiped_cover``: integral parallelepipeds that cover all lattice
  points of the polytope while staying inside it.

Everything user-visible is deterministic: lattice points and hull vertices
come back lexicographically sorted, covers are built cell by cell in
signature order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InputError, InternalError, ResourceError
from .exactmath import ExactLp, lp_optimize, OPTIMAL, INFEASIBLE
from .rational import Rat, ZERO, ONE, rat_ceil, rat_floor, is_integral, as_int

DEFAULT_LATTICE_BUDGET = 200_000

IntPoint = tuple  # tuple of ints


# ---------------------------------------------------------------------------
# small exact linear-algebra helpers


class _RowReducer:
    """Incremental exact row reduction; collects an independent subset."""

    def __init__(self):
        self.rows = []  # (reduced vector, pivot index)

    def residual(self, vec):
        v = list(vec)
        for rv, pi in self.rows:
            if v[pi] != 0:
                f = v[pi] / rv[pi]
                v = [a - f * b for a, b in zip(v, rv)]
        return v

    def try_add(self, vec) -> bool:
        """Returns True (and absorbs vec) iff vec is independent of the rows."""
        v = self.residual(vec)
        for i, x in enumerate(v):
            if x != 0:
                self.rows.append((v, i))
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def _invert(matrix):
    """Exact inverse of a small square rational matrix (raises on singular)."""
    k = len(matrix)
    aug = [[Rat(v) for v in row] + [ONE if i == j else ZERO for j in range(k)]
           for i, row in enumerate(matrix)]
    for col in range(k):
        piv = None
        for r in range(col, k):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise InputError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        if inv != 1:
            aug[col] = [v * inv for v in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                prow = aug[col]
                aug[r] = [a - f * p for a, p in zip(aug[r], prow)]
    return [row[k:] for row in aug]


class _ColumnSolver:
    """Solves ``D alpha = rhs`` for a fixed full-column-rank D (d x k).

    Precomputes the inverse of an invertible k x k row-submatrix; each solve
    is a small matrix-vector product plus an exact consistency check on the
    remaining rows.  Returns None when the system is inconsistent.
    """

    def __init__(self, columns: Sequence[Sequence]):
        self.columns = [tuple(Rat(v) for v in col) for col in columns]
        self.k = len(self.columns)
        self.d = len(self.columns[0]) if self.k else 0
        if self.k == 0:
            self.pivot_rows = []
            self.inv = []
            return
        red = _RowReducer()
        pivot_rows = []
        for i in range(self.d):
            row = [col[i] for col in self.columns]
            if red.try_add(row):
                pivot_rows.append(i)
            if len(pivot_rows) == self.k:
                break
        if len(pivot_rows) < self.k:
            raise InputError("directions are linearly dependent")
        self.pivot_rows = pivot_rows
        sub = [[self.columns[j][i] for j in range(self.k)] for i in pivot_rows]
        self.inv = _invert(sub)

    def solve(self, rhs: Sequence) -> Optional[tuple]:
        rhs = [Rat(v) for v in rhs]
        if self.k == 0:
            return () if all(v == 0 for v in rhs) else None
        alpha = []
        for row in self.inv:
            acc = ZERO
            for f, i in zip(row, self.pivot_rows):
                if f != 0:
                    acc += f * rhs[i]
            alpha.append(acc)
        # exact consistency on every row
        for i in range(self.d):
            acc = ZERO
            for j in range(self.k):
                cij = self.columns[j][i]
                if cij != 0 and alpha[j] != 0:
                    acc += cij * alpha[j]
            if acc != rhs[i]:
                return None
        return tuple(alpha)


# ---------------------------------------------------------------------------
# polytopes


class Polytope:
    """``{x in R^d : A x <= b}`` with integer coefficient rows."""

    def __init__(self, rows: Sequence[Sequence[int]], rhs: Sequence[int]):
        if len(rows) != len(rhs):
            raise InputError(f"{len(rows)} rows but {len(rhs)} bounds")
        self.A = [tuple(int(v) for v in row) for row in rows]
        self.b = tuple(int(v) for v in rhs)
        if self.A:
            d = len(self.A[0])
            if any(len(r) != d for r in self.A):
                raise InputError("ragged constraint matrix")
            if d < 1:
                raise InputError("polytope dimension must be at least 1")
            self.dim = d
        else:
            raise InputError("a polytope needs at least one constraint row")
        self.m = len(self.A)
        self.delta = max(max(abs(v) for v in row) for row in self.A)
        self._bounds = None
        self._lattice = None

    @classmethod
    def from_rational(cls, rows: Sequence[Sequence], rhs: Sequence) -> "Polytope":
        """Clear denominators row by row to get integer data."""
        int_rows, int_rhs = [], []
        for row, b in zip(rows, rhs):
            vals = [Rat(v) for v in row] + [Rat(b)]
            scale = 1
            for v in vals:
                den = int(v.denominator)
                scale = scale * den // math.gcd(scale, den)
            int_rows.append([as_int(v * scale) for v in vals[:-1]])
            int_rhs.append(as_int(vals[-1] * scale))
        return cls(int_rows, int_rhs)

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.A == other.A and self.b == other.b

    def __hash__(self):
        return hash((tuple(self.A), self.b))

    def __repr__(self):
        return f"Polytope(dim={self.dim}, rows={len(self.A)})"

    def contains_int(self, point: Sequence[int]) -> bool:
        """Exact membership for an integer point (pure integer arithmetic)."""
        if len(point) != self.dim:
            raise InputError(f"point has dim {len(point)}, polytope {self.dim}")
        for row, b in zip(self.A, self.b):
            if sum(c * x for c, x in zip(row, point)) > b:
                return False
        return True

    def contains_rat(self, point: Sequence) -> bool:
        pt = [Rat(v) for v in point]
        if len(pt) != self.dim:
            raise InputError(f"point has dim {len(pt)}, polytope {self.dim}")
        for row, b in zip(self.A, self.b):
            acc = ZERO
            for c, x in zip(row, pt):
                if c != 0:
                    acc += c * x
            if acc > b:
                return False
        return True

    def slacks(self, point: Sequence[int]) -> tuple:
        """Integer slack vector ``b - A x`` of an integer member point."""
        out = []
        for row, b in zip(self.A, self.b):
            s = b - sum(c * x for c, x in zip(row, point))
            if s < 0:
                raise InputError("slacks asked for a point outside the polytope")
            out.append(s)
        return tuple(out)


def coordinate_bounds(poly: Polytope):
    """Exact per-coordinate ranges.

    Returns a list of ``(lo, hi)`` pairs of rationals, with ``None`` marking
    an unbounded side, or ``None`` altogether when the polytope is empty.
    Cached on the polytope.
    """
    if poly._bounds is not None:
        return poly._bounds if poly._bounds != "empty" else None
    out = []
    for j in range(poly.dim):
        c = [0] * poly.dim
        c[j] = 1
        res_min = lp_optimize(poly.A, poly.b, c, sense="min")
        if res_min.status == INFEASIBLE:
            poly._bounds = "empty"
            return None
        lo = res_min.value if res_min.status == OPTIMAL else None
        res_max = lp_optimize(poly.A, poly.b, c, sense="max")
        hi = res_max.value if res_max.status == OPTIMAL else None
        out.append((lo, hi))
    poly._bounds = out
    return out


def lattice_points(poly: Polytope, budget: int = DEFAULT_LATTICE_BUDGET) -> list:
    """All integer points of a bounded polytope, lexicographically sorted.

    Raises ``InputError`` on unbounded input and ``ResourceError`` when the
    bounding-box volume exceeds ``budget``.
    """
    if poly._lattice is not None:
        return poly._lattice
    bounds = coordinate_bounds(poly)
    if bounds is None:
        poly._lattice = []
        return []
    ranges = []
    size = 1
    for j, (lo, hi) in enumerate(bounds):
        if lo is None or hi is None:
            raise InputError(f"polytope is unbounded in coordinate {j}")
        a, b = rat_ceil(lo), rat_floor(hi)
        if a > b:
            poly._lattice = []
            return []
        ranges.append(range(a, b + 1))
        size *= b - a + 1
        if size > budget:
            raise ResourceError("lattice enumeration budget", budget,
                                f"bounding box holds {size}+ points")
    rows = poly.A
    rhs = poly.b
    d = poly.dim
    # per-depth bound on what the remaining coordinates can still subtract
    # from each row's partial sum, for early pruning
    remain_min = [[0] * len(rows) for _ in range(d + 1)]
    for depth in range(d - 1, -1, -1):
        rng = ranges[depth]
        for i, row in enumerate(rows):
            c = row[depth]
            best = min(c * rng[0], c * rng[-1])
            remain_min[depth][i] = remain_min[depth + 1][i] + best
    out = []

    def descend(depth, prefix, sums):
        if depth == d:
            out.append(tuple(prefix))
            return
        for v in ranges[depth]:
            new_sums = [s + row[depth] * v for s, row in zip(sums, rows)]
            if all(s + r <= b for s, r, b in
                   zip(new_sums, remain_min[depth + 1], rhs)):
                descend(depth + 1, prefix + [v], new_sums)

    descend(0, [], [0] * len(rows))
    out.sort()
    poly._lattice = out
    return out


# ---------------------------------------------------------------------------
# exact convex hulls


def in_convex_hull(point: Sequence, points: Sequence[Sequence]) -> bool:
    """Exact test: is ``point`` a convex combination of ``points``?"""
    pts = list(points)
    if not pts:
        return False
    d = len(pts[0])
    pt = [Rat(v) for v in point]
    if len(pt) != d:
        raise InputError("dimension mismatch in hull membership test")
    n = len(pts)
    rows = [[Rat(p[k]) for p in pts] for k in range(d)]
    rows.append([ONE] * n)
    rhs = pt + [ONE]
    lp = ExactLp(rows, rhs, senses=["=="] * (d + 1),
                 lo=[ZERO] * n, hi=[None] * n)
    return lp.find_feasible()


def _chart(points):
    """Affine chart: base point, independent difference basis, exact coords."""
    base = points[0]
    red = _RowReducer()
    basis = []
    for p in points[1:]:
        v = [Rat(a) - Rat(b) for a, b in zip(p, base)]
        if red.try_add(v):
            basis.append(tuple(v))
    solver = _ColumnSolver(basis) if basis else None
    return base, basis, solver


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d_vertices(coords):
    """Vertices of the convex hull of exact 2-d points (monotone chain).

    Collinear boundary points are dropped: only true vertices remain.
    Returns indices into ``coords``.
    """
    order = sorted(range(len(coords)), key=lambda i: coords[i])
    # dedup identical coordinates
    uniq = []
    for i in order:
        if not uniq or coords[i] != coords[uniq[-1]]:
            uniq.append(i)
    if len(uniq) <= 2:
        return uniq
    lower = []
    for i in uniq:
        while len(lower) >= 2 and _cross(coords[lower[-2]], coords[lower[-1]], coords[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper = []
    for i in reversed(uniq):
        while len(upper) >= 2 and _cross(coords[upper[-2]], coords[upper[-1]], coords[i]) <= 0:
            upper.pop()
        upper.append(i)
    return sorted(set(lower[:-1] + upper[:-1]))


def extreme_points(points: Iterable[Sequence[int]]) -> list:
    """Vertices of the convex hull of a finite integer point set.

    Exact in every dimension: rank <= 2 cases run on integer/rational
    arithmetic directly; higher ranks prune midpoints cheaply and settle
    the rest with exact LP membership tests.  Sorted lexicographically.
    """
    pts = sorted(set(tuple(int(v) for v in p) for p in points))
    if len(pts) <= 2:
        return pts
    base, basis, solver = _chart(pts)
    k = len(basis)
    if k == 0:
        return [pts[0]]
    coords = []
    for p in pts:
        rhs = [Rat(a) - Rat(b) for a, b in zip(p, base)]
        alpha = solver.solve(rhs)
        if alpha is None:
            raise InternalError("point escaped its own affine hull")
        coords.append(alpha)
    if k == 1:
        lo = min(range(len(pts)), key=lambda i: coords[i][0])
        hi = max(range(len(pts)), key=lambda i: coords[i][0])
        return sorted([pts[lo], pts[hi]])
    if k == 2:
        idx = _hull_2d_vertices(coords)
        return sorted(pts[i] for i in idx)
    # rank >= 3: midpoint pruning, then exact LP filtering
    ptset = set(pts)
    d = len(pts[0])
    candidates = []
    for p in pts:
        pruned = False
        for t in range(d):
            up = list(p)
            up[t] += 1
            dn = list(p)
            dn[t] -= 1
            if tuple(up) in ptset and tuple(dn) in ptset:
                pruned = True
                break
        if not pruned:
            candidates.append(p)
    # iterative filtering: removing a non-vertex never changes the hull
    survivors = list(candidates)
    i = 0
    while i < len(survivors):
        p = survivors[i]
        others = survivors[:i] + survivors[i + 1:]
        if in_convex_hull(p, others):
            survivors.pop(i)
        else:
            i += 1
    return sorted(survivors)


def integer_hull_vertices(poly: Polytope, budget: int = DEFAULT_LATTICE_BUDGET) -> list:
    """Vertices of the convex hull of the polytope's lattice points."""
    return extreme_points(lattice_points(poly, budget=budget))


# ---------------------------------------------------------------------------
# slack-interval grid and cells

_grid_cache: dict = {}


def slack_interval_index(slack: int, dim: int) -> int:
    """Index of the slack interval a nonnegative integer slack falls into.

    Interval endpoints: ``0, r^-1, 1, r, r^2, ...`` with ``r = 1 + 1/dim^2``.
    The index is the largest j with endpoint_j <= slack, so two integer
    slacks share an interval only if they agree within a factor r (slacks 0
    and 1 sit in intervals of their own).
    """
    if slack < 0:
        raise InputError("negative slack")
    if dim < 1:
        raise InputError("dimension must be positive")
    if slack == 0:
        return 0
    if slack == 1:
        return 2
    pows = _grid_cache.setdefault(dim, [ONE])  # pows[i] = r^i = endpoint_{i+2}
    r = Rat(dim * dim + 1, dim * dim)
    while pows[-1] <= slack:
        pows.append(pows[-1] * r)
    # largest i with pows[i] <= slack
    lo, hi = 0, len(pows) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pows[mid] <= slack:
            lo = mid
        else:
            hi = mid - 1
    return lo + 2


def slack_interval_endpoints(index: int, dim: int) -> tuple:
    """The exact rational endpoints ``[a, b]`` of interval ``index``."""
    if index < 0:
        raise InputError("negative interval index")
    r = Rat(dim * dim + 1, dim * dim)
    def endpoint(j):
        if j == 0:
            return ZERO
        p = ONE
        e = j - 2
        if e >= 0:
            for _ in range(e):
                p *= r
        else:
            p = 1 / r
        return p
    return endpoint(index), endpoint(index + 1)


@dataclass(frozen=True)
class Cell:
    """Lattice points sharing one slack-interval signature.

    ``signature`` holds one interval index per constraint row; ``anchor``
    is the lexicographically smallest member.
    """

    signature: tuple
    members: tuple
    anchor: tuple


def cell_partition(poly: Polytope, budget: int = DEFAULT_LATTICE_BUDGET) -> list:
    """Group the lattice points by their slack-signature.

    Returns cells sorted by signature; every lattice point lands in exactly
    one cell, and two points share a cell iff every one of their slacks
    falls in the same grid interval.
    """
    pts = lattice_points(poly, budget=budget)
    d = poly.dim
    cells: dict = {}
    for p in pts:
        sig = tuple(slack_interval_index(s, d) for s in poly.slacks(p))
        cells.setdefault(sig, []).append(p)
    return [Cell(sig, tuple(sorted(members)), min(members))
            for sig, members in sorted(cells.items())]


# ---------------------------------------------------------------------------
# parallelepipeds


class Parallelepiped:
    """``{center + sum_i mu_i * dir_i : -1 <= mu_i <= 1}`` with integral vertices.

    The directions must be linearly independent and every one of the
    ``2^k`` vertices must be an integer point; both are validated on
    construction.  ``k = 0`` is the degenerate single-point case.
    """

    def __init__(self, center: Sequence, directions: Sequence[Sequence]):
        self.center = tuple(Rat(v) for v in center)
        self.directions = tuple(tuple(Rat(v) for v in d) for d in directions)
        self.k = len(self.directions)
        self.dim = len(self.center)
        for dvec in self.directions:
            if len(dvec) != self.dim:
                raise InputError("direction dimension mismatch")
            if all(v == 0 for v in dvec):
                raise InputError("zero direction vector")
        self._solver = _ColumnSolver(self.directions)  # raises if dependent
        self._vertices = None
        self.vertices()  # validates integrality eagerly

    def __eq__(self, other):
        return (isinstance(other, Parallelepiped)
                and self.center == other.center
                and self.directions == other.directions)

    def __hash__(self):
        return hash((self.center, self.directions))

    def __repr__(self):
        return f"Parallelepiped(center={self.center}, k={self.k})"

    def vertices(self) -> list:
        """All ``2^k`` sign-pattern corners as integer tuples, sorted."""
        if self._vertices is not None:
            return self._vertices
        corners = []
        for mask in range(1 << self.k):
            v = list(self.center)
            for i, dvec in enumerate(self.directions):
                sign = 1 if (mask >> i) & 1 == 0 else -1
                for t in range(self.dim):
                    if dvec[t] != 0:
                        v[t] += sign * dvec[t]
            corner = []
            for x in v:
                if not is_integral(x):
                    raise InputError(f"non-integral parallelepiped vertex {tuple(v)}")
                corner.append(as_int(x))
            corners.append(tuple(corner))
        self._vertices = sorted(set(corners))
        return self._vertices

    def coordinates(self, point: Sequence) -> Optional[tuple]:
        """Exact coefficients of ``point`` if it lies in the parallelepiped.

        Returns the ``mu`` vector with ``|mu_i| <= 1`` when the point is
        inside (within the affine span and the coefficient box), else None.
        """
        pt = [Rat(v) for v in point]
        if len(pt) != self.dim:
            raise InputError("point dimension mismatch")
        rhs = [a - c for a, c in zip(pt, self.center)]
        alpha = self._solver.solve(rhs)
        if alpha is None:
            return None
        for a in alpha:
            if a > 1 or a < -1:
                return None
        return alpha


# ---------------------------------------------------------------------------
# ellipsoid contact points


@dataclass(frozen=True)
class EllipsoidResult:
    """Contact points of a centrally symmetric enclosing ellipsoid.

    ``contact_indices`` select input points such that the symmetric hull of
    ``center +- scale * (point - center)`` over the contacts provably
    contains every input point (verified with exact arithmetic).
    ``used_fallback`` reports that the float iteration's contact set failed
    exact verification and all points were kept instead.  ``center`` and
    ``shape`` are advisory floats describing the fitted ellipsoid
    ``(x - center)^T shape (x - center) <= 1`` (degenerate directions get
    pseudo-inverse treatment); only the contact set carries a guarantee.
    """

    contact_indices: tuple
    dim: int
    scale: int
    iterations: int
    used_fallback: bool
    center: tuple = ()
    shape: tuple = ()


MVEE_TOLERANCE = 1e-9
MVEE_ITERATION_CAP = 100_000


def _ceil_sqrt(t: int) -> int:
    c = math.isqrt(t)
    return c if c * c >= t else c + 1


def mvee_contact_points(points: Sequence[Sequence], center: Sequence) -> EllipsoidResult:
    """Contact points of the minimum-volume origin-symmetric enclosing ellipsoid.

    ``points`` must be symmetric about ``center`` (pairs ``center +- u``).
    The ellipsoid itself is computed in floating point; the returned contact
    set is certified exactly: every input point is re-verified to lie in the
    ``ceil(sqrt(dim))``-scaled symmetric hull of the contacts, and on any
    failure the full point set is returned as the (trivially sufficient)
    contact set.
    """
    pts = [tuple(Rat(v) for v in p) for p in points]
    ctr = tuple(Rat(v) for v in center)
    ptset = set(pts)
    for p in pts:
        mirror = tuple(2 * c - x for c, x in zip(ctr, p))
        if mirror not in ptset:
            raise InputError("point set is not symmetric about the center")
    diffs = [tuple(x - c for x, c in zip(p, ctr)) for p in pts]
    red = _RowReducer()
    basis = []
    for v in diffs:
        if any(x != 0 for x in v) and red.try_add(v):
            basis.append(v)
    t = len(basis)
    scale = max(1, _ceil_sqrt(t))
    fctr = tuple(float(v) for v in ctr)
    if t == 0:
        return EllipsoidResult((), 0, scale, 0, False, fctr, ())
    solver = _ColumnSolver(basis)
    coords = []
    for v in diffs:
        alpha = solver.solve(v)
        if alpha is None:
            raise InternalError("symmetric point escaped its own span")
        coords.append(alpha)

    nz = [i for i, c in enumerate(coords) if any(x != 0 for x in c)]
    V = np.array([[float(coords[i][j]) for j in range(t)] for i in nz], dtype=float)
    n = len(nz)
    w = np.full(n, 1.0 / n)
    iterations = 0
    ok = True
    for iterations in range(1, MVEE_ITERATION_CAP + 1):
        M = V.T @ (V * w[:, None])
        try:
            X = np.linalg.solve(M, V.T)
        except np.linalg.LinAlgError:
            ok = False
            break
        g = np.einsum("ij,ji->i", V, X)
        kidx = int(np.argmax(g))
        kappa = float(g[kidx])
        if kappa <= t * (1.0 + MVEE_TOLERANCE):
            break
        beta = (kappa - t) / (t * (kappa - 1.0))
        if not (0.0 < beta < 1.0):
            ok = False
            break
        w *= 1.0 - beta
        w[kidx] += beta

    shape: tuple = ()
    try:
        M = V.T @ (V * w[:, None])
        basis_cols = np.array([[float(v[i]) for v in basis] for i in range(len(ctr))])
        pinv = np.linalg.pinv(basis_cols)
        S = pinv.T @ (np.linalg.inv(M) / t) @ pinv
        shape = tuple(tuple(float(x) for x in row) for row in S)
    except np.linalg.LinAlgError:
        pass

    max_contacts = t * (t + 3) // 2
    contacts: list = []
    if ok:
        order = sorted(range(n), key=lambda i: (-w[i], i))
        chosen = [nz[i] for i in order if w[i] > 1e-8][:max_contacts]
        contacts = sorted(chosen)
        if not _verify_contact_hull(pts, ctr, contacts, scale):
            ok = False
    if not ok:
        contacts = sorted(nz)
        if not _verify_contact_hull(pts, ctr, contacts, scale):
            raise InternalError("full contact set failed hull verification")
        return EllipsoidResult(tuple(contacts), t, scale, iterations, True, fctr, shape)
    return EllipsoidResult(tuple(contacts), t, scale, iterations, False, fctr, shape)


def _verify_contact_hull(pts, ctr, contacts, scale) -> bool:
    if not contacts:
        return all(p == ctr for p in pts)
    gens = []
    for i in contacts:
        u = tuple(x - c for x, c in zip(pts[i], ctr))
        gens.append(tuple(c + scale * v for c, v in zip(ctr, u)))
        gens.append(tuple(c - scale * v for c, v in zip(ctr, u)))
    gens = sorted(set(gens))
    return all(in_convex_hull(p, gens) for p in pts)


# ---------------------------------------------------------------------------
# the cover construction


def _cell_parallelepipeds(poly: Polytope, members: list) -> list:
    """Cover one cell's lattice points with integral parallelepipeds in P."""
    x0 = members[0]
    if len(members) == 1:
        return [Parallelepiped(x0, ())]
    verts = extreme_points(members)
    k = len(_chart(members)[1])
    if k == 1:
        e1, e2 = verts[0], verts[-1]
        center = tuple(Rat(a + b, 2) for a, b in zip(e1, e2))
        direction = tuple(Rat(b - a, 2) for a, b in zip(e1, e2))
        pp = Parallelepiped(center, (direction,))
        if not all(poly.contains_int(v) for v in pp.vertices()):
            raise InternalError("segment cover left the polytope")
        return [pp]

    scale = _ceil_sqrt(k)

    def directions_from(contact_points):
        dirs = []
        seen = set()
        for q in contact_points:
            u = tuple(Rat(a) - Rat(b) for a, b in zip(q, x0))
            if all(v == 0 for v in u):
                continue
            canon = u if u > tuple(ZERO for _ in u) else tuple(-v for v in u)
            if canon not in seen:
                seen.add(canon)
                dirs.append(canon)
        return dirs

    def try_cover(dirs):
        uncovered = set(members)
        kept = []
        for size in range(1, k + 1):
            if not uncovered:
                break
            for combo in combinations(range(len(dirs)), size):
                if not uncovered:
                    break
                chosen = [dirs[i] for i in combo]
                red = _RowReducer()
                if not all(red.try_add(list(u)) for u in chosen):
                    continue
                pp = None
                for c in range(scale, 0, -1):
                    cand_dirs = tuple(tuple(c * v for v in u) for u in chosen)
                    cand = Parallelepiped(x0, cand_dirs)
                    if all(poly.contains_int(v) for v in cand.vertices()):
                        pp = cand
                        break
                if pp is None:
                    continue
                newly = [m for m in uncovered if pp.coordinates(m) is not None]
                if newly:
                    kept.append(pp)
                    uncovered.difference_update(newly)
        return kept, uncovered

    sym = {x0}
    for v in verts:
        sym.add(v)
        sym.add(tuple(2 * a - b for a, b in zip(x0, v)))
    sym = sorted(sym)
    ellip = mvee_contact_points(sym, x0)
    contact_pts = [sym[i] for i in ellip.contact_indices]

    kept, uncovered = try_cover(directions_from(contact_pts))
    if uncovered:
        kept, uncovered = try_cover(directions_from([v for v in verts]))
    if uncovered:
        raise InternalError(f"cell coverage failed for {len(uncovered)} points")
    return kept


def parallelepiped_cover(poly: Polytope, budget: int = DEFAULT_LATTICE_BUDGET) -> list:
    """Integral parallelepipeds inside ``poly`` covering all its lattice points.

    Construction: dimension 1 collapses to a single segment (or point);
    otherwise lattice points are grouped into slack cells and each cell is
    covered by parallelepipeds anchored at its lexicographically smallest
    member, with directions picked from ellipsoid contact points of the
    symmetrized cell hull (scaled by ``ceil(sqrt(dim))``), falling back to
    all hull vertices.  Containment in the polytope is enforced by exact
    vertex checks, shrinking the scale integrally when needed.
    """
    pts = lattice_points(poly, budget=budget)
    if not pts:
        return []
    if poly.dim == 1:
        lo = pts[0]
        hi = pts[-1]
        if lo == hi:
            return [Parallelepiped(lo, ())]
        center = (Rat(lo[0] + hi[0], 2),)
        direction = ((Rat(hi[0] - lo[0], 2),),)
        return [Parallelepiped(center, direction)]
    cover = []
    for cell in cell_partition(poly, budget=budget):
        cover.extend(_cell_parallelepipeds(poly, list(cell.members)))
    return cover


def pp_coordinates(pp: Parallelepiped, point: Sequence) -> Optional[tuple]:
    """Coefficients of ``point`` in ``pp``, or None when outside."""
    return pp.coordinates(point)


def pp_vertices(pp: Parallelepiped) -> list:
    """All sign-pattern corners of ``pp`` as integer tuples."""
    return pp.vertices()


# ---------------------------------------------------------------------------
# serialization


def polytope_to_text(poly: Polytope) -> str:
    lines = [f"{len(poly.A)} {poly.dim}"]
    for row, b in zip(poly.A, poly.b):
        lines.append(" ".join(str(v) for v in row) + f" {b}")
    return "\n".join(lines) + "\n"


def polytope_from_text(text: str) -> Polytope:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise InputError("empty polytope description")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"line 1: expected 'm d', got {lines[0]!r}")
    try:
        m, d = int(head[0]), int(head[1])
    except ValueError as exc:
        raise InputError(f"line 1: {exc}") from exc
    if len(lines) != m + 1:
        raise InputError(f"expected {m} constraint rows, found {len(lines) - 1}")
    rows, rhs = [], []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != d + 1:
            raise InputError(f"line {i}: expected {d + 1} integers, got {len(parts)}")
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise InputError(f"line {i}: {exc}") from exc
        rows.append(vals[:d])
        rhs.append(vals[d])
    return Polytope(rows, rhs)
