"""Integer feasibility for small fixed-dimension systems ``Ax <= b``.

The solver is depth-first branch-and-bound over exact rational LP
relaxations: each node repairs feasibility of a warm-started simplex
tableau after a bound change, an integral relaxation point (or a
successful rounding of a fractional one) ends the search, and otherwise
the most fractional coordinate is split.  Every answer is exact; a node
budget turns pathological instances into a resource error instead of a
wrong result.

An optional unimodular change of basis (LLL reduction of the coordinate
lattice under the metric ``A^T A + I``) can precondition elongated
feasible regions.  It is off by default and never changes answers, only
node counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InputError, InternalError, ResourceError
from .exactmath import ExactLp, lp_optimize, OPTIMAL, INFEASIBLE
from .rational import Rat, ZERO, ONE, rat_floor, rat_ceil, is_integral, as_int

DEFAULT_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class IlpProblem:
    """``{x in Z^n : rows * x <= rhs, lo <= x <= hi}`` with integer data.

    ``lo``/``hi`` entries may be None (unknown); equalities are encoded as
    paired inequalities by the caller.
    """

    rows: tuple
    rhs: tuple
    n: int
    lo: tuple = None
    hi: tuple = None

    @classmethod
    def build(cls, rows: Sequence[Sequence[int]], rhs: Sequence[int],
              lo: Optional[Sequence] = None,
              hi: Optional[Sequence] = None) -> "IlpProblem":
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        rhs = tuple(int(v) for v in rhs)
        if len(rows) != len(rhs):
            raise InputError(f"{len(rows)} rows but {len(rhs)} bounds")
        if not rows:
            raise InputError("a problem needs at least one constraint row")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise InputError("ragged constraint matrix")
        if n < 1:
            raise InputError("at least one variable required")

        def norm(bounds):
            if bounds is None:
                return tuple([None] * n)
            out = tuple(None if v is None else int(v) for v in bounds)
            if len(out) != n:
                raise InputError("bound vector length mismatch")
            return out

        return cls(rows, rhs, n, norm(lo), norm(hi))


@dataclass(frozen=True)
class IlpResult:
    feasible: bool
    witness: Optional[tuple]
    nodes: int


def _satisfies(problem: IlpProblem, x: Sequence[int]) -> bool:
    for row, b in zip(problem.rows, problem.rhs):
        if sum(c * v for c, v in zip(row, x)) > b:
            return False
    for v, lo in zip(x, problem.lo):
        if lo is not None and v < lo:
            return False
    for v, hi in zip(x, problem.hi):
        if hi is not None and v > hi:
            return False
    return True


def _derive_bounds(problem: IlpProblem):
    """Fill missing variable bounds from the LP relaxation, exactly.

    Returns (lo, hi) integer lists, None when the relaxation is empty, or
    raises InputError when some variable is unbounded.
    """
    lo = list(problem.lo)
    hi = list(problem.hi)
    for j in range(problem.n):
        for side, sense in ((0, "min"), (1, "max")):
            if (lo[j] if side == 0 else hi[j]) is not None:
                continue
            c = [0] * problem.n
            c[j] = 1
            res = lp_optimize(problem.rows, problem.rhs, c, sense=sense,
                              lo=lo, hi=hi)
            if res.status == INFEASIBLE:
                return None
            if res.status != OPTIMAL:
                raise InputError(
                    f"variable {j} is unbounded; supply explicit bounds")
            if side == 0:
                lo[j] = rat_ceil(res.value)
            else:
                hi[j] = rat_floor(res.value)
    return lo, hi


def ilp_feasible(problem: IlpProblem,
                 node_budget: int = DEFAULT_NODE_BUDGET,
                 lll_reduce: bool = False) -> IlpResult:
    """Find an integer point of the system or certify there is none."""
    if lll_reduce:
        return _solve_reduced(problem, node_budget)
    derived = _derive_bounds(problem)
    if derived is None:
        return IlpResult(False, None, 0)
    lo, hi = derived
    if any(a > b for a, b in zip(lo, hi)):
        return IlpResult(False, None, 0)

    lp = ExactLp(problem.rows, problem.rhs,
                 lo=[Rat(v) for v in lo], hi=[Rat(v) for v in hi])
    nodes = 0
    witness = None
    # explicit depth-first stack; "restore" entries rewind the warm-started
    # tableau to the state a node saw before its sibling's bound change
    stack = [("node", tuple(lo), tuple(hi), None)]
    while stack:
        entry = stack.pop()
        if entry[0] == "restore":
            lp.restore(entry[1])
            continue
        _kind, lo_cur, hi_cur, bound = entry
        if bound is not None:
            j, a, b = bound
            lp.set_var_bounds(j, Rat(a), Rat(b))
        nodes += 1
        if nodes > node_budget:
            raise ResourceError("ilp node budget", node_budget)
        if not lp.find_feasible():
            continue
        x = lp.values()
        fracs = [v - rat_floor(v) for v in x]
        if all(f == 0 for f in fracs):
            witness = tuple(as_int(v) for v in x)
            break
        # cheap rounding attempt before branching
        rounded = []
        for v, a, b in zip(x, lo_cur, hi_cur):
            r = rat_floor(v) if (v - rat_floor(v)) < Rat(1, 2) else rat_ceil(v)
            rounded.append(min(max(r, a), b))
        if _satisfies(problem, rounded):
            witness = tuple(rounded)
            break
        # branch on the fractional coordinate with the tightest domain
        # (indicator-style variables first), most fractional on ties
        best_j, best_score = None, None
        for j, f in enumerate(fracs):
            if f == 0:
                continue
            score = (hi_cur[j] - lo_cur[j], -min(f, 1 - f), j)
            if best_score is None or score < best_score:
                best_j, best_score = j, score
        j = best_j
        split = rat_floor(x[j])
        snap = lp.snapshot()
        # floor child explored first: push it last
        if split + 1 <= hi_cur[j]:
            stack.append(("restore", snap))
            stack.append(("node", _replace(lo_cur, j, split + 1), hi_cur,
                          (j, split + 1, hi_cur[j])))
        if split >= lo_cur[j]:
            stack.append(("restore", snap))
            stack.append(("node", lo_cur, _replace(hi_cur, j, split),
                          (j, lo_cur[j], split)))
    if witness is None:
        return IlpResult(False, None, nodes)
    if not _satisfies(problem, witness):
        raise InternalError("witness fails exact constraint check")
    return IlpResult(True, tuple(int(v) for v in witness), nodes)


def _replace(tup, j, v):
    out = list(tup)
    out[j] = v
    return tuple(out)


# ---------------------------------------------------------------------------
# optional lattice preconditioning


def _metric_dot(M, u, v):
    acc = ZERO
    n = len(u)
    for i in range(n):
        if u[i] == 0:
            continue
        row = M[i]
        s = ZERO
        for j in range(n):
            if v[j] != 0:
                s += row[j] * v[j]
        acc += u[i] * s
    return acc


def lll_basis(rows: Sequence[Sequence[int]], n: int) -> list:
    """Unimodular basis of Z^n, LLL-reduced under the metric A^T A + I."""
    M = [[sum(row[i] * row[j] for row in rows) + (1 if i == j else 0)
          for j in range(n)] for i in range(n)]
    basis = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    delta = Rat(3, 4)

    def gram():
        # exact Gram-Schmidt norms and mu coefficients under M
        star = []
        mu = [[ZERO] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = list(basis[i])
            for j in range(i):
                mu[i][j] = _metric_dot(M, basis[i], star[j]) / norms[j]
                v = [a - mu[i][j] * b for a, b in zip(v, star[j])]
            star.append(v)
            norms.append(_metric_dot(M, v, v))
        return mu, norms

    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10_000:
            raise InternalError("basis reduction failed to terminate")
        mu, norms = gram()
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = rat_floor(q + Rat(1, 2))
            if r != 0:
                basis[k] = [a - r * b for a, b in zip(basis[k], basis[j])]
                mu, norms = gram()
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            k = max(k - 1, 1)
    return [[as_int(v) for v in row] for row in basis]


def _solve_reduced(problem: IlpProblem, node_budget: int) -> IlpResult:
    """Solve in LLL-reduced coordinates, mapping the witness back."""
    n = problem.n
    rows = [list(r) for r in problem.rows]
    rhs = list(problem.rhs)
    # fold explicit bounds into rows so the box survives the basis change
    for j in range(n):
        if problem.hi[j] is not None:
            rows.append([1 if i == j else 0 for i in range(n)])
            rhs.append(problem.hi[j])
        if problem.lo[j] is not None:
            rows.append([-1 if i == j else 0 for i in range(n)])
            rhs.append(-problem.lo[j])
    U = lll_basis(rows, n)
    # x = U^T y, so row a becomes a U^T
    new_rows = []
    for row in rows:
        new_rows.append(tuple(sum(row[i] * U[t][i] for i in range(n))
                              for t in range(n)))
    sub = IlpProblem.build(new_rows, rhs)
    res = ilp_feasible(sub, node_budget=node_budget, lll_reduce=False)
    if not res.feasible:
        return res
    y = res.witness
    x = tuple(int(sum(U[t][i] * y[t] for t in range(n))) for i in range(n))
    if not _satisfies(problem, x):
        raise InternalError("reduced-space witness fails original system")
    return IlpResult(True, x, res.nodes)
