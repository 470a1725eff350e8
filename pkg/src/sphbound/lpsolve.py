"""Dense two-phase simplex for small inequality LPs.

    maximize    c . x
    subject to  A x <= b
                x_j >= 0 unless marked free

The solver works on a dictionary (compact tableau) whose columns are the
nonbasic variables only, so a pivot costs O(rows * columns) of the original
problem.  Pricing is Dantzig's rule, falling back to Bland's rule (which
cannot cycle) when progress stalls.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
CLEAN_TOL = 1e-15
# relative right-hand-side shifts tried in turn; see solve_max
SHIFTS = (1e-5, 1e-8, 0.0)


class LpError(ValueError):
    """Malformed linear program."""


class NumericalDegeneracyError(RuntimeError):
    """The simplex run ended at a point that does not satisfy the constraints."""


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    free: np.ndarray = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float).ravel()
        if A.ndim != 2:
            A = A.reshape(len(b), -1) if A.size else np.zeros((len(b), len(c)))
        if A.shape != (len(b), len(c)):
            raise LpError(f"constraint matrix has shape {A.shape}, expected {(len(b), len(c))}")
        free = np.zeros(len(c), bool) if self.free is None else np.asarray(self.free, bool).ravel()
        if free.shape != c.shape:
            raise LpError("free mask must have one entry per variable")
        for name, val in (("objective", c), ("A", A), ("b", b), ("free", free)):
            object.__setattr__(self, name, val)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    @property
    def num_rows(self) -> int:
        return len(self.b)

    def residual(self, x: np.ndarray) -> float:
        """Largest violation of any row or sign constraint at ``x``."""
        worst = 0.0
        if self.num_rows:
            worst = max(worst, float(np.max(self.A @ x - self.b)))
        nonneg = ~self.free
        if nonneg.any():
            worst = max(worst, float(np.max(-x[nonneg])))
        return worst


@dataclass(frozen=True)
class LpSolution:
    status: Status
    objective_value: float
    primal: np.ndarray
    pivots: int = 0
    # final basis: basic original variables and rows held at equality
    basic_vars: tuple = ()
    active_rows: tuple = ()


class _Dictionary:
    """Simplex dictionary over ``A y <= b``, ``y >= 0``, maximizing ``obj . y``.

    Variables are labelled 0..K-1 (columns of A) and K..K+m-1 (row slacks).
    Row i of ``D`` reads ``basic_i = D[i, 0] + sum_j D[i, j] * nonbasic_{j-1}``
    and the last row is the objective.  ``D`` is rebuilt from the original
    data after every pivot, so rounding errors never accumulate.
    """

    def __init__(self, A, b, obj, basic: list[int], nonbasic: list[int]):
        self.A, self.b, self.obj = A, b, obj
        self.basic = basic
        self.nonbasic = nonbasic
        self.pivots = 0
        self.rebuild()

    def rebuild(self):
        A, b, obj = self.A, self.b, self.obj
        m, K = A.shape
        P = [v for v in self.basic if v < K]
        R = [v - K for v in self.nonbasic if v >= K]
        if len(P) != len(R):
            raise NumericalDegeneracyError("inconsistent basis")
        # G expresses the terms b - A[:, nonbasic originals] x_N - slack_N
        G = np.zeros((m, len(self.nonbasic) + 1))
        G[:, 0] = b
        for j, v in enumerate(self.nonbasic):
            if v < K:
                G[:, j + 1] = -A[:, v]
            else:
                G[v - K, j + 1] = -1.0
        D = np.zeros((m + 1, len(self.nonbasic) + 1))
        if P:
            try:
                XP = np.linalg.solve(A[np.ix_(R, P)], G[R])
            except np.linalg.LinAlgError as exc:
                raise NumericalDegeneracyError("singular basis") from exc
        else:
            XP = np.zeros((0, G.shape[1]))
        slack_rows = G - A[:, P] @ XP
        for i, v in enumerate(self.basic):
            D[i] = XP[P.index(v)] if v < K else slack_rows[v - K]
        D[m] = obj[P] @ XP if P else 0.0
        for j, v in enumerate(self.nonbasic):
            if v < K:
                D[m, j + 1] += obj[v]
        self.D = D

    def _check_cycle(self, seen: set):
        key = frozenset(self.basic)
        if key in seen:
            raise NumericalDegeneracyError(f"basis repeated after {self.pivots} pivots (rounding-induced cycle)")
        seen.add(key)

    def pivot(self, r: int, e: int):
        self.basic[r], self.nonbasic[e] = self.nonbasic[e], self.basic[r]
        self.pivots += 1
        self.rebuild()

    def run(self, max_pivots: int) -> Status:
        """Dantzig pricing; Bland's rule once a long degenerate streak shows up."""
        m = len(self.basic)
        bland = False
        streak = 0
        seen = set()
        while True:
            self._check_cycle(seen)
            D = self.D
            red = D[m, 1:]
            candidates = np.flatnonzero(red > PIVOT_TOL)
            if candidates.size == 0:
                return Status.OPTIMAL
            if bland:
                e = min(candidates, key=lambda j: self.nonbasic[j])
            else:
                e = int(candidates[np.argmax(red[candidates])])
            col = D[:m, e + 1]
            rows = np.flatnonzero(col < -PIVOT_TOL)
            if rows.size == 0:
                return Status.UNBOUNDED
            ratios = np.maximum(D[rows, 0], 0.0) / -col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            if bland:
                r = min(tied, key=lambda i: self.basic[i])
            else:
                r = int(tied[np.argmax(-col[tied])])
            streak = streak + 1 if best * red[e] <= 1e-14 else 0
            if streak > 50:
                bland = True
            self.pivot(r, e)
            if self.pivots > max_pivots:
                raise NumericalDegeneracyError(f"no convergence after {max_pivots} pivots")


    def dual_run(self, max_pivots: int) -> bool:
        """Dual simplex from a dual-feasible basis; False if the rows are inconsistent."""
        m = len(self.basic)
        seen = set()
        while True:
            self._check_cycle(seen)
            D = self.D
            neg = np.flatnonzero(D[:m, 0] < -CLEAN_TOL)
            if neg.size == 0:
                return True
            r = int(neg[np.argmin(D[neg, 0])])
            row = D[r, 1:]
            cols = np.flatnonzero(row > PIVOT_TOL)
            if cols.size == 0:
                return False
            ratios = np.maximum(-D[m, 1 + cols], 0.0) / row[cols]
            best = ratios.min()
            tied = cols[ratios <= best + 1e-12 * max(1.0, best)]
            self.pivot(r, int(tied[np.argmax(row[tied])]))
            if self.pivots > max_pivots:
                raise NumericalDegeneracyError(f"no convergence after {max_pivots} pivots")


def _expand(lp: LinearProgram):
    """Split free variables into differences of nonnegative ones."""
    cols = [lp.A]
    obj = [lp.objective]
    free_idx = np.flatnonzero(lp.free)
    if free_idx.size:
        cols.append(-lp.A[:, free_idx])
        obj.append(-lp.objective[free_idx])
    return np.hstack(cols), np.concatenate(obj), free_idx


def solve_max(lp: LinearProgram, max_pivots: int = 100_000) -> LpSolution:
    """Maximize ``lp`` with a two-phase simplex.

    Heavily degenerate programs (many rows tight at one vertex, as at the
    origin of a Delsarte-type LP) stall pivoting and, in floating point, can
    cycle even under Bland's rule.  The right-hand side is therefore shifted
    by a small deterministic amount first; the optimal basis of the shifted
    program is then carried back to the true data by dual simplex pivots.
    If that fails the shift is shrunk, and finally dropped.
    """
    scale = max(1.0, float(np.max(np.abs(lp.b)))) if lp.num_rows else 1.0
    rng = np.random.default_rng(20240613)
    shift = rng.uniform(0.5, 1.0, lp.num_rows) * scale
    last = None
    for eps in SHIFTS:
        try:
            sol = _solve(lp, lp.b + eps * shift, max_pivots)
        except NumericalDegeneracyError as exc:
            last = exc
            continue
        if sol.status is not Status.OPTIMAL or lp.residual(sol.primal) <= FEAS_TOL:
            return sol
        last = NumericalDegeneracyError(f"final point violates constraints by {lp.residual(sol.primal):.3g}")
    raise last


def _solve(lp: LinearProgram, b: np.ndarray, max_pivots: int) -> LpSolution:
    A, c, free_idx = _expand(lp)
    m, k = A.shape
    n0 = lp.num_vars
    basic = list(range(k, k + m))
    nonbasic = list(range(k))
    pivots = 0

    if m and b.min() < -PIVOT_TOL:
        # phase 1: maximize -x0 over A y - x0 <= b; x0 gets label k, slacks shift by one
        A1 = np.hstack([A, -np.ones((m, 1))])
        obj1 = np.zeros(k + 1)
        obj1[k] = -1.0
        dic = _Dictionary(A1, b, obj1, list(range(k + 1, k + 1 + m)), list(range(k + 1)))
        dic.pivot(int(np.argmin(b)), k)
        dic.run(max_pivots)
        if dic.D[m, 0] < -FEAS_TOL:
            return LpSolution(Status.INFEASIBLE, float("nan"), np.full(n0, np.nan), dic.pivots)
        pivots = dic.pivots
        if k in dic.basic:
            r = dic.basic.index(k)
            row = dic.D[r, 1:]
            e = int(np.argmax(np.abs(row)))
            if abs(row[e]) > PIVOT_TOL:
                dic.pivot(r, e)
        if k in dic.basic:
            # artificial stuck at zero with an all-zero row: hand its basic
            # slot to the slack of an active row that the other columns span
            P = [v for v in dic.basic if v < k]
            R = [v - k - 1 for v in dic.nonbasic if v > k]
            for q in R:
                rest = [i for i in R if i != q]
                if not P or np.linalg.matrix_rank(A[np.ix_(rest, P)]) == len(P):
                    dic.basic[dic.basic.index(k)] = q + k + 1
                    dic.nonbasic.remove(q + k + 1)
                    break
            else:
                raise NumericalDegeneracyError("could not remove the phase-one variable")
        else:
            dic.nonbasic.remove(k)
        basic = [v if v < k else v - 1 for v in dic.basic]
        nonbasic = [v if v < k else v - 1 for v in dic.nonbasic]

    dic = _Dictionary(A, b, c, basic, nonbasic)
    dic.pivots = pivots
    status = dic.run(max_pivots)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.UNBOUNDED, float("inf"), np.full(n0, np.nan), dic.pivots)
    if not np.array_equal(b, lp.b):
        # the basis is optimal for the shifted data; restore the true right-hand
        # side and repair primal feasibility with dual pivots
        dic.b = lp.b.astype(float)
        dic.rebuild()
        if not dic.dual_run(max_pivots):
            dic.b = b
            dic.rebuild()

    y = np.zeros(k)
    for i, var in enumerate(dic.basic):
        if var < k:
            y[var] = dic.D[i, 0]
    y = _polish(A, lp.b, y, dic.basic, dic.nonbasic, k)
    x = y[:n0].copy()
    if free_idx.size:
        x[free_idx] -= y[n0:]
    basic_vars = tuple(sorted({int(v) if v < n0 else int(free_idx[v - n0]) for v in dic.basic if v < k}))
    active_rows = tuple(sorted(int(v - k) for v in dic.nonbasic if v >= k))
    return LpSolution(Status.OPTIMAL, float(lp.objective @ x), x, dic.pivots, basic_vars, active_rows)


def _polish(A, b, y, basic, nonbasic, k):
    """Re-solve the active constraints of the final basis with the original data."""
    orig_basic = [v for v in basic if v < k]
    active = [v - k for v in nonbasic if v >= k]
    if not orig_basic or len(orig_basic) != len(active):
        return y
    try:
        sol = np.linalg.solve(A[np.ix_(active, orig_basic)], b[active])
    except np.linalg.LinAlgError:
        return y
    cand = y.copy()
    cand[orig_basic] = sol

    def viol(v):
        return max(float(np.max(A @ v - b)) if len(b) else 0.0, float(np.max(-v)) if len(v) else 0.0)

    return cand if viol(cand) <= viol(y) else y
