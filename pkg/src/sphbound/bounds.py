"""Searching for bounding functions.

The LP is solved on a finite grid of ``[-1, cos alpha]``.  Its solution is
then turned into a decimal certificate and checked exactly, so whatever the
grid misses only costs quality, never correctness.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Sequence

import numpy as np
from scipy import integrate, optimize

from .certify import Certificate, VerifyReport, verify
from .funspace import BasisSpec, FAlpha, basis_eval, breakpoints_float
from .lpsolve import LinearProgram, NumericalDegeneracyError, Status, solve_max

log = logging.getLogger(__name__)

DEFAULT_GRID = 2000
MIN_GRID = 16
MAX_ANGLE = 120
DEFAULT_DIGITS = 10
MAX_DIGITS = 16
_UNCLAIMED = 10**30


@dataclass(frozen=True)
class Grid:
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.size < 2 or np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing, at least two")
        object.__setattr__(self, "nodes", nodes)

    def __len__(self):
        return self.nodes.size

    def with_points(self, pts) -> "Grid":
        return Grid(np.unique(np.concatenate([self.nodes, np.asarray(pts, float)])))


@dataclass(frozen=True)
class BoundResult:
    bound: int | None
    c_star: object
    certificate: Certificate | None
    certified: bool
    lp_value: float = float("nan")
    report: VerifyReport | None = None
    diagnostics: tuple = field(default=())


def make_grid(alpha_deg, s: int, spec: BasisSpec | None = None) -> Grid:
    """Chebyshev-Lobatto nodes on [-1, cos alpha] plus all interior breakpoints."""
    alpha = float(alpha_deg)
    if not 0 < alpha <= MAX_ANGLE:
        raise ValueError(f"angle must lie in (0, {MAX_ANGLE}], got {alpha_deg}")
    if s < MIN_GRID:
        raise ValueError(f"need at least {MIN_GRID} nodes")
    hi = math.cos(math.radians(alpha)) if spec is None else float(spec.z)
    j = np.arange(s)
    nodes = (hi - 1) / 2 - (hi + 1) / 2 * np.cos(np.pi * j / (s - 1))
    nodes[0], nodes[-1] = -1.0, hi
    extra = []
    if spec is not None:
        for fn in spec.functions:
            extra += [b for b in breakpoints_float(fn) if -1 < b < hi]
    return Grid(np.unique(np.concatenate([nodes, extra])))


def build_lp(spec: BasisSpec, grid: Grid) -> LinearProgram:
    """Variables (c_1..c_k, c); maximize c.

    Row 0 is ``sum c_i f_i(1) + c <= 1``, then one row
    ``sum c_i f_i(t) + c <= 0`` per grid node.
    """
    k = len(spec.functions)
    ts = np.concatenate([[1.0], grid.nodes])
    vals = basis_eval(spec, ts) if k else np.zeros((0, ts.size))
    A = np.hstack([vals.T, np.ones((ts.size, 1))])
    b = np.zeros(ts.size)
    b[0] = 1.0
    obj = np.zeros(k + 1)
    obj[-1] = 1.0
    free = np.zeros(k + 1, bool)
    free[-1] = True
    return LinearProgram(obj, A, b, free)


def _round_sig(x: float, digits: int) -> Decimal:
    if x <= 0:
        return Decimal(0)
    return Decimal(format(x, f".{digits - 1}e")).normalize()


def _local_maxima(spec: BasisSpec, coeffs: np.ndarray, hi: float, samples: int = 20001):
    """Float local maximizers of f on [-1, hi]: (t, f(t)) pairs."""
    ts = np.unique(np.concatenate([np.linspace(-1.0, hi, samples),
                                   [b for fn in spec.functions for b in breakpoints_float(fn) if -1 < b < hi]]))
    f = coeffs @ basis_eval(spec, ts)
    out = []
    for i in range(ts.size):
        left = f[i - 1] if i > 0 else -np.inf
        right = f[i + 1] if i + 1 < ts.size else -np.inf
        if f[i] >= left and f[i] >= right:
            a, b = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
            if b > a:
                res = optimize.minimize_scalar(lambda t: -(coeffs @ basis_eval(spec, np.array([t])))[0],
                                               bounds=(a, b), method="bounded", options={"xatol": 1e-13})
                if -res.fun > f[i]:
                    out.append((float(res.x), float(-res.fun)))
                    continue
            out.append((float(ts[i]), float(f[i])))
    return out


EXCHANGE_TOL = 1e-8


def solve_grid(spec: BasisSpec, grid: Grid, rounds: int = 12):
    """LP on ``grid`` with exchange refinement at violated local maxima.

    Local maxima of f between nodes where f + c exceeds ``EXCHANGE_TOL * c``
    are added as nodes and the LP is solved again.
    Returns (coefficients, c, grid used).
    """
    hi = float(spec.z)
    k = len(spec.functions)
    for _ in range(rounds):
        sol = solve_max(build_lp(spec, grid))
        if sol.status is not Status.OPTIMAL:
            raise NumericalDegeneracyError(f"grid LP ended {sol.status.value}")
        coeffs, c = np.clip(sol.primal[:k], 0, None), sol.primal[k]
        if k == 0 or c <= 0:
            return coeffs, c, grid
        bad = [t for t, v in _local_maxima(spec, coeffs, hi) if v + c > EXCHANGE_TOL * c]
        if not bad:
            break
        grid = grid.with_points(bad)
    return coeffs, c, grid


def certificate_from(spec: BasisSpec, coeffs: Sequence[float], digits: int = DEFAULT_DIGITS,
                     claimed: int = _UNCLAIMED) -> Certificate:
    entries = tuple((fn, _round_sig(float(x), digits)) for fn, x in zip(spec.functions, coeffs))
    return Certificate(spec.n, spec.alpha_deg, entries, claimed)


def _finish(cert: Certificate, lp_value: float, notes: list) -> BoundResult:
    rep = verify(cert)
    if not rep.valid:
        notes.append(f"certification failed: {rep.reason}")
        return BoundResult(None, rep.c_star, cert, False, lp_value, rep, tuple(notes))
    final = Certificate(cert.n, cert.alpha_deg, cert.entries, rep.proved_bound)
    return BoundResult(rep.proved_bound, rep.c_star, final, True, lp_value, rep, tuple(notes))


def cardinality_bound(spec: BasisSpec, s: int = DEFAULT_GRID, digits: int = DEFAULT_DIGITS,
                      warm_start: Sequence[Sequence[float]] = (), max_digits: int = MAX_DIGITS) -> BoundResult:
    """Certified upper bound on the size of an (n, N, alpha) code.

    The LP coefficients are rounded to ``digits`` significant digits.  When
    rounding visibly costs bound quality (the certified bound exceeds
    floor(1/c) of the float LP), two more digits are tried, up to
    ``max_digits``.  ``warm_start`` may hold coefficient vectors (in ``spec``
    order) that are certified alongside the LP solution; the best certified
    one wins.
    """
    notes = []
    try:
        coeffs, c, grid = solve_grid(spec, make_grid(spec.alpha_deg, s, spec))
    except NumericalDegeneracyError as exc:
        return BoundResult(None, None, None, False, diagnostics=(f"LP failed: {exc}",))
    notes.append(f"LP value c = {c:.12g} on {len(grid)} nodes")
    if c <= 0:
        notes.append("LP optimum c <= 0: this basis gives no bound")
        return BoundResult(None, None, None, False, c, diagnostics=tuple(notes))
    target = math.floor(1 / c)
    best = None
    for d in range(digits, max(digits, max_digits) + 1, 2):
        cand = _finish(certificate_from(spec, coeffs, d), c, list(notes) + [f"coefficients rounded to {d} digits"])
        if cand.certified and (best is None or not best.certified or cand.bound < best.bound):
            best = cand
        elif best is None:
            best = cand
        if best.certified and best.bound <= target:
            break
    for ws in warm_start:
        cand = _finish(certificate_from(spec, ws, digits=30), c, list(notes) + ["warm start"])
        if cand.certified and (not best.certified or cand.bound < best.bound):
            best = cand
    return best


def _cap_area_angle(n: int, N: int) -> float:
    """Angle at which N caps of angular radius alpha/2 fill the sphere's area."""
    total = integrate.quad(lambda p: math.sin(p) ** (n - 2), 0, math.pi)[0]

    def excess(alpha):
        return N * integrate.quad(lambda p: math.sin(p) ** (n - 2), 0, alpha / 2)[0] - total

    return math.degrees(optimize.brentq(excess, 1e-9, math.pi * 2 - 1e-9)) if excess(math.pi * 2 - 1e-9) > 0 else 120.0


@dataclass(frozen=True)
class AngleResult:
    angle: Decimal | None
    result: BoundResult | None
    evaluations: int


def max_angle_bound(n: int, N: int, spec_template: BasisSpec | None = None, precision_deg=Decimal("0.01"),
                    s: int = DEFAULT_GRID, digits: int = DEFAULT_DIGITS, max_angle=Decimal(MAX_ANGLE)) -> AngleResult:
    """Smallest tested angle at which N points in S^{n-1} are excluded.

    Angles are multiples of ``precision_deg``.  ``spec_template`` gives the
    function family; its f_alpha entry is re-specialized for every angle.
    The default family is Gegenbauer degrees 1..15 plus f_alpha.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    step = Decimal(str(precision_deg))
    if step < Decimal("0.001"):
        raise ValueError("precision below 0.001 degrees")
    if spec_template is None:
        spec_template = BasisSpec.standard(n, 60, 15, ["f-alpha"])
    elif spec_template.n != n:
        raise ValueError("template dimension differs from n")
    top = int(Decimal(max_angle) / step)
    cache: dict[int, BoundResult] = {}

    def excluded(units: int) -> bool:
        if units not in cache:
            alpha = units * step
            res = cardinality_bound(spec_template.with_alpha(alpha), s=s, digits=digits)
            cache[units] = res
            log.info("alpha=%s bound=%s", alpha, res.bound)
        res = cache[units]
        return res.certified and res.bound <= N - 1

    guess = min(_cap_area_angle(n, N), float(max_angle))
    width = max(int(Decimal(5) / step), 1)
    hi = min(int(Decimal(str(round(guess, 6))) / step) + width, top)
    while not excluded(hi):
        if hi == top:
            return AngleResult(None, None, len(cache))
        hi, width = min(hi + width, top), width * 2
    lo = hi - max(int(Decimal(5) / step), 1)
    width = hi - lo
    while lo > 0 and excluded(lo):
        hi, lo, width = lo, max(lo - width, 0), width * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if excluded(mid):
            hi = mid
        else:
            lo = mid
    return AngleResult(hi * step, cache[hi], len(cache))
