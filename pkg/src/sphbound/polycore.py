"""Exact polynomials, Gegenbauer polynomials and Bernstein-basis sign certificates.

Everything that ends up in a proof runs on :class:`fractions.Fraction`.
Floating point is only used to *guide* the search (critical point guesses),
never to decide a bound.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

import numpy as np

Rational = Union[int, Fraction]

MAX_BERNSTEIN_DEGREE = 64
DEFAULT_MAX_DEPTH = 40


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, Decimals and decimal strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class ExactPolynomial:
    """Polynomial in the monomial basis with rational coefficients.

    ``coeffs[i]`` multiplies ``t**i``.  Trailing zeros are stripped on
    construction so :attr:`degree` is always the index of the leading term.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = [as_fraction(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, value) -> "ExactPolynomial":
        return cls((as_fraction(value),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, t):
        if isinstance(t, (float, np.floating, np.ndarray)):
            return self.to_numpy()(t)
        t = as_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def to_numpy(self) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial([float(c) for c in self.coeffs])

    def derivative(self) -> "ExactPolynomial":
        if self.degree == 0:
            return ExactPolynomial((0,))
        return ExactPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __add__(self, other):
        if not isinstance(other, ExactPolynomial):
            other = ExactPolynomial.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return ExactPolynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExactPolynomial):
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        out[i + j] += a * b
            return ExactPolynomial(tuple(out))
        s = as_fraction(other)
        return ExactPolynomial(tuple(c * s for c in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = as_fraction(scalar)
        return ExactPolynomial(tuple(c / s for c in self.coeffs))


T = ExactPolynomial((0, 1))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not lo < hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2


# ---------------------------------------------------------------------------
# Gegenbauer polynomials, normalized so that G_k^n(1) = 1


@lru_cache(maxsize=None)
def gegenbauer_coeffs(n: int, k: int) -> ExactPolynomial:
    """Exact monomial coefficients of G_k^n.

    Uses G_0 = 1, G_1 = t and
    ``G_k = ((2k+n-4) t G_{k-1} - (k-1) G_{k-2}) / (k+n-3)``.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    if k == 0:
        return ExactPolynomial((1,))
    if k == 1:
        return T
    prev, prev2 = gegenbauer_coeffs(n, k - 1), gegenbauer_coeffs(n, k - 2)
    return (T * prev * (2 * k + n - 4) - prev2 * (k - 1)) / (k + n - 3)


def gegenbauer_eval(n: int, k: int, t):
    """Floating point G_k^n(t) by running the recurrence on values."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")
    t = np.asarray(t, dtype=float)
    p0 = np.ones_like(t)
    if k == 0:
        return p0 if p0.ndim else float(p0)
    p1 = t.copy()
    for j in range(2, k + 1):
        p0, p1 = p1, ((2 * j + n - 4) * t * p1 - (j - 1) * p0) / (j + n - 3)
    return p1 if p1.ndim else float(p1)


def gegenbauer_table(n: int, kmax: int, t) -> np.ndarray:
    """Rows G_0^n(t) .. G_kmax^n(t) in one pass of the recurrence."""
    t = np.asarray(t, dtype=float)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = t
    for j in range(2, kmax + 1):
        out[j] = ((2 * j + n - 4) * t * out[j - 1] - (j - 1) * out[j - 2]) / (j + n - 3)
    return out


# ---------------------------------------------------------------------------
# Bernstein form


def to_bernstein(p: ExactPolynomial, iv: Interval, max_degree: int = MAX_BERNSTEIN_DEGREE) -> list[Fraction]:
    """Bernstein coefficients of ``p`` on ``iv`` (degree = deg p)."""
    d = p.degree
    if d > max_degree:
        raise ValueError(f"degree {d} exceeds Bernstein limit {max_degree}")
    lo, h = iv.lo, iv.hi - iv.lo
    # Taylor shift to lo, then scale by the width: q(u) = p(lo + h u)
    a = list(p.coeffs)
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            a[j] += lo * a[j + 1]
    scale = Fraction(1)
    for j in range(d + 1):
        a[j] *= scale
        scale *= h
    binom = [math.comb(d, j) for j in range(d + 1)]
    return [
        sum((Fraction(math.comb(i, j), binom[j]) * a[j] for j in range(i + 1)), Fraction(0))
        for i in range(d + 1)
    ]


def bernstein_eval(b: Sequence[Fraction], u) -> Fraction:
    """de Casteljau evaluation at local parameter ``u`` in [0, 1]."""
    w = list(b)
    for r in range(1, len(w)):
        for i in range(len(w) - r):
            w[i] = w[i] + (w[i + 1] - w[i]) * u
    return w[0]


def bernstein_split(b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Split Bernstein coefficients at the midpoint of the cell."""
    w = list(b)
    left, right = [w[0]], [w[-1]]
    for r in range(1, len(w)):
        w = [(w[i] + w[i + 1]) / 2 for i in range(len(w) - 1)]
        left.append(w[0])
        right.append(w[-1])
    right.reverse()
    return left, right


# ---------------------------------------------------------------------------
# certify p <= 0 on an interval


@dataclass(frozen=True)
class Certified:
    margin: Fraction


@dataclass(frozen=True)
class Violated:
    point: Fraction
    value: Fraction


@dataclass(frozen=True)
class Inconclusive:
    depth_reached: int


CertifyOutcome = Union[Certified, Violated, Inconclusive]


def certify_nonpositive(p: ExactPolynomial, iv: Interval, max_depth: int = DEFAULT_MAX_DEPTH) -> CertifyOutcome:
    """Prove ``p(t) <= 0`` on ``iv`` or find an exact point where it fails.

    A cell is accepted when all its Bernstein coefficients are <= 0.
    Otherwise its endpoints are checked for a witness and the cell is
    bisected.  ``margin`` is the smallest ``-max(coeffs)`` over accepted cells.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if p.is_zero():
        return Certified(Fraction(0))
    margin = None
    deepest = 0
    stack = [(iv.lo, iv.hi, to_bernstein(p, iv), 0)]
    while stack:
        lo, hi, b, depth = stack.pop()
        deepest = max(deepest, depth)
        top = max(b)
        if top <= 0:
            margin = -top if margin is None else min(margin, -top)
            continue
        if b[0] > 0:
            return Violated(lo, b[0])
        if b[-1] > 0:
            return Violated(hi, b[-1])
        if depth >= max_depth:
            return Inconclusive(depth)
        mid = (lo + hi) / 2
        left, right = bernstein_split(b)
        stack.append((mid, hi, right, depth + 1))
        stack.append((lo, mid, left, depth + 1))
    return Certified(margin)


# ---------------------------------------------------------------------------
# rigorous maximum of a piecewise function (branch and bound)


@dataclass
class _Alt:
    poly: ExactPolynomial
    fpoly: np.polynomial.Polynomial
    dpoly: ExactPolynomial
    ddpoly: ExactPolynomial


@dataclass(frozen=True)
class MaxBound:
    """Outcome of :func:`bound_maximum`.

    ``upper`` is a proven upper bound of the function on the domain and
    ``lower`` an exactly evaluated value attained at ``argmax``.
    """

    upper: Fraction
    lower: Fraction
    argmax: Fraction
    cells: int
    max_depth: int
    exhausted: bool


def _dyadic(x: float, lo: Fraction, hi: Fraction) -> Fraction:
    if not math.isfinite(x):
        return (lo + hi) / 2
    return min(max(Fraction(x), lo), hi)


def _cell_upper(alt: _Alt, lo: Fraction, hi: Fraction, b: list[Fraction]):
    """Upper bound of one polynomial on [lo, hi] and a point worth evaluating."""
    ub = max(b)
    d = len(b) - 1
    point = None
    if d == 0:
        return ub, lo
    diffs = [b[i + 1] - b[i] for i in range(d)]
    if all(x >= 0 for x in diffs):
        return b[-1], hi
    if all(x <= 0 for x in diffs):
        return b[0], lo
    if d >= 2:
        second = [diffs[i + 1] - diffs[i] for i in range(d - 1)]
        worst = max(second)
        if worst < 0:
            # concave on the cell: p <= p(m) + p'(m)(t-m) + M2 (t-m)^2 / 2
            h = hi - lo
            m2 = worst * d * (d - 1) / (h * h)
            guess = float((lo + hi) / 2)
            flo, fhi = float(lo), float(hi)
            dp, ddp = alt.fpoly.deriv(1), alt.fpoly.deriv(2)
            for _ in range(30):
                den = ddp(guess)
                if den == 0:
                    break
                nxt = min(max(guess - dp(guess) / den, flo), fhi)
                if nxt == guess:
                    break
                guess = nxt
            m = _dyadic(guess, lo, hi)
            # one exact Newton step, rounded back to a short dyadic
            dd = alt.ddpoly(m)
            if dd < 0:
                m_exact = m - alt.dpoly(m) / dd
                m = min(max(Fraction(round(m_exact * 2**200), 2**200), lo), hi)
            pm, dpm = alt.poly(m), alt.dpoly(m)
            ub = min(ub, pm + dpm * dpm / (2 * -m2))
            point = m
    if point is None:
        point = lo if b[0] >= b[-1] else hi
    return ub, point


def bound_maximum(
    pieces: Iterable[tuple[Interval, Sequence[ExactPolynomial]]],
    exact_f: Callable[[Fraction], Fraction],
    stop: Callable[[Fraction, Fraction], bool],
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_cells: int = 200_000,
) -> MaxBound:
    """Branch and bound for the maximum of a piecewise function.

    On every piece the function is bounded above by each of the listed
    polynomials (so by their minimum).  ``exact_f`` evaluates the true
    function at rational points and supplies attained values.  Refinement
    stops once ``stop(upper, lower)`` holds, when every cell is settled, or
    when a cell at ``max_depth`` would have to be split.
    """
    heap = []
    counter = 0
    best_val, best_pt = None, None
    cells = 0
    deepest = 0

    def consider(t: Fraction):
        nonlocal best_val, best_pt
        v = exact_f(t)
        if best_val is None or v > best_val:
            best_val, best_pt = v, t

    def push(lo, hi, alts, bs, depth):
        nonlocal counter, cells, deepest
        cells += 1
        deepest = max(deepest, depth)
        ub = None
        for alt, b in zip(alts, bs):
            u, pt = _cell_upper(alt, lo, hi, b)
            consider(pt)
            ub = u if ub is None else min(ub, u)
        consider(lo)
        consider(hi)
        counter += 1
        heapq.heappush(heap, (-ub, counter, lo, hi, alts, bs, depth))

    for iv, polys in pieces:
        alts = [_Alt(p, p.to_numpy(), p.derivative(), p.derivative().derivative()) for p in polys]
        push(iv.lo, iv.hi, alts, [to_bernstein(p, iv) for p in polys], 0)

    exhausted = False
    while True:
        neg_ub, _, lo, hi, alts, bs, depth = heap[0]
        ub = -neg_ub
        if ub <= best_val or stop(ub, best_val):
            break
        if depth >= max_depth or cells >= max_cells:
            exhausted = True
            break
        heapq.heappop(heap)
        mid = (lo + hi) / 2
        halves = [bernstein_split(b) for b in bs]
        push(lo, mid, alts, [h[0] for h in halves], depth + 1)
        push(mid, hi, alts, [h[1] for h in halves], depth + 1)

    upper = max(-heap[0][0], best_val)
    return MaxBound(upper, best_val, best_pt, cells, deepest, exhausted)
