"""Admissible functions for the extended Delsarte program.

Besides the Gegenbauer polynomials this holds the piecewise functions that
are admissible for *every* dimension (``f_alpha``, ``g_beta``) and the two
dimension specific functions ``musin_hat(3, .)`` and ``musin_hat(4, .)``.

Every function can be evaluated in floating point (vectorized, for the LP
search) and exactly at rational points (for certificates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import mpmath
import numpy as np

from .polycore import ExactPolynomial, T, as_fraction, gegenbauer_coeffs, gegenbauer_table

COS_DIGITS = 40

# g_3 and g_4 as Gegenbauer combinations, and the scale of the lower branch
MUSIN_DATA = {
    3: ({0: "1", 1: "1.6", 2: "3.48", 3: "1.65", 4: "1.96", 5: "0.1", 9: "0.32"}, "2.89"),
    4: ({0: "1", 1: "2", 2: "6.12", 3: "3.484", 4: "5.12", 9: "1.05"}, "6.226"),
}


@lru_cache(maxsize=None)
def cos_deg(alpha_deg) -> Fraction:
    """cos of an angle in degrees, rounded to 40 significant decimals.

    The result is *defined* to be the exact rational used for that angle,
    so 60 gives exactly 1/2 and 90 exactly 0.
    """
    with mpmath.workdps(COS_DIGITS + 30):
        val = mpmath.cos(mpmath.radians(mpmath.mpf(str(alpha_deg))))
        text = mpmath.nstr(val, COS_DIGITS, min_fixed=-math.inf, max_fixed=math.inf)
    frac = Fraction(Decimal(text))
    # values like 6.1e-71 for 90 degrees are noise from pi
    if abs(frac) < Fraction(1, 10**COS_DIGITS):
        frac = Fraction(0)
    return frac


@lru_cache(maxsize=None)
def musin_poly(dim: int) -> ExactPolynomial:
    """The polynomial g_dim inside the Musin function."""
    if dim not in MUSIN_DATA:
        raise ValueError(f"Musin function exists only for dim 3 and 4, got {dim}")
    weights, _ = MUSIN_DATA[dim]
    p = ExactPolynomial((0,))
    for k, w in weights.items():
        p = p + gegenbauer_coeffs(dim, k) * Fraction(w)
    return p


def musin_scale(dim: int) -> Fraction:
    if dim not in MUSIN_DATA:
        raise ValueError(f"Musin function exists only for dim 3 and 4, got {dim}")
    return Fraction(MUSIN_DATA[dim][1])


def _is_exact(t) -> bool:
    return isinstance(t, (int, Fraction, Decimal)) and not isinstance(t, bool)


def f_alpha(z, t):
    """The angle-specialized function: quadratic below -sqrt(z), 0 up to z, linear above.

    Exact when both ``z`` and ``t`` are rational; ``t`` may also be a float
    or numpy array.
    """
    if _is_exact(z):
        zf = as_fraction(z)
    else:
        zf = z
    if not 0 <= zf < 1:
        raise ValueError(f"f_alpha needs 0 <= z < 1, got {z}")
    if _is_exact(t):
        t = as_fraction(t)
        zf = as_fraction(zf)
        if t < 0 and t * t > zf:
            return (zf - t * t) / (1 - zf)
        if t <= zf:
            return Fraction(0)
        return (t - zf) / (1 - zf)
    z = float(zf)
    t = np.asarray(t, dtype=float)
    out = np.where(t < -math.sqrt(z), (z - t * t) / (1 - z), np.where(t <= z, 0.0, (t - z) / (1 - z)))
    return out if out.ndim else float(out)


def g_beta(cos_beta, t):
    """Step function: -1 below -cos(beta/2), 0 up to cos(beta), 1 above."""
    if not cos_beta > 0:
        raise ValueError(f"g_beta needs beta < pi/2, i.e. cos_beta > 0, got {cos_beta}")
    if _is_exact(t) and _is_exact(cos_beta):
        t, cb = as_fraction(t), as_fraction(cos_beta)
        # cos(beta/2)^2 = (1 + cos beta) / 2
        if t < 0 and t * t > (1 + cb) / 2:
            return -1
        if t <= cb:
            return 0
        return 1
    cb = float(cos_beta)
    half = math.sqrt((1 + cb) / 2)
    t = np.asarray(t, dtype=float)
    out = np.where(t < -half, -1.0, np.where(t <= cb, 0.0, 1.0))
    return out if out.ndim else float(out)


def musin_hat(dim: int, t):
    """min(-g_dim(t)/scale, 0) for t <= 1/2 and 2t - 1 above."""
    g, s = musin_poly(dim), musin_scale(dim)
    if _is_exact(t):
        t = as_fraction(t)
        if t <= Fraction(1, 2):
            return min(-g(t) / s, Fraction(0))
        return 2 * t - 1
    t = np.asarray(t, dtype=float)
    lower = np.minimum(-g.to_numpy()(t) / float(s), 0.0)
    out = np.where(t <= 0.5, lower, 2 * t - 1)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# basis functions


@dataclass(frozen=True)
class Gegenbauer:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 2 or self.k < 0:
            raise ValueError(f"invalid Gegenbauer G_{self.k}^{self.n}")

    def __call__(self, t):
        if _is_exact(t):
            return gegenbauer_coeffs(self.n, self.k)(t)
        return gegenbauer_table(self.n, self.k, t)[self.k]

    @property
    def label(self) -> str:
        return f"G_{self.k}^{self.n}"


@dataclass(frozen=True)
class FAlpha:
    z: Fraction

    def __post_init__(self):
        z = as_fraction(self.z)
        if not 0 <= z < 1:
            raise ValueError(f"f_alpha needs 0 <= z < 1, got {z}")
        object.__setattr__(self, "z", z)

    def __call__(self, t):
        return f_alpha(self.z, t)

    @property
    def label(self) -> str:
        return f"f_alpha(z={float(self.z):.6g})"


@dataclass(frozen=True)
class GBeta:
    cos_beta: Fraction

    def __post_init__(self):
        cb = as_fraction(self.cos_beta)
        if not 0 < cb <= 1:
            raise ValueError(f"g_beta needs 0 < cos_beta <= 1, got {cb}")
        object.__setattr__(self, "cos_beta", cb)

    def __call__(self, t):
        return g_beta(self.cos_beta, t)

    @property
    def label(self) -> str:
        return f"g_beta(cos={float(self.cos_beta):.6g})"


@dataclass(frozen=True)
class MusinHat:
    dim: int

    def __post_init__(self):
        if self.dim not in (3, 4):
            raise ValueError(f"Musin function exists only for dim 3 and 4, got {self.dim}")

    def __call__(self, t):
        return musin_hat(self.dim, t)

    @property
    def label(self) -> str:
        return f"musin{self.dim}"


BasisFunction = Union[Gegenbauer, FAlpha, GBeta, MusinHat]


@dataclass(frozen=True)
class BasisSpec:
    """A dimension, a minimum angle and the functions offered to the LP."""

    n: int
    alpha_deg: Decimal
    functions: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha_deg", Decimal(str(self.alpha_deg)))
        object.__setattr__(self, "functions", tuple(self.functions))
        if self.n < 2:
            raise ValueError("dimension must be >= 2")
        z = cos_deg(self.alpha_deg)
        for fn in self.functions:
            if isinstance(fn, Gegenbauer) and fn.n != self.n:
                raise ValueError(f"{fn.label} does not match dimension {self.n}")
            if isinstance(fn, FAlpha) and fn.z != z:
                raise ValueError("f_alpha must use z = cos(alpha_deg)")
            if isinstance(fn, MusinHat) and (fn.dim != self.n or self.alpha_deg != 60):
                raise ValueError(f"musin{fn.dim} requires n={fn.dim} and alpha=60")

    @property
    def z(self) -> Fraction:
        return cos_deg(self.alpha_deg)

    @classmethod
    def standard(cls, n: int, alpha_deg, max_degree: int, extensions: Sequence[str] = (),
                 degrees: Sequence[int] | None = None, beta_cos=None) -> "BasisSpec":
        """Gegenbauer degrees 1..max_degree plus named extensions.

        Extensions: ``"f-alpha"``, ``"g-beta"``, ``"musin3"``, ``"musin4"``.
        ``f-alpha`` is dropped silently beyond 90 degrees where it is undefined.
        """
        alpha_deg = Decimal(str(alpha_deg))
        ks = degrees if degrees is not None else range(1, max_degree + 1)
        fns: list = [Gegenbauer(n, k) for k in ks]
        for ext in extensions:
            if ext == "f-alpha":
                z = cos_deg(alpha_deg)
                if z >= 0:
                    fns.append(FAlpha(z))
            elif ext == "g-beta":
                fns.append(GBeta(Fraction(beta_cos) if beta_cos is not None else cos_deg(alpha_deg)))
            elif ext in ("musin3", "musin4"):
                fns.append(MusinHat(int(ext[-1])))
            else:
                raise ValueError(f"unknown extension {ext!r}")
        return cls(n, alpha_deg, tuple(fns))

    def with_alpha(self, alpha_deg) -> "BasisSpec":
        """Same family at another angle; f_alpha follows the angle."""
        alpha_deg = Decimal(str(alpha_deg))
        z = cos_deg(alpha_deg)
        fns = []
        for fn in self.functions:
            if isinstance(fn, FAlpha):
                if z >= 0:
                    fns.append(FAlpha(z))
            else:
                fns.append(fn)
        return BasisSpec(self.n, alpha_deg, tuple(fns))


def basis_eval(spec: BasisSpec, t):
    """Values of every function of ``spec`` at ``t``.

    For a scalar ``t`` this is a list; for an array it is a
    ``(len(functions), len(t))`` array.
    """
    scalar = np.ndim(t) == 0 and not isinstance(t, np.ndarray)
    if scalar and _is_exact(t):
        return [fn(t) for fn in spec.functions]
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((len(spec.functions), ts.size))
    kmax = max((fn.k for fn in spec.functions if isinstance(fn, Gegenbauer)), default=0)
    table = gegenbauer_table(spec.n, kmax, ts)
    for i, fn in enumerate(spec.functions):
        out[i] = table[fn.k] if isinstance(fn, Gegenbauer) else fn(ts)
    if scalar:
        return [float(v) for v in out[:, 0]]
    return out


# ---------------------------------------------------------------------------
# piecewise structure


@dataclass(frozen=True)
class NegSqrt:
    """The irrational breakpoint -sqrt(w)."""

    w: Fraction

    def __float__(self):
        return -math.sqrt(self.w)

    def rational_left(self, digits: int = 30) -> Fraction:
        """A rational r < -sqrt(w) within 10**-digits of it."""
        scale = 10**digits
        num, den = self.w.numerator, self.w.denominator
        # sqrt(w) = sqrt(num*den)/den
        root = math.isqrt(num * den * scale * scale)
        r = -Fraction(root + 1, den * scale)
        assert r * r > self.w
        return r


@dataclass(frozen=True)
class MinOfTwo:
    """Piece equal to min(first, second)."""

    first: ExactPolynomial
    second: ExactPolynomial


Breakpoint = Union[Fraction, NegSqrt]
Piece = Union[ExactPolynomial, MinOfTwo]


@dataclass(frozen=True)
class PiecewiseDescription:
    """Interior breakpoints and one piece per region of [-1, 1].

    At a :class:`NegSqrt` breakpoint the right-hand piece is never smaller
    than the function just left of it, so it can stand in for the function
    on a thin sliver when the breakpoint is replaced by a rational.
    """

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        vals = [float(b) for b in self.breakpoints]
        if any(a > b for a, b in zip(vals, vals[1:])) or any(not -1 <= v <= 1 for v in vals):
            raise ValueError("breakpoints must be increasing inside [-1, 1]")


def piecewise_description(fn: BasisFunction) -> PiecewiseDescription:
    if isinstance(fn, Gegenbauer):
        return PiecewiseDescription((), (gegenbauer_coeffs(fn.n, fn.k),))
    if isinstance(fn, FAlpha):
        z = fn.z
        quad = (z - T * T) / (1 - z)
        lin = (T - z) / (1 - z)
        return PiecewiseDescription((NegSqrt(z), z), (quad, ExactPolynomial((0,)), lin))
    if isinstance(fn, GBeta):
        cb = fn.cos_beta
        c = ExactPolynomial.constant
        return PiecewiseDescription((NegSqrt((1 + cb) / 2), cb), (c(-1), c(0), c(1)))
    if isinstance(fn, MusinHat):
        lower = MinOfTwo(-musin_poly(fn.dim) / musin_scale(fn.dim), ExactPolynomial((0,)))
        return PiecewiseDescription((Fraction(1, 2),), (lower, 2 * T - 1))
    raise TypeError(f"not a basis function: {fn!r}")


def breakpoints_float(fn: BasisFunction) -> list[float]:
    """Points in [-1, 1] where ``fn`` or its derivative jumps (float)."""
    pts = [float(b) for b in piecewise_description(fn).breakpoints]
    if isinstance(fn, MusinHat):
        roots = musin_poly(fn.dim).to_numpy().roots()
        pts += [r.real for r in roots if abs(r.imag) < 1e-12 and -1 <= r.real <= 0.5]
    return sorted(pts)
