"""Bound certificates: data model, exact verification, text format.

A certificate is a nonnegative combination ``f = sum coeff_i * fn_i`` of
admissible functions for a dimension ``n`` and minimum angle ``alpha``.
Verification computes, with rational arithmetic only, the largest ``c`` with
``f(t) + c <= 0`` on ``[-1, cos alpha]`` and ``f(1) + c <= 1``; any code then
has at most ``floor(1/c)`` points.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

from .funspace import (
    FAlpha,
    GBeta,
    Gegenbauer,
    MinOfTwo,
    MusinHat,
    NegSqrt,
    cos_deg,
    piecewise_description,
)
from .polycore import DEFAULT_MAX_DEPTH, ExactPolynomial, Interval, bound_maximum

FORMAT_VERSION = 1
_DECIMAL_RE = re.compile(r"-?[0-9]+(\.[0-9]+)?")


class CertificateError(ValueError):
    """Raised for malformed certificate text or data."""


@dataclass(frozen=True)
class Certificate:
    n: int
    alpha_deg: Decimal
    entries: tuple  # of (BasisFunction, Decimal)
    claimed_bound: int

    def __post_init__(self):
        object.__setattr__(self, "alpha_deg", Decimal(str(self.alpha_deg)))
        entries = tuple((fn, Decimal(str(c))) for fn, c in self.entries)
        object.__setattr__(self, "entries", entries)
        for fn, c in entries:
            if c < 0:
                raise CertificateError(f"negative coefficient {c} for {fn.label}")

    def coefficient(self, fn) -> Decimal:
        return sum((c for f, c in self.entries if f == fn), Decimal(0))

    def nonzero(self) -> list:
        return [(fn, c) for fn, c in self.entries if c != 0]

    def with_coefficient(self, index: int, value) -> "Certificate":
        entries = list(self.entries)
        entries[index] = (entries[index][0], Decimal(str(value)))
        return Certificate(self.n, self.alpha_deg, tuple(entries), self.claimed_bound)


@dataclass(frozen=True)
class VerifyReport:
    """Result of :func:`verify`.

    For a valid report ``c_star`` is an exact rational with ``f + c_star <= 0``
    on ``[-1, cos alpha]`` and ``f(1) + c_star <= 1``, and
    ``proved_bound = floor(1/c_star) <= claimed_bound``.  Invalid reports carry
    a ``reason`` and, when available, a point ``witness_t`` with the exact
    value ``witness_value = f(witness_t)`` that rules the claim out.
    """

    valid: bool
    proved_bound: int | None
    c_star: Fraction | None
    margin_at_one: Fraction | None
    upper: Fraction | None = None
    scale: Fraction = Fraction(1)
    reason: str = ""
    witness_t: Fraction | None = None
    witness_value: Fraction | None = None
    guarantees: tuple = ()
    cells: int = 0
    depth: int = 0

    @property
    def status(self) -> str:
        return "Valid" if self.valid else "Invalid"


# ---------------------------------------------------------------------------
# building f


def structural_guarantee(fn, n: int, alpha_deg: Decimal) -> str | None:
    """Why ``fn`` satisfies the double-sum condition for (n, alpha) codes, or None."""
    if isinstance(fn, Gegenbauer):
        return f"{fn.label}: PSD kernel on S^{n - 1} (Schoenberg)" if fn.n == n else None
    if isinstance(fn, FAlpha):
        if fn.z == cos_deg(alpha_deg):
            return f"f_alpha: diagonally dominant on {alpha_deg}-degree codes, any n"
        return None
    if isinstance(fn, GBeta):
        return "g_beta: nonnegative double sum for beta < 90 degrees, any n, any alpha" if fn.cos_beta > 0 else None
    if isinstance(fn, MusinHat):
        if fn.dim == n and alpha_deg == 60:
            return f"musin{fn.dim}: pointed sums nonnegative on 60-degree codes in S^{n - 1}"
        return None
    return None


def _split_points(entries, lo: Fraction, hi: Fraction) -> list[Fraction]:
    pts = {lo, hi}
    for fn, _ in entries:
        for b in piecewise_description(fn).breakpoints:
            r = b.rational_left() if isinstance(b, NegSqrt) else b
            if lo < r < hi:
                pts.add(r)
    return sorted(pts)


def piecewise_upper_envelope(entries, lo: Fraction, hi: Fraction):
    """Cells covering [lo, hi], each with polynomials bounding f from above.

    ``entries`` is a list of (function, Fraction coefficient) with
    nonnegative coefficients.  On each cell f is at most every polynomial
    listed for it.
    """
    pts = _split_points(entries, lo, hi)
    descs = []
    for fn, c in entries:
        d = piecewise_description(fn)
        cuts = [b.rational_left() if isinstance(b, NegSqrt) else b for b in d.breakpoints]
        descs.append((c, cuts, d.pieces))
    cells = []
    for a, b in zip(pts, pts[1:]):
        alts = [ExactPolynomial((0,))]
        for c, cuts, pieces in descs:
            piece = pieces[sum(1 for r in cuts if r <= a)]
            if isinstance(piece, MinOfTwo):
                alts = [p + piece.first * c for p in alts] + [p + piece.second * c for p in alts]
            else:
                alts = [p + piece * c for p in alts]
        cells.append((Interval(a, b), alts))
    return cells


def _exact_function(entries):
    poly = ExactPolynomial((0,))
    rest = []
    for fn, c in entries:
        if isinstance(fn, Gegenbauer):
            poly = poly + piecewise_description(fn).pieces[0] * c
        else:
            rest.append((fn, c))

    def f(t: Fraction) -> Fraction:
        return poly(t) + sum((c * fn(t) for fn, c in rest), Fraction(0))

    return f


def _floor_inv(x: Fraction) -> int:
    return x.denominator // x.numerator


def _short(c: Fraction) -> Fraction:
    """A decimal in (0, c] with the same floor(1/c); shrinking c is always sound."""
    target = _floor_inv(c)
    for digits in range(1, 200):
        q = Fraction(int(c * 10**digits), 10**digits)
        if q > 0 and _floor_inv(q) == target:
            return q
    return c


def _c_from_upper(gap_one: Fraction, f1: Fraction, upper: Fraction, rescale: bool) -> Fraction:
    """Largest admissible c given max f <= upper (possibly after rescaling f)."""
    if rescale and upper < 0:
        # lambda * f with lambda = 1/(f(1) - upper) makes both conditions tight
        return -upper / (f1 - upper)
    return min(gap_one, -upper)


def verify(cert: Certificate, max_depth: int = DEFAULT_MAX_DEPTH, rescale: bool = True) -> VerifyReport:
    """Exact check of the three bound conditions for ``cert``.

    With ``rescale`` the function may be multiplied by the positive constant
    ``scale = 1/(f(1) - max f)`` before the bound is read off; this never
    weakens the bound and leaves the double-sum condition intact.  With
    ``rescale=False`` the coefficients are used exactly as written and
    ``c_star = min(1 - f(1), -max f)``.
    """
    guarantees = []
    for fn, _ in cert.entries:
        g = structural_guarantee(fn, cert.n, cert.alpha_deg)
        if g is None:
            return VerifyReport(False, None, None, None,
                                reason=f"{fn.label} has no admissibility guarantee for n={cert.n}, "
                                       f"alpha={cert.alpha_deg}")
        guarantees.append(g)
    guarantees = tuple(guarantees)

    z = cos_deg(cert.alpha_deg)
    entries = [(fn, Fraction(c)) for fn, c in cert.entries if c != 0]
    f = _exact_function(entries)
    f1 = f(Fraction(1))
    gap_one = 1 - f1
    if gap_one <= 0 and not rescale:
        return VerifyReport(False, None, None, None, reason="f(1) >= 1, no positive c satisfies f(1) + c <= 1",
                            witness_t=Fraction(1), witness_value=f1, guarantees=guarantees)

    def stop(ub: Fraction, lb: Fraction) -> bool:
        if lb >= 0:
            return True
        if ub >= 0:
            return False
        cu = _c_from_upper(gap_one, f1, ub, rescale)
        if cu <= 0:
            return True
        return _floor_inv(cu) == _floor_inv(_c_from_upper(gap_one, f1, lb, rescale))

    if z > -1:
        mb = bound_maximum(piecewise_upper_envelope(entries, Fraction(-1), z), f, stop, max_depth=max_depth)
        upper, lower, arg = mb.upper, mb.lower, mb.argmax
        stats = dict(cells=mb.cells, depth=mb.max_depth)
    else:
        upper = lower = f(Fraction(-1))
        arg = Fraction(-1)
        stats = dict(cells=1, depth=0)

    if upper >= 0 or (not rescale and gap_one <= 0):
        if lower >= 0:
            return VerifyReport(False, None, None, None, upper=upper,
                                reason="f(t) >= 0 somewhere on [-1, cos alpha], forcing c <= 0",
                                witness_t=arg, witness_value=lower, guarantees=guarantees, **stats)
        return VerifyReport(False, None, None, None, upper=upper,
                            reason="inconclusive: could not separate max f from 0 at max depth",
                            guarantees=guarantees, **stats)

    c_star = _short(_c_from_upper(gap_one, f1, upper, rescale))
    scale = 1 / (f1 - upper) if rescale else Fraction(1)
    proved = _floor_inv(c_star)
    if proved > cert.claimed_bound:
        need = Fraction(1, cert.claimed_bound + 1)
        # claim needs c > need: with max f = m this requires m < -need * scale-adjusted
        lower_c = _c_from_upper(gap_one, f1, lower, rescale) if lower < 0 else Fraction(0)
        if not rescale and gap_one <= need:
            return VerifyReport(False, proved, c_star, None, upper=upper,
                                reason=f"f(1) + 1/{cert.claimed_bound + 1} >= 1",
                                witness_t=Fraction(1), witness_value=f1, guarantees=guarantees, **stats)
        if lower_c <= need:
            return VerifyReport(False, proved, c_star, None, upper=upper,
                                reason=f"the value of f at the witness point caps c at or below "
                                       f"1/{cert.claimed_bound + 1}",
                                witness_t=arg, witness_value=lower, guarantees=guarantees, **stats)
        return VerifyReport(False, proved, c_star, None, upper=upper,
                            reason=f"inconclusive: proved only {proved} > claimed {cert.claimed_bound}",
                            guarantees=guarantees, **stats)
    return VerifyReport(True, proved, c_star, 1 - scale * f1 - c_star, upper=upper, scale=scale,
                        guarantees=guarantees, **stats)


# ---------------------------------------------------------------------------
# text format


def _dec(d: Decimal) -> str:
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("", "-0") else s


def _fn_record(fn) -> dict:
    if isinstance(fn, Gegenbauer):
        return {"fn": "gegenbauer", "k": fn.k}
    if isinstance(fn, FAlpha):
        return {"fn": "f_alpha"}
    if isinstance(fn, GBeta):
        return {"fn": "g_beta", "cos_beta": _dec(Decimal(fn.cos_beta.numerator) / Decimal(fn.cos_beta.denominator))}
    if isinstance(fn, MusinHat):
        return {"fn": f"musin{fn.dim}"}
    raise CertificateError(f"cannot serialize {fn!r}")


def serialize(cert: Certificate) -> str:
    """Canonical JSON text; coefficients are decimal strings."""
    entries = []
    for fn, c in cert.entries:
        rec = _fn_record(fn)
        rec["coeff"] = _dec(c)
        entries.append(rec)
    obj = {
        "version": FORMAT_VERSION,
        "n": cert.n,
        "alpha_deg": _dec(cert.alpha_deg),
        "claimed_bound": cert.claimed_bound,
        "entries": entries,
    }
    return json.dumps(obj, indent=2) + "\n"


def _decimal_field(obj: dict, key: str, where: str) -> Decimal:
    val = obj.get(key)
    if not isinstance(val, str) or not _DECIMAL_RE.fullmatch(val):
        raise CertificateError(f"{where}: field {key!r} must be a decimal string, got {val!r}")
    return Decimal(val)


def _int_field(obj: dict, key: str, where: str) -> int:
    val = obj.get(key)
    if not isinstance(val, int) or isinstance(val, bool):
        raise CertificateError(f"{where}: field {key!r} must be an integer, got {val!r}")
    return val


def parse(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise CertificateError("certificate must be a JSON object")
    if obj.get("version") != FORMAT_VERSION:
        raise CertificateError(f"unsupported version {obj.get('version')!r}")
    n = _int_field(obj, "n", "certificate")
    if n < 2:
        raise CertificateError("n must be >= 2")
    alpha = _decimal_field(obj, "alpha_deg", "certificate")
    claimed = _int_field(obj, "claimed_bound", "certificate")
    raw = obj.get("entries")
    if not isinstance(raw, list):
        raise CertificateError("entries must be an array")
    entries = []
    for i, rec in enumerate(raw):
        where = f"entries[{i}]"
        if not isinstance(rec, dict):
            raise CertificateError(f"{where}: must be an object")
        coeff = _decimal_field(rec, "coeff", where)
        if coeff < 0:
            raise CertificateError(f"{where}: negative coefficient {coeff}")
        tag = rec.get("fn")
        if tag == "gegenbauer":
            k = _int_field(rec, "k", where)
            if k < 0:
                raise CertificateError(f"{where}: negative degree")
            fn = Gegenbauer(n, k)
        elif tag == "f_alpha":
            z = cos_deg(alpha)
            if not 0 <= z < 1:
                raise CertificateError(f"{where}: f_alpha undefined at alpha={alpha}")
            fn = FAlpha(z)
        elif tag == "g_beta":
            cb = _decimal_field(rec, "cos_beta", where)
            if not 0 < cb <= 1:
                raise CertificateError(f"{where}: cos_beta must lie in (0, 1]")
            fn = GBeta(Fraction(cb))
        elif tag in ("musin3", "musin4"):
            fn = MusinHat(int(tag[-1]))
        else:
            raise CertificateError(f"{where}: unknown function tag {tag!r}")
        entries.append((fn, coeff))
    return Certificate(n, alpha, tuple(entries), claimed)


# ---------------------------------------------------------------------------
# published certificates

_KISSING_COLUMNS = {
    # n: (c_1 .. c_15, c_f)
    9: ("0.019301 0.068796 0.151621 0.233218 0.242578 0.173153 0.057219 0 0 "
        "0.020652 0.022367 0 0 0 0", "0.008455"),
    16: ("0.00150625 0.00883013 0.03241271 0.08357928 0.15818006 0.22396571 0.22963948 "
         "0.16129212 0.05703299 0 0 0.02211528 0.01792231 0 0", "0.00340331"),
    17: ("0.0010991163 0.0068289424 0.0264586211 0.0719084276 0.143361526 0.2142502303 "
         "0.2322459799 0.17372837 0.0656867748 0 0 0.0310430395 0.0309025515 0 0", "0.0024045205"),
    25: ("0.000068346426 0.000597204273 0.003278765311 0.012746086882 0.03727450386 "
         "0.084612203762 0.149967112742 0.207792862667 0.213189306323 0.15506047251 "
         "0.052419478729 0 0 0.038614866776 0.039062690839", "0.005312502853"),
    26: ("0.000050764918 0.000462456224 0.002637553785 0.010630533922 0.032234603849 "
         "0.07583669717 0.139668776208 0.20110760134 0.216300884031 0.164792888823 "
         "0.062508329517 0 0 0.042401423571 0.04958247785", "0.00178248638"),
}

KISSING_TABLE = {9: 379, 10: 594, 16: 8312, 17: 12210, 25: 278083, 26: 396447}
DELSARTE_TABLE = {9: 380, 10: 595, 16: 8313, 17: 12218, 25: 278363, 26: 396974}

# dimension-10 certificate: degrees with coefficients, plus c_f
_DIM10 = ({1: "0.013483", 2: "0.0519007", 3: "0.1256323", 4: "0.2121789", 5: "0.2486231",
           6: "0.2032308", 7: "0.09343", 11: "0.04367"}, "0.006165")

# (n, alpha, N, {degree: coeff}, c_f)
_CODE_COLUMNS = [
    (3, "60.34", 13, "1:0.144628 2:0.264112 3:0.144806 4:0.145356 8:0.007163 9:0.029096 14:0.006433", "0.181467"),
    (3, "58.00", 14, "1:0.17042 2:0.25438 3:0.19558 4:0.15492 5:0.04105 9:0.02116 10:0.01089 15:0.00451", "0.07561"),
    (3, "56.10", 15, "1:0.18047 2:0.24164 3:0.22834 4:0.15143 5:0.06718 9:0.02355 10:0.01119 11:0.00963", "0.01986"),
    (3, "44.43", 24, "1:0.11784 2:0.17644 3:0.1984 4:0.18525 5:0.13696 6:0.07768 7:0.02916 "
                     "11:0.01056 12:0.00582 13:0.00593", "0.01424"),
    (4, "83.65", 9, "1:0.145068 2:0.388785 3:0.036242", "0.318784"),
    (4, "80.73", 10, "1:0.15964 2:0.39941 3:0.04195", "0.29896"),
    (4, "78.73", 11, "1:0.168 2:0.4074 3:0.0482", "0.2853"),
    (4, "63.38", 22, "1:0.14776 2:0.25814 3:0.25129 4:0.18154 5:0.04859 8:0.01237 9:0.01749", "0.03731"),
    (4, "62.30", 23, "1:0.13771 2:0.25131 3:0.24036 4:0.18906 5:0.05079 8:0.00738 9:0.02374", "0.05613"),
    (4, "60.38", 24, "1:0.132654 2:0.241421 3:0.249607 4:0.197614 5:0.07055 9:0.024936", "0.043207"),
    (5, "85.39", 11, "1:0.12887 2:0.40902 3:0.03922", "0.33195"),
    (5, "83.14", 12, "1:0.144012 2:0.416363 3:0.044718", "0.311568"),
    (5, "81.54", 13, "1:0.15234 2:0.42226 3:0.04976", "0.29868"),
    (5, "80.30", 14, "1:0.1586 2:0.4268 3:0.056", "0.2871"),
    (5, "79.30", 15, "1:0.16383 2:0.43007 3:0.06339", "0.276"),
]

# Table 2 rows: (n, N) -> (Delsarte bound, new bound) in degrees
ANGLE_TABLE = {(n, N): Decimal(a) for n, a, N, _, _ in _CODE_COLUMNS}
DELSARTE_ANGLE_TABLE = {
    (3, 13): Decimal("60.42"), (3, 14): Decimal("58.09"), (3, 15): Decimal("56.13"), (3, 24): Decimal("44.45"),
    (4, 9): Decimal("85.60"), (4, 10): Decimal("82.19"), (4, 11): Decimal("79.46"), (4, 22): Decimal("63.41"),
    (4, 23): Decimal("62.36"), (4, 24): Decimal("60.50"), (5, 11): Decimal("87.30"), (5, 12): Decimal("84.94"),
    (5, 13): Decimal("82.92"), (5, 14): Decimal("81.20"), (5, 15): Decimal("79.73"),
}


def _with_falpha(n: int, alpha: str, gegen: Sequence[tuple[int, str]], cf: str, claimed: int) -> Certificate:
    entries = [(Gegenbauer(n, k), Decimal(c)) for k, c in gegen]
    entries.append((FAlpha(cos_deg(alpha)), Decimal(cf)))
    return Certificate(n, Decimal(alpha), tuple(entries), claimed)


def kissing_certificates() -> list[Certificate]:
    """The five appendix kissing certificates plus the dimension-10 one."""
    out = []
    for n, (cs, cf) in _KISSING_COLUMNS.items():
        gegen = list(enumerate(cs.split(), start=1))
        out.append(_with_falpha(n, "60", gegen, cf, KISSING_TABLE[n]))
    gegen10, cf10 = _DIM10
    out.append(_with_falpha(10, "60", sorted(gegen10.items()), cf10, KISSING_TABLE[10]))
    out.sort(key=lambda c: c.n)
    return out


def code_certificates() -> list[Certificate]:
    """The fifteen appendix certificates for (n, N, alpha) codes; claim N - 1."""
    out = []
    for n, alpha, N, spec, cf in _CODE_COLUMNS:
        gegen = [(int(k), c) for k, c in (item.split(":") for item in spec.split())]
        out.append(_with_falpha(n, alpha, gegen, cf, N - 1))
    return out


def builtin_certificates() -> list[Certificate]:
    return kissing_certificates() + code_certificates()
