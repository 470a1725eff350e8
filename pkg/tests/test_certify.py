from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from sphbound.certify import (
    KISSING_TABLE,
    Certificate,
    CertificateError,
    builtin_certificates,
    code_certificates,
    kissing_certificates,
    parse,
    serialize,
    verify,
)
from sphbound.funspace import BasisSpec, FAlpha, GBeta, Gegenbauer, MusinHat, basis_eval, cos_deg

BUILTIN = builtin_certificates()


def by_n(n):
    return next(c for c in kissing_certificates() if c.n == n)


def exact_f(cert, t):
    return sum(Fraction(c) * fn(t) for fn, c in cert.entries)


def test_counts_and_transcription():
    assert len(kissing_certificates()) == 6 and len(code_certificates()) == 15
    assert by_n(26).coefficient(Gegenbauer(26, 1)) == Decimal("0.000050764918")
    c9 = by_n(9)
    gegen = [(fn, c) for fn, c in c9.nonzero() if isinstance(fn, Gegenbauer)]
    assert len(gegen) == 9
    assert c9.coefficient(FAlpha(Fraction(1, 2))) == Decimal("0.008455")
    c5 = next(c for c in code_certificates() if c.alpha_deg == Decimal("85.39"))
    assert [fn for fn, _ in c5.nonzero()] == [Gegenbauer(5, 1), Gegenbauer(5, 2), Gegenbauer(5, 3),
                                              FAlpha(cos_deg("85.39"))]


def test_dimension_17():
    rep = verify(by_n(17))
    assert rep.valid and rep.proved_bound == 12210


def test_dimension_10_margin():
    cert = by_n(10)
    f1 = exact_f(cert, 1)
    assert f1 == Fraction("0.9983138")
    assert 1 - (f1 + Fraction(10, 5949)) > 0
    rep = verify(cert)
    assert rep.valid and rep.proved_bound == 594 and rep.margin_at_one >= 0


def test_without_rescaling_uses_coefficients_verbatim():
    rep = verify(by_n(10), rescale=False)
    assert rep.valid and rep.proved_bound == 594 and rep.scale == 1
    assert rep.c_star <= 1 - exact_f(by_n(10), 1)


def test_zero_certificate_invalid():
    cert = Certificate(4, Decimal(60), ((Gegenbauer(4, 1), Decimal(0)), (FAlpha(Fraction(1, 2)), Decimal(0))), 30)
    assert not verify(cert).valid


def test_unguaranteed_function_rejected():
    cert = Certificate(4, Decimal(60), ((MusinHat(3), Decimal(1)),), 30)
    rep = verify(cert)
    assert not rep.valid and "guarantee" in rep.reason


def test_overclaim_gives_witness():
    cert = by_n(16)
    cert = Certificate(cert.n, cert.alpha_deg, cert.entries, 8000)
    rep = verify(cert)
    assert not rep.valid and rep.proved_bound == 8312
    assert exact_f(cert, rep.witness_t) == rep.witness_value


@pytest.mark.parametrize("cert", BUILTIN, ids=lambda c: f"n{c.n}-a{c.alpha_deg}")
def test_builtin_soundness(cert):
    rep = verify(cert)
    assert rep.depth <= 25
    if not rep.valid:
        # the (4, 24) column proves only 24; see test_acceptance
        assert (cert.n, cert.claimed_bound) == (4, 23)
        return
    assert rep.proved_bound <= cert.claimed_bound
    spec = BasisSpec(cert.n, cert.alpha_deg, tuple(fn for fn, _ in cert.entries))
    coeffs = np.array([float(c) for _, c in cert.entries])
    rng = np.random.default_rng(cert.n)
    z = float(cos_deg(cert.alpha_deg))
    ts = rng.uniform(-1, z, 10**6)
    f = float(rep.scale) * (coeffs @ basis_eval(spec, ts))
    assert np.max(f) + float(rep.c_star) <= 1e-12
    assert float(rep.scale) * coeffs.sum() + float(rep.c_star) <= 1 + 1e-12


def test_order_independent():
    cert = by_n(9)
    rev = Certificate(cert.n, cert.alpha_deg, tuple(reversed(cert.entries)), cert.claimed_bound)
    a, b = verify(cert), verify(rev)
    assert (a.valid, a.proved_bound, a.c_star) == (b.valid, b.proved_bound, b.c_star)
    assert verify(cert).c_star == a.c_star


@pytest.mark.parametrize("cert", BUILTIN, ids=lambda c: f"n{c.n}-a{c.alpha_deg}")
def test_perturbation(cert):
    base = verify(cert)
    for i, (fn, c) in enumerate(cert.entries):
        if c == 0:
            continue
        rep = verify(cert.with_coefficient(i, c * Decimal("1.5")))
        if rep.valid:
            assert rep.c_star != base.c_star
            assert rep.proved_bound >= cert.claimed_bound
        else:
            assert "inconclusive" not in rep.reason
            if rep.witness_t is not None:
                assert exact_f(cert.with_coefficient(i, c * Decimal("1.5")), rep.witness_t) == rep.witness_value


@pytest.mark.parametrize("cert", BUILTIN, ids=lambda c: f"n{c.n}-a{c.alpha_deg}")
def test_round_trip(cert):
    text = serialize(cert)
    back = parse(text)
    assert back == cert
    assert serialize(back) == text


def test_round_trip_extensions():
    cert = Certificate(3, Decimal(60), ((Gegenbauer(3, 2), Decimal("0.25")), (GBeta(Fraction(1, 2)), Decimal("0.1")),
                                        (MusinHat(3), Decimal("0.3"))), 13)
    assert parse(serialize(cert)) == cert


@pytest.mark.parametrize("mutate, message", [
    (lambda s: s.replace('"coeff": "0.019301"', '"coeff": "-0.1"'), "negative"),
    (lambda s: s.replace('"gegenbauer"', '"legendre"', 1), "unknown function"),
    (lambda s: s.replace('"coeff": "0.019301"', '"coeff": 0.019301'), "decimal string"),
    (lambda s: s.replace('"coeff": "0.019301"', '"coeff": "1e-3"'), "decimal string"),
    (lambda s: s[:-5], "line"),
    (lambda s: s.replace('"version": 1', '"version": 2'), "version"),
])
def test_parse_errors(mutate, message):
    text = mutate(serialize(by_n(9)))
    with pytest.raises(CertificateError, match=message):
        parse(text)


def test_negative_coefficient_rejected():
    with pytest.raises(CertificateError):
        Certificate(3, Decimal(60), ((Gegenbauer(3, 1), Decimal("-0.1")),), 12)
