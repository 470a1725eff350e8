import math
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from sphbound.bounds import Grid, build_lp, cardinality_bound, make_grid, max_angle_bound
from sphbound.certify import verify
from sphbound.funspace import BasisSpec, FAlpha, GBeta, Gegenbauer
from sphbound.lpsolve import Status, solve_max


def lp_value(spec, grid):
    sol = solve_max(build_lp(spec, grid))
    assert sol.status is Status.OPTIMAL
    return sol.objective_value


def test_make_grid_forced_points():
    spec = BasisSpec(4, 60, (Gegenbauer(4, 1), FAlpha(Fraction(1, 2))))
    g = make_grid(60, 16, spec)
    assert g.nodes[0] == -1 and g.nodes[-1] == 0.5
    assert np.min(np.abs(g.nodes + 1 / math.sqrt(2))) < 1e-15
    g90 = make_grid(90, 16, BasisSpec(4, 90, (Gegenbauer(4, 1),)))
    assert g90.nodes[0] == -1 and g90.nodes[-1] == 0
    big = make_grid(60, 2000, spec)
    assert len(big) >= 2000 and np.all(np.diff(big.nodes) > 0)


@pytest.mark.parametrize("alpha, s", [(0, 100), (121, 100), (60, 15)])
def test_make_grid_rejects(alpha, s):
    with pytest.raises(ValueError):
        make_grid(alpha, s)


def test_build_lp_shape_and_rows():
    spec = BasisSpec(3, 60, (Gegenbauer(3, 1),))
    lp = build_lp(spec, Grid([-1.0, 0.5]))
    assert lp.A.tolist() == [[1, 1], [-1, 1], [0.5, 1]]
    assert lp.b.tolist() == [1, 0, 0]
    assert lp.free.tolist() == [False, True]
    spec = BasisSpec.standard(5, 70, 6, ["f-alpha"])
    grid = make_grid(70, 50, spec)
    lp = build_lp(spec, grid)
    assert lp.A.shape == (len(grid) + 1, len(spec.functions) + 1)


def test_empty_basis_gives_no_bound():
    spec = BasisSpec(3, 60, ())
    assert lp_value(spec, make_grid(60, 16, spec)) == pytest.approx(0, abs=1e-12)
    res = cardinality_bound(spec, s=16)
    assert not res.certified and res.bound is None


def test_delsarte_three_dimensions():
    res = cardinality_bound(BasisSpec.standard(3, 60, 15), s=400)
    assert res.certified and res.bound == 13
    assert verify(res.certificate).proved_bound == 13


def test_dimension_10_warm_start():
    spec = BasisSpec(10, 60, tuple(Gegenbauer(10, k) for k in (1, 2, 3, 4, 5, 6, 7, 11)) + (FAlpha(Fraction(1, 2)),))
    printed = [0.013483, 0.0519007, 0.1256323, 0.2121789, 0.2486231, 0.2032308, 0.09343, 0.04367, 0.006165]
    res = cardinality_bound(spec, s=400, warm_start=[printed])
    assert res.certified and res.bound <= 594


def test_plane():
    res = cardinality_bound(BasisSpec.standard(2, 60, 15), s=400)
    assert res.certified and res.bound == 6


def test_basis_monotonicity():
    grid = make_grid(60, 300)
    base = BasisSpec.standard(6, 60, 8)
    prev = lp_value(base, grid)
    for extra in (Gegenbauer(6, 9), FAlpha(Fraction(1, 2)), GBeta(Fraction(1, 2))):
        base = BasisSpec(6, 60, base.functions + (extra,))
        val = lp_value(base, grid)
        assert val >= prev - 1e-12
        prev = val


def test_grid_refinement_never_increases_value():
    # 2s - 1 Chebyshev-Lobatto nodes contain the s-node grid, so the LP only gains rows
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(3, 12))
        alpha = int(rng.integers(45, 90))
        spec = BasisSpec.standard(n, alpha, int(rng.integers(3, 12)))
        coarse = make_grid(alpha, 40, spec)
        fine = make_grid(alpha, 79, spec)
        assert set(np.round(coarse.nodes, 12)) <= set(np.round(fine.nodes, 12))
        assert lp_value(spec, fine) <= lp_value(spec, coarse) + 1e-12


def test_certified_results_verify():
    for spec in (BasisSpec.standard(4, 70, 10, ["f-alpha"]), BasisSpec.standard(5, 80, 8, ["f-alpha"])):
        res = cardinality_bound(spec, s=300)
        assert res.certified
        rep = verify(res.certificate)
        assert rep.valid and rep.proved_bound == res.bound
        assert res.bound == math.floor(1 / res.c_star)


def test_angle_monotonicity():
    bounds = []
    for a in (60, 65, 70, 75, 80, 85, 90):
        res = cardinality_bound(BasisSpec.standard(4, a, 10, ["f-alpha"]), s=300)
        assert res.certified
        bounds.append(res.bound)
    assert bounds == sorted(bounds, reverse=True)


def test_angle_search_small():
    # four points in the plane: the square is optimal at 90 degrees
    res = max_angle_bound(2, 4, BasisSpec.standard(2, 60, 10), precision_deg=Decimal("0.1"), s=200)
    assert res.angle is not None and Decimal(90) < res.angle <= Decimal("90.1")
    assert res.result.bound <= 3


def test_angle_search_failure():
    res = max_angle_bound(3, 3, BasisSpec.standard(3, 60, 6), precision_deg=Decimal("0.5"), s=100)
    assert res.angle is None


def test_angle_search_arguments():
    with pytest.raises(ValueError):
        max_angle_bound(3, 1)
    with pytest.raises(ValueError):
        max_angle_bound(3, 5, precision_deg=Decimal("0.0001"))
