import math

import numpy as np
import pytest

from sphbound.codes import (
    CodeGenerationError,
    GramMatrix,
    SphericalCode,
    condition_i_sum,
    cross_polytope,
    gram,
    icosahedron,
    min_eigenvalue,
    pointed_sum,
    random_code,
    random_points,
    read_code,
    simplex_code,
    write_code,
)
from sphbound.funspace import f_alpha, g_beta, musin_hat
from sphbound.polycore import gegenbauer_eval

F60 = lambda t: f_alpha(0.5, t)
INV_SQRT5 = 1 / math.sqrt(5)


def off_diagonal(M):
    return M[~np.eye(len(M), dtype=bool)]


def separated_codes(cases, alpha=60, count=100):
    """Yield ``count`` random alpha-separated codes, skipping failed generations."""
    seed = 0
    made = 0
    while made < count:
        n, N = cases[seed % len(cases)]
        seed += 1
        try:
            yield random_code(n, N, alpha, seed=seed, max_iter=4000, restarts=1)
        except CodeGenerationError:
            continue
        made += 1
        assert seed < 20 * count


def test_fixtures():
    assert np.allclose(off_diagonal(gram(simplex_code(3)).matrix), -1 / 3)
    assert set(np.round(off_diagonal(gram(cross_polytope(4)).matrix), 12)) <= {0.0, -1.0}
    single = SphericalCode(3, [[0.0, 0.0, 1.0]])
    assert gram(single).matrix.tolist() == [[1.0]]
    s9 = simplex_code(9)
    assert s9.size == 10 and s9.min_cos == pytest.approx(-1 / 9)
    c3 = cross_polytope(3)
    assert c3.size == 6 and c3.min_cos == 0
    ico = icosahedron()
    assert ico.min_cos == pytest.approx(INV_SQRT5)
    assert ico.min_angle_deg == pytest.approx(63.4349, abs=1e-4)
    vals = off_diagonal(gram(ico).matrix)
    assert np.all(np.min(np.abs(vals[:, None] - np.array([INV_SQRT5, -INV_SQRT5, -1.0])), axis=1) < 1e-12)


def test_gram_diagonal_and_symmetry():
    M = gram(random_code(4, 9, 0, seed=3)).matrix
    assert np.all(np.diag(M) == 1.0)
    assert np.array_equal(M, M.T)


def test_code_validation():
    with pytest.raises(ValueError):
        SphericalCode(3, [[1.0, 1.0, 0.0]])
    with pytest.raises(ValueError):
        SphericalCode(2, [[1.0, 0.0, 0.0]])
    with pytest.raises(ValueError):
        GramMatrix([[1.0, 0.2], [0.1, 1.0]])


def test_random_code_examples():
    c = random_code(5, 10, 60, seed=1)
    assert c.size == 10 and c.min_cos <= 0.5
    assert random_code(5, 10, 60, seed=1).vectors.tolist() == c.vectors.tolist()
    with pytest.raises(CodeGenerationError):
        random_code(2, 100, 60, seed=4, max_iter=500, restarts=1)
    one = random_code(3, 1, 45, seed=2)
    assert one.size == 1 and abs(np.linalg.norm(one.vectors[0]) - 1) < 1e-12


def test_condition_i_examples():
    assert condition_i_sum(F60, SphericalCode(3, [[1.0, 0.0, 0.0]])) == 1
    assert condition_i_sum(F60, icosahedron()) >= 0
    assert condition_i_sum(lambda t: gegenbauer_eval(3, 2, t), icosahedron()) >= -1e-12


def test_min_eigenvalue_examples():
    assert min_eigenvalue(gram(cross_polytope(5)).matrix[:5, :5]) == pytest.approx(1.0)
    rng = np.random.default_rng(0)
    M = gram(SphericalCode(4, random_points(4, 6, rng)))
    ev = np.linalg.eigvalsh(M.matrix)
    assert min_eigenvalue(M) >= -1e-9 and np.sum(np.abs(ev) < 1e-9) >= 2
    G3 = gram(icosahedron()).apply(lambda t: gegenbauer_eval(3, 3, t))
    assert min_eigenvalue(G3) >= -1e-8
    D = np.array([[2.0, -1.0], [-1.0, 2.0]])
    assert min_eigenvalue(D, "gershgorin") == 1.0 <= min_eigenvalue(D)
    with pytest.raises(ValueError):
        min_eigenvalue(D, "power")


def test_schoenberg_suite():
    rng = np.random.default_rng(17)
    for i in range(100):
        n = (3, 4, 5, 10)[i % 4]
        N = int(rng.integers(1, 2 * n + 3))
        M = gram(SphericalCode(n, random_points(n, N, rng)))
        for k in range(11):
            assert min_eigenvalue(M.apply(lambda t: gegenbauer_eval(n, k, t))) >= -1e-8


def test_f_alpha_diagonal_dominance():
    cases = [(3, 8), (3, 12), (4, 12), (4, 18), (5, 16), (8, 30)]
    for code in separated_codes(cases):
        F = gram(code).apply(F60)
        off = np.abs(F).sum(axis=1) - np.abs(np.diag(F))
        assert np.all(off <= 1 + 1e-12)
        assert np.all(F.sum(axis=1) >= -1e-12)
        assert min_eigenvalue(F, "gershgorin") >= -1e-12


@pytest.mark.parametrize("beta", [math.pi / 3, math.pi / 4])
def test_g_beta_sum(beta):
    rng = np.random.default_rng(23)
    cb = math.cos(beta)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        N = int(rng.integers(1, 25))
        code = SphericalCode(n, random_points(n, N, rng))
        total = condition_i_sum(lambda t: g_beta(cb, t), code)
        assert total == int(total) and total >= 0


def test_pointed_form_f_alpha():
    cases = [(3, 12), (4, 20), (5, 12), (6, 20)]
    for i, code in enumerate(separated_codes(cases)):
        assert pointed_sum(F60, code, center=i % code.size) >= -1e-12


@pytest.mark.parametrize("dim, sizes", [(3, (6, 9, 12)), (4, (10, 16, 20))])
def test_pointed_form_musin(dim, sizes):
    fn = lambda t: musin_hat(dim, t)
    for i, code in enumerate(separated_codes([(dim, N) for N in sizes])):
        assert pointed_sum(fn, code, center=i % code.size) >= -1e-12


def test_code_file_round_trip(tmp_path):
    code = random_code(4, 7, 50, seed=8)
    path = tmp_path / "code.txt"
    write_code(code, path)
    assert path.read_text().splitlines()[0] == "4 7"
    back = read_code(path)
    assert np.allclose(back.vectors, code.vectors, atol=1e-15)


@pytest.mark.parametrize("text", ["3\n1 0 0\n", "3 2\n1 0 0\n", "3 1\n1 0\n"])
def test_code_file_errors(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ValueError):
        read_code(path)
