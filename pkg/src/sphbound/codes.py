"""Spherical codes, Gram matrices and the checks built on them.

A code is stored as an (N, n) array of unit rows, so ``X @ X.T`` is its
Gram matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

UNIT_TOL = 1e-12


class CodeGenerationError(RuntimeError):
    """Repulsion descent did not reach the requested separation."""


@dataclass(frozen=True)
class SphericalCode:
    n: int
    vectors: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        if X.shape[1] != self.n:
            raise ValueError(f"vectors have {X.shape[1]} components, expected {self.n}")
        norms = np.linalg.norm(X, axis=1)
        if np.any(np.abs(norms - 1) > UNIT_TOL):
            raise ValueError("all vectors must have unit length")
        object.__setattr__(self, "vectors", X)

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def min_cos(self) -> float:
        """Largest off-diagonal inner product, i.e. cos of the minimal angle."""
        if self.size < 2:
            return -1.0
        G = self.vectors @ self.vectors.T
        return float(np.max(G[~np.eye(self.size, dtype=bool)]))

    @property
    def min_angle_deg(self) -> float:
        return math.degrees(math.acos(max(-1.0, min(1.0, self.min_cos))))


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("Gram matrix must be square")
        if not np.allclose(M, M.T, atol=UNIT_TOL, rtol=0):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "matrix", M)

    def __len__(self):
        return self.matrix.shape[0]

    def apply(self, fn) -> np.ndarray:
        """Entrywise image fn(x_ij)."""
        return np.asarray(fn(self.matrix), dtype=float).reshape(self.matrix.shape)


def _normalize(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def gram(code: SphericalCode) -> GramMatrix:
    X = code.vectors
    M = X @ X.T
    M = (M + M.T) / 2
    np.fill_diagonal(M, 1.0)
    return GramMatrix(M)


def simplex_code(n: int) -> SphericalCode:
    """n+1 vertices of a regular simplex inscribed in S^{n-1}."""
    if n < 2:
        raise ValueError("need n >= 2")
    E = np.eye(n + 1) - 1.0 / (n + 1)
    # orthonormal basis of the hyperplane sum(x) = 0
    Q, _ = np.linalg.qr(E[:, :n])
    return SphericalCode(n, _normalize(E @ Q))


def cross_polytope(n: int) -> SphericalCode:
    if n < 2:
        raise ValueError("need n >= 2")
    I = np.eye(n)
    return SphericalCode(n, np.vstack([I, -I]))


def icosahedron() -> SphericalCode:
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for a in (-1, 1):
        for b in (-phi, phi):
            pts += [(0, a, b), (a, b, 0), (b, 0, a)]
    return SphericalCode(3, _normalize(np.array(pts, dtype=float)))


def random_points(n: int, N: int, rng: np.random.Generator) -> np.ndarray:
    return _normalize(rng.standard_normal((N, n)))


def random_code(n: int, N: int, alpha_deg: float, seed: int = 0, max_iter: int = 20000,
                restarts: int = 3) -> SphericalCode:
    """An (n, N, alpha) code found by pairwise-repulsion descent.

    Every step pushes apart the pairs whose inner product exceeds the target
    and projects back to the sphere.  Raises CodeGenerationError if the
    separation is not reached within the iteration budget.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    if n < 1:
        raise ValueError("need n >= 1")
    rng = np.random.default_rng(seed)
    target = math.cos(math.radians(alpha_deg))
    if N == 1:
        return SphericalCode(n, random_points(n, 1, rng))
    goal = target - 1e-9          # small safety margin below cos alpha
    aim = target - 1e-3
    off = ~np.eye(N, dtype=bool)
    for _ in range(restarts):
        X = random_points(n, N, rng)
        step = 0.2
        for _ in range(max_iter):
            G = X @ X.T
            worst = G[off].max()
            if worst <= goal:
                return SphericalCode(n, X)
            excess = np.where(off, np.maximum(G - aim, 0.0), 0.0)
            grad = excess @ X
            # tangential part only
            grad -= np.sum(grad * X, axis=1, keepdims=True) * X
            X = _normalize(X - step * grad)
            step = max(step * 0.9995, 0.01)
    raise CodeGenerationError(f"no ({n},{N},{alpha_deg}) code found from seed {seed}")


def condition_i_sum(fn, code: SphericalCode) -> float:
    """sum_{i,j} fn(<x_i, x_j>), diagonal included."""
    return float(np.sum(gram(code).apply(fn)))


def pointed_sum(fn, code: SphericalCode, center: int = 0) -> float:
    """sum_i fn(<x_0, x_i>) with x_0 = code.vectors[center], including i = 0."""
    X = code.vectors
    t = np.clip(X @ X[center], -1.0, 1.0)
    t[center] = 1.0
    return float(np.sum(np.asarray(fn(t), dtype=float)))


def min_eigenvalue(M, method: str = "eigh") -> float:
    """Smallest eigenvalue of a symmetric matrix, or a Gershgorin lower bound."""
    A = M.matrix if isinstance(M, GramMatrix) else np.asarray(M, dtype=float)
    if A.shape[0] == 0:
        raise ValueError("empty matrix")
    if method == "eigh":
        return float(np.linalg.eigvalsh((A + A.T) / 2)[0])
    if method == "gershgorin":
        radius = np.sum(np.abs(A), axis=1) - np.abs(np.diag(A))
        return float(np.min(np.diag(A) - radius))
    raise ValueError(f"unknown method {method!r}")


def write_code(code: SphericalCode, path) -> None:
    lines = [f"{code.n} {code.size}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in code.vectors]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_code(path) -> SphericalCode:
    """Parse a code file: header ``n N``, then N lines of n components."""
    rows = [ln.split() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError("first line must be 'n N'")
    n, N = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != N:
        raise ValueError(f"header announces {N} vectors, found {len(body)}")
    X = np.array([[float(x) for x in r] for r in body], dtype=float).reshape(N, -1)
    if X.shape[1] != n:
        raise ValueError(f"vectors must have {n} components")
    return SphericalCode(n, _normalize(X))
