"""Bernstein basis primitives on [0, 1] and on simplices.

Coefficient arrays are plain numpy arrays. Univariate control points are
indexed ``c[0..n]``; simplex control points are stored densely in the
canonical multi-index order returned by :func:`enumerate_multi_indices`.
Object arrays of :class:`fractions.Fraction` pass through the evaluation
routines unchanged, which the exact oracle relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import GeometryError

__all__ = [
    "Triangle",
    "bernstein_eval_1d",
    "bernstein_basis_1d",
    "de_casteljau_1d",
    "degree_raise_1d",
    "enumerate_multi_indices",
    "multi_index_position",
    "multinomial",
    "simplex_size",
    "simplex_degree",
    "barycentric_coords",
    "de_casteljau_simplex",
    "bernstein_eval_simplex",
    "bb_product_affine",
]


def _as_coeffs(c) -> np.ndarray:
    arr = np.asarray(c)
    if arr.dtype.kind in "iub":
        arr = arr.astype(float)
    return arr


# -- univariate -------------------------------------------------------------


def bernstein_eval_1d(n: int, k: int, x: float) -> float:
    """Evaluate ``B_k^n(x) = C(n, k) (1 - x)^(n - k) x^k``."""
    if not 0 <= k <= n:
        raise IndexError(f"Bernstein index k={k} outside 0..{n}")
    return math.comb(n, k) * (1 - x) ** (n - k) * x**k


def bernstein_basis_1d(n: int, x) -> np.ndarray:
    """All degree-``n`` Bernstein polynomials at the points ``x``.

    Returns an array of shape ``(len(x), n + 1)`` (or ``(n + 1,)`` for a
    scalar ``x``).
    """
    x = np.asarray(x, dtype=float)
    k = np.arange(n + 1)
    binom = np.array([math.comb(n, i) for i in k], dtype=float)
    xe = x[..., None]
    return binom * (1.0 - xe) ** (n - k) * xe**k


def de_casteljau_1d(c, x):
    """Evaluate ``sum_k c_k B_k^n(x)`` by repeated convex combination.

    ``c`` may carry trailing axes (vector-valued control points); the
    result then has those trailing axes.
    """
    b = _as_coeffs(c).copy()
    one_minus = 1 - x
    for r in range(b.shape[0] - 1, 0, -1):
        b[:r] = one_minus * b[:r] + x * b[1 : r + 1]
    return b[0]


def degree_raise_1d(c) -> np.ndarray:
    """Rewrite a degree-``n`` Bernstein form as the same polynomial of degree ``n + 1``."""
    c = _as_coeffs(c)
    k = c.shape[0]  # new degree n + 1
    out = np.zeros((k + 1,) + c.shape[1:], dtype=c.dtype)
    j = np.arange(k + 1).reshape((-1,) + (1,) * (c.ndim - 1))
    out[1:] += (j[1:] / k) * c
    out[:-1] += ((k - j[:-1]) / k) * c
    return out


# -- multi-indices ----------------------------------------------------------


def simplex_size(n: int, d: int = 2) -> int:
    """Number of multi-indices with ``d + 1`` parts summing to ``n``."""
    return math.comb(n + d, d)


def simplex_degree(size: int, d: int = 2) -> int:
    n = 0
    while simplex_size(n, d) < size:
        n += 1
    if simplex_size(n, d) != size:
        raise ValueError(f"{size} coefficients do not form a complete degree on a {d}-simplex")
    return n


@lru_cache(maxsize=None)
def enumerate_multi_indices(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All ``alpha`` with ``d + 1`` nonnegative parts and ``|alpha| = n``.

    Ordered lexicographically descending: ``alpha_1`` first, then
    ``alpha_2``, and so on. This order is the storage contract for simplex
    coefficients.
    """
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")

    def rec(parts_left: int, total: int):
        if parts_left == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in rec(parts_left - 1, total - first):
                yield (first,) + rest

    return tuple(rec(d + 1, n))


@lru_cache(maxsize=None)
def _position_table(d: int, n: int) -> dict[tuple[int, ...], int]:
    return {alpha: i for i, alpha in enumerate(enumerate_multi_indices(d, n))}


def multi_index_position(alpha: Sequence[int]) -> int:
    alpha = tuple(alpha)
    return _position_table(len(alpha) - 1, sum(alpha))[alpha]


def multinomial(alpha: Sequence[int]) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


@lru_cache(maxsize=None)
def _raise_table(d: int, m: int) -> np.ndarray:
    """Positions of ``beta + e_k`` in degree ``m + 1`` for every ``beta`` of degree ``m``."""
    pos = _position_table(d, m + 1)
    rows = []
    for beta in enumerate_multi_indices(d, m):
        row = []
        for k in range(d + 1):
            up = list(beta)
            up[k] += 1
            row.append(pos[tuple(up)])
        rows.append(row)
    return np.array(rows, dtype=np.intp).reshape(-1, d + 1)


@lru_cache(maxsize=None)
def _lower_table(d: int, m: int) -> np.ndarray:
    """Positions of ``alpha - e_k`` in degree ``m - 1`` for ``alpha`` of degree ``m``; -1 if negative."""
    pos = _position_table(d, m - 1)
    rows = []
    for alpha in enumerate_multi_indices(d, m):
        row = []
        for k in range(d + 1):
            if alpha[k] == 0:
                row.append(-1)
            else:
                down = list(alpha)
                down[k] -= 1
                row.append(pos[tuple(down)])
        rows.append(row)
    return np.array(rows, dtype=np.intp).reshape(-1, d + 1)


# -- triangles and barycentric coordinates ----------------------------------


@dataclass(frozen=True)
class Triangle:
    """A non-degenerate triangle in the plane.

    Coordinates may be floats or :class:`fractions.Fraction`; rational
    triangles give rational barycentric coordinates.
    """

    v1: tuple
    v2: tuple
    v3: tuple

    def __post_init__(self):
        for name in ("v1", "v2", "v3"):
            v = tuple(getattr(self, name))
            if len(v) != 2:
                raise GeometryError(f"vertex {name} must have two coordinates")
            object.__setattr__(self, name, v)
        area2 = self.signed_area2
        diam2 = max(
            (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2
            for a, b in ((self.v1, self.v2), (self.v2, self.v3), (self.v3, self.v1))
        )
        if abs(float(area2)) < 1e-14 * float(diam2) or diam2 == 0:
            raise GeometryError("degenerate triangle (vertices are collinear)")

    @classmethod
    def unit(cls) -> "Triangle":
        return cls((0, 0), (1, 0), (0, 1))

    @property
    def vertices(self) -> tuple:
        return (self.v1, self.v2, self.v3)

    @property
    def signed_area2(self):
        (x1, y1), (x2, y2), (x3, y3) = self.vertices
        return (x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)

    @property
    def diameter(self) -> float:
        return max(
            math.dist(tuple(map(float, a)), tuple(map(float, b)))
            for a, b in ((self.v1, self.v2), (self.v2, self.v3), (self.v3, self.v1))
        )

    def point(self, lam):
        """Cartesian point with barycentric coordinates ``lam``."""
        return (
            sum(l * v[0] for l, v in zip(lam, self.vertices)),
            sum(l * v[1] for l, v in zip(lam, self.vertices)),
        )

    def affine_image(self, mat, shift) -> "Triangle":
        def f(v):
            return (
                mat[0][0] * v[0] + mat[0][1] * v[1] + shift[0],
                mat[1][0] * v[0] + mat[1][1] * v[1] + shift[1],
            )

        return Triangle(f(self.v1), f(self.v2), f(self.v3))


def barycentric_coords(tri: Triangle, x) -> tuple:
    """Barycentric coordinates of the planar point ``x`` relative to ``tri``.

    Explicit cofactor solve of the 2x2 affine system; exact for rational
    input. Points outside the triangle get negative components.
    """
    (x1, y1), (x2, y2), (x3, y3) = tri.vertices
    px, py = x[0], x[1]
    det = tri.signed_area2
    l2 = ((px - x1) * (y3 - y1) - (x3 - x1) * (py - y1)) / det
    l3 = ((x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)) / det
    return (1 - l2 - l3, l2, l3)


# -- simplex evaluation and products -----------------------------------------


def de_casteljau_simplex(c, lam, d: int | None = None):
    """Evaluate a simplex Bernstein form at barycentric point ``lam``.

    ``c`` holds the coefficients in canonical order. Each de Casteljau level
    replaces the degree-``m + 1`` net by ``sum_k lam_k c_{beta + e_k}``.
    """
    lam = np.asarray(lam) if not isinstance(lam, np.ndarray) else lam
    if d is None:
        d = len(lam) - 1
    b = _as_coeffs(c)
    n = simplex_degree(b.shape[0], d)
    if lam.dtype == object:
        weights = lam
    else:
        weights = lam.astype(float)
    for m in range(n - 1, -1, -1):
        b = b[_raise_table(d, m)] @ weights
    return b[0]


def bernstein_eval_simplex(alpha: Sequence[int], lam) -> float:
    """``B_alpha^n(lam) = multinomial(alpha) * prod lam_k^alpha_k``."""
    out = multinomial(alpha)
    for l, a in zip(lam, alpha):
        out = out * l**a
    return out


def bb_product_affine(c, g) -> np.ndarray:
    """Bernstein coefficients of ``q * Gamma``.

    ``c`` are the degree-``j`` coefficients of ``q``; ``g`` holds the
    degree-1 coefficients of the affine ``Gamma`` (its vertex values).
    ``a_alpha = sum_k c_{alpha - e_k} g_k alpha_k / (j + 1)``.
    """
    c = _as_coeffs(c)
    g = list(g)
    d = len(g) - 1
    j = simplex_degree(c.shape[0], d)
    lower = _lower_table(d, j + 1)
    alphas = np.array(enumerate_multi_indices(d, j + 1), dtype=float)
    out = np.zeros(lower.shape[0], dtype=c.dtype)
    for k in range(d + 1):
        mask = lower[:, k] >= 0
        out[mask] = out[mask] + c[lower[mask, k]] * (g[k] * alphas[mask, k] / (j + 1))
    return out
