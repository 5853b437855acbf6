"""Lagrange interpolation in Bernstein form on a triangle.

The nodes are split into collinear groups ``A_n, A_{n-1}, ..., A_0`` where
``A_j`` holds ``j + 1`` nodes on a line ``gamma_j`` and no node of a later
group lies on an earlier line. The interpolant is then built in Newton
fashion,

    p = q_n + q_{n-1} G_n + q_{n-2} G_n G_{n-1} + ... + q_0 G_n ... G_1,

where ``G_j`` is affine and vanishes on ``gamma_j`` and each ``q_j`` solves a
univariate problem on ``gamma_j`` (extended to the whole triangle). Every
stage divides the remaining data by ``G_j``, so the accuracy depends on
those values staying away from zero.

Numerical thresholds that decide whether the grouping is acceptable:
``COLLINEAR_TOL`` (relative to the triangle diameter) and
``DIVISOR_FLOOR`` (absolute, on normalised ``G_j`` values).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bb_core import (
    Triangle,
    barycentric_coords,
    bb_product_affine,
    de_casteljau_simplex,
    enumerate_multi_indices,
    simplex_size,
)
from .errors import GeometryError, PartitionError, SolvabilityError
from .newton_bernstein import leja_order, newton_bernstein

__all__ = [
    "NodePartition",
    "LineSegment",
    "bb_affine",
    "gcap_t",
    "chord",
    "transform_1d",
    "bb_extension",
    "newton_bernstein_2d",
    "NewtonBernstein2DTrace",
    "detect_partition",
]

COLLINEAR_TOL = 1e-10
DIVISOR_FLOOR = 1e-12
ZERO_TOL = 1e-12


@dataclass
class NodePartition:
    """Node groups ``A_n, ..., A_0`` with their data.

    ``groups[i]`` is a pair ``(points, values)`` where ``points`` has shape
    ``(n + 1 - i, 2)``.
    """

    groups: list[tuple[np.ndarray, np.ndarray]]

    def __post_init__(self):
        self.groups = [
            (np.asarray(p, dtype=float).reshape(-1, 2), np.asarray(v, dtype=float).reshape(-1))
            for p, v in self.groups
        ]

    @property
    def degree(self) -> int:
        return len(self.groups) - 1

    def points(self) -> np.ndarray:
        return np.concatenate([p for p, _ in self.groups])

    def values(self) -> np.ndarray:
        return np.concatenate([v for _, v in self.groups])

    def validate(self, tri: Triangle | None = None, tol: float = COLLINEAR_TOL) -> None:
        """Check group sizes, collinearity and that no node lies on an earlier line."""
        n = self.degree
        scale = tri.diameter if tri is not None else max(1.0, float(np.ptp(self.points(), axis=0).max()))
        lines = []
        for i, (pts, vals) in enumerate(self.groups):
            j = n - i
            if pts.shape[0] != j + 1 or vals.shape[0] != j + 1:
                raise PartitionError(f"group A_{j} must hold {j + 1} nodes, got {pts.shape[0]}")
            for normal, offset in lines:
                if np.any(np.abs(pts @ normal - offset) <= tol * scale):
                    raise PartitionError(f"a node of A_{j} lies on the line of an earlier group")
            if j >= 1:
                normal, offset, resid = _fit_line(pts)
                if resid > tol * scale:
                    raise PartitionError(f"nodes of A_{j} are not collinear (residual {resid:.3g})")
                lines.append((normal, offset))
        pts = self.points()
        if len(pts) > 1:
            gaps = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
            np.fill_diagonal(gaps, np.inf)
            if gaps.min() <= tol * scale:
                raise PartitionError("interpolation nodes are not distinct")


@dataclass(frozen=True)
class LineSegment:
    """The chord ``conv{z1, z2}`` cut from a triangle by a line.

    ``kappa`` is the 0-based index of the vertex the line separates from
    the other two; ``z1`` and ``z2`` lie on the two edges that meet at it.
    """

    z1: tuple[float, float]
    z2: tuple[float, float]
    kappa: int


def _fit_line(pts: np.ndarray):
    """Total-least-squares line ``normal . x = offset`` with unit normal.

    The normal is oriented so its first nonzero component is positive.
    Returns the largest absolute distance of a point from the line too.
    """
    centroid = pts.mean(axis=0)
    _, _, vt = np.linalg.svd(pts - centroid)
    normal = vt[-1]
    if normal[0] < -ZERO_TOL or (abs(normal[0]) <= ZERO_TOL and normal[1] < 0):
        normal = -normal
    offset = float(normal @ centroid)
    resid = float(np.max(np.abs(pts @ normal - offset)))
    return normal, offset, resid


def bb_affine(points, tri: Triangle) -> np.ndarray:
    """Degree-1 Bernstein coefficients of an affine function vanishing on the group's line.

    The coefficients are the function's values at the triangle vertices,
    scaled so the largest has magnitude one.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 2:
        raise PartitionError("a line needs at least two nodes")
    normal, offset, resid = _fit_line(pts)
    if resid > COLLINEAR_TOL * tri.diameter:
        raise PartitionError(f"nodes are not collinear (residual {resid:.3g})")
    g = np.array([normal @ np.asarray(v, dtype=float) - offset for v in tri.vertices])
    return g / np.max(np.abs(g))


def _edge_point(g: np.ndarray, k: int, tri: Triangle):
    """Zero of the affine function on the edge opposite vertex ``k``, or ``None``."""
    a, b = (k + 1) % 3, (k + 2) % 3
    denom = g[b] - g[a]
    if abs(denom) <= ZERO_TOL:
        return None
    lam = [0.0, 0.0, 0.0]
    lam[a] = g[b] / denom
    lam[b] = -g[a] / denom
    if min(lam[a], lam[b]) < -ZERO_TOL:
        return None
    return tuple(float(c) for c in tri.point(lam))


def gcap_t(g, tri: Triangle) -> LineSegment:
    """Intersect the zero line of the affine function ``g`` with the triangle.

    For each vertex ``k`` solve ``lambda_k = 0``, ``sum g_i lambda_i = 0``,
    ``sum lambda_i = 1`` with ``0 <= lambda <= 1``. A line through the
    interior is solvable for exactly two ``k``; the third is ``kappa``, and
    ``z1``, ``z2`` come from ``kappa + 1`` and ``kappa + 2`` (cyclically).
    """
    g = np.asarray(g, dtype=float)
    if np.sum(np.abs(g) <= ZERO_TOL) >= 2:
        raise GeometryError("line contains a triangle edge")
    hits = {k: _edge_point(g, k, tri) for k in range(3)}
    missing = [k for k, z in hits.items() if z is None]
    if len(missing) != 1:
        raise GeometryError(
            "line misses the triangle" if len(missing) > 1 else "line passes through a vertex"
        )
    kappa = missing[0]
    return LineSegment(hits[(kappa + 1) % 3], hits[(kappa + 2) % 3], kappa)


def chord(g, tri: Triangle) -> LineSegment:
    """Like :func:`gcap_t`, but also accepts a line containing a triangle edge.

    For an edge line ``kappa`` is the opposite vertex and the chord is the
    edge itself.
    """
    g = np.asarray(g, dtype=float)
    zero = np.abs(g) <= ZERO_TOL
    if zero.sum() == 2:
        kappa = int(np.argmin(zero))
        v = tri.vertices
        return LineSegment(
            tuple(map(float, v[(kappa + 1) % 3])), tuple(map(float, v[(kappa + 2) % 3])), kappa
        )
    return gcap_t(g, tri)


def transform_1d(points, seg: LineSegment, tol: float = 1e-10) -> np.ndarray:
    """Parameters ``|x - z1| / |z2 - z1|`` of points on the chord."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    z1 = np.asarray(seg.z1, dtype=float)
    z2 = np.asarray(seg.z2, dtype=float)
    t = np.linalg.norm(pts - z1, axis=1) / np.linalg.norm(z2 - z1)
    if np.any(t > 1.0 + tol):
        raise PartitionError("node lies outside the triangle on its line")
    return np.minimum(t, 1.0)


def _segment_pairing(seg: LineSegment, tri: Triangle):
    """Barycentric indices ``(p, q)``: ``p`` vanishes at ``z2``, ``q`` at ``z1``, plus the divisors."""
    lam1 = barycentric_coords(tri, seg.z1)
    lam2 = barycentric_coords(tri, seg.z2)
    a, b = (seg.kappa + 1) % 3, (seg.kappa + 2) % 3
    p, q = (a, b) if abs(lam2[a]) <= abs(lam2[b]) else (b, a)
    sp, sq = float(lam1[p]), float(lam2[q])
    if abs(sp) <= ZERO_TOL or abs(sq) <= ZERO_TOL:
        raise GeometryError("chord end points do not match the isolated vertex")
    return p, q, sp, sq


def bb_extension(cgamma, seg: LineSegment, tri: Triangle) -> np.ndarray:
    """Extend a univariate Bernstein form on the chord to the triangle.

    ``cgamma[k]`` multiplies ``(1 - t)^(j - k) t^k`` with ``t`` running
    from ``z1`` to ``z2``. On the chord, ``1 - t`` equals
    ``lambda_p / lambda_p(z1)`` and ``t`` equals ``lambda_q / lambda_q(z2)``
    for the two barycentric coordinates other than ``kappa``; substituting
    gives nonzero coefficients only where ``alpha_kappa = 0``. The
    extension agrees with the univariate polynomial on the line.
    """
    cg = np.asarray(cgamma, dtype=float)
    j = cg.shape[0] - 1
    p, q, sp, sq = _segment_pairing(seg, tri)
    out = np.zeros((simplex_size(j),) + cg.shape[1:])
    for pos, alpha in enumerate(enumerate_multi_indices(2, j)):
        if alpha[seg.kappa] == 0:
            out[pos] = cg[alpha[q]] * sp ** (-alpha[p]) * sq ** (-alpha[q])
    return out


@dataclass
class NewtonBernstein2DTrace:
    """Intermediate quantities of one :func:`newton_bernstein_2d` run, for diagnostics."""

    lines: list[np.ndarray] = field(default_factory=list)
    segments: list[LineSegment] = field(default_factory=list)
    line_params: list[np.ndarray] = field(default_factory=list)
    line_data: list[np.ndarray] = field(default_factory=list)
    line_coeffs: list[np.ndarray] = field(default_factory=list)
    extensions: list[np.ndarray] = field(default_factory=list)


def _line_solve(t: np.ndarray, vals: np.ndarray, ordering: str) -> np.ndarray:
    if ordering == "ascending":
        perm = np.argsort(t, kind="stable")
    elif ordering == "leja":
        perm = leja_order(t)
    else:
        perm = np.arange(t.size)
    return newton_bernstein(t[perm], vals[perm])


def newton_bernstein_2d(
    partition: NodePartition,
    tri: Triangle,
    *,
    ordering: str = "given",
    trace: NewtonBernstein2DTrace | None = None,
) -> np.ndarray:
    """Control points (canonical order) of the degree-``n`` interpolant on ``tri``.

    For ``j = n, ..., 1``: fit ``G_j`` to ``A_j``, cut the chord, solve the
    univariate problem there, extend it to ``q_j``, add
    ``q_j * G_{j+1} * ... * G_n`` to the result, and replace every remaining
    datum ``f_i`` by ``(f_i - q_j(x_i)) / G_j(x_i)``. The single value left
    for ``A_0`` is the constant ``q_0``.

    ``ordering`` ("given", "ascending" or "leja") orders the nodes of each
    univariate line solve.
    """
    n = partition.degree
    groups = [(p.copy(), v.copy()) for p, v in partition.groups]
    bary = [np.array([barycentric_coords(tri, x) for x in p], dtype=float) for p, _ in groups]
    result = np.zeros(simplex_size(n))
    g_list: list[np.ndarray] = []  # G_n, G_{n-1}, ...
    for i in range(n):
        j = n - i
        pts, vals = groups[i]
        if pts.shape[0] != j + 1:
            raise PartitionError(f"group A_{j} must hold {j + 1} nodes")
        g = bb_affine(pts, tri)
        seg = chord(g, tri)
        t = transform_1d(pts, seg)
        cgamma = _line_solve(t, vals, ordering)
        cq = bb_extension(cgamma, seg, tri)
        term = cq
        for g_later in reversed(g_list):  # G_{j+1}, ..., G_n
            term = bb_product_affine(term, g_later)
        result += term
        g_list.append(g)
        if trace is not None:
            trace.lines.append(g)
            trace.segments.append(seg)
            trace.line_params.append(t)
            trace.line_data.append(vals.copy())
            trace.line_coeffs.append(cgamma)
            trace.extensions.append(cq)
        for r in range(i + 1, n + 1):
            lam = bary[r]
            gamma_vals = lam @ g
            if np.any(np.abs(gamma_vals) < DIVISOR_FLOOR):
                raise SolvabilityError(f"a node of A_{n - r} lies on the line of A_{j}")
            q_vals = np.array([de_casteljau_simplex(cq, l) for l in lam])
            groups[r] = (groups[r][0], (groups[r][1] - q_vals) / gamma_vals)
    pts0, vals0 = groups[n]
    if pts0.shape[0] != 1:
        raise PartitionError("group A_0 must hold exactly one node")
    term = np.array([vals0[0]])
    for g_later in reversed(g_list):  # G_1, ..., G_n
        term = bb_product_affine(term, g_later)
    result += term
    return result


def detect_partition(points, values, tol: float = COLLINEAR_TOL) -> NodePartition:
    """Search for a collinear grouping ``A_n, ..., A_0`` of the nodes.

    Depth-first over lines through pairs of remaining nodes: ``A_j`` must be
    exactly the remaining nodes on one line, and must number ``j + 1``.
    Pairs are tried in index order, so the result is deterministic.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    vals = np.asarray(values, dtype=float).reshape(-1)
    if pts.shape[0] != vals.shape[0]:
        raise PartitionError("need one datum per node")
    n = 0
    while simplex_size(n) < pts.shape[0]:
        n += 1
    if simplex_size(n) != pts.shape[0]:
        raise PartitionError(f"{pts.shape[0]} nodes is not a triangular number")
    scale = max(1.0, float(np.ptp(pts, axis=0).max())) if len(pts) else 1.0

    def on_line(idx, a, b):
        d = pts[b] - pts[a]
        length = math.hypot(*d)
        rel = pts[idx] - pts[a]
        return np.abs(d[0] * rel[:, 1] - d[1] * rel[:, 0]) / length <= tol * scale

    def search(remaining: list[int], j: int):
        if j == 0:
            return [[remaining[0]]] if len(remaining) == 1 else None
        rem = np.array(remaining)
        tried = set()
        for a, b in itertools.combinations(remaining, 2):
            members = tuple(rem[on_line(rem, a, b)])
            if len(members) != j + 1 or members in tried:
                continue
            tried.add(members)
            rest = [k for k in remaining if k not in members]
            sub = search(rest, j - 1)
            if sub is not None:
                return [list(members)] + sub
        return None

    found = search(list(range(pts.shape[0])), n)
    if found is None:
        raise PartitionError("nodes admit no collinear grouping A_n, ..., A_0")
    return NodePartition([(pts[g], vals[g]) for g in found])
