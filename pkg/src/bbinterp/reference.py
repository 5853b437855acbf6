"""Reference solvers and ground truth.

* Bernstein-Vandermonde assembly (univariate, tensor, triangle), oriented
  as ``A[i, j] = B_i(x_j)`` so the interpolation system is ``A.T c = f``.
* Dense LU with partial pivoting (LAPACK via scipy) as the naive baseline.
* One-sided Jacobi SVD and 2-norm condition numbers.
* Exact rational solves by fraction-free (Bareiss) elimination, and an
  extended-precision channel (mpmath) for irrational or very large
  problems.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from functools import reduce
from typing import Sequence

import mpmath
import numpy as np
import scipy.linalg

from .bb_core import Triangle, barycentric_coords, enumerate_multi_indices, multinomial
from .errors import ConvergenceError, SingularMatrixError, ValidationError

__all__ = [
    "assemble_bv_matrix",
    "assemble_tensor_bv_matrix",
    "assemble_simplex_bv_matrix",
    "lu_solve",
    "jacobi_svd",
    "condition_number",
    "bareiss_solve",
    "exact_bv_matrix",
    "exact_solve_1d",
    "exact_solve_tensor",
    "exact_solve_simplex",
    "exact_solve_rational",
    "exact_de_casteljau_1d",
    "extended_solve_1d",
    "extended_solve_tensor",
    "relative_error",
    "to_fraction",
]


def to_fraction(v) -> Fraction:
    """Exact rational value of ``v`` (floats convert without rounding)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(float(v))


# -- assembly ---------------------------------------------------------------


def assemble_bv_matrix(nodes) -> np.ndarray:
    """``A[i, j] = C(n, i) (1 - x_j)^(n - i) x_j^i`` for ``n + 1`` nodes."""
    x = np.asarray(nodes, dtype=float)
    n = x.size - 1
    i = np.arange(n + 1)[:, None]
    binom = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)[:, None]
    return binom * (1.0 - x[None, :]) ** (n - i) * x[None, :] ** i


def assemble_tensor_bv_matrix(axes: Sequence) -> np.ndarray:
    """Kronecker product of the per-axis matrices (x slowest, matching row-major data)."""
    return reduce(np.kron, [assemble_bv_matrix(a) for a in axes])


def assemble_simplex_bv_matrix(points, tri: Triangle, n: int) -> np.ndarray:
    """``A[alpha, j] = B_alpha^n(lambda(x_j))`` in canonical multi-index order."""
    alphas = enumerate_multi_indices(2, n)
    lam = np.array([barycentric_coords(tri, p) for p in points], dtype=float)
    A = np.empty((len(alphas), len(points)))
    for r, alpha in enumerate(alphas):
        A[r] = multinomial(alpha) * np.prod(lam ** np.array(alpha, dtype=float), axis=1)
    return A


# -- floating baselines -----------------------------------------------------


def lu_solve(A, f) -> np.ndarray:
    """Solve ``A x = f`` by LU with partial pivoting."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("lu_solve needs a square matrix")
    with warnings.catch_warnings():
        # an exactly zero pivot is reported below as an error
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError("zero pivot in LU factorisation")
    return scipy.linalg.lu_solve((lu, piv), np.asarray(f, dtype=float))


def _round_robin(n: int):
    """Pairings for a round-robin tournament on ``n`` players (``n`` even)."""
    players = list(range(n))
    for _ in range(n - 1):
        yield [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_svd(A, *, tol: float = 1e-14, max_sweeps: int = 60, precondition: bool = True):
    """Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

    Columns are orthogonalised pairwise until every pair satisfies
    ``|u_p . u_q| <= tol * |u_p| |u_q|``. Disjoint pairs of one round-robin
    round are rotated together. With ``precondition`` the rotations act on
    ``R.T`` from a column-pivoted QR of ``A``, which cuts the number of
    sweeps severalfold.

    Returns
    -------
    U : ndarray (m, n)
    s : ndarray (n,)
        Singular values, descending.
    V : ndarray (n, n)
        With ``A = U diag(s) V.T``.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2:
        raise ValidationError("jacobi_svd needs a matrix")
    m, n = A.shape
    if m < n:
        V, s, U = jacobi_svd(A.T, tol=tol, max_sweeps=max_sweeps, precondition=precondition)
        return U, s, V
    if precondition and n > 2:
        # A P = Q R and R.T = U' S V'.T give A = (Q V') S (P U').T
        Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
        Ur, s, Vr = jacobi_svd(R.T, tol=tol, max_sweeps=max_sweeps, precondition=False)
        V = np.empty_like(Ur)
        V[perm] = Ur
        return Q @ Vr, s, V
    U = A.copy()
    V = np.eye(n)
    size = n + (n % 2)
    for _ in range(max_sweeps):
        rotated = False
        for pairs in _round_robin(size):
            pairs = [(p, q) for p, q in pairs if p < n and q < n]
            if not pairs:
                continue
            P = np.array([min(p, q) for p, q in pairs])
            Q = np.array([max(p, q) for p, q in pairs])
            up, uq = U[:, P], U[:, Q]
            alpha = np.einsum("ij,ij->j", up, up)
            beta = np.einsum("ij,ij->j", uq, uq)
            gamma = np.einsum("ij,ij->j", up, uq)
            act = np.abs(gamma) > tol * np.sqrt(alpha * beta)
            if not np.any(act):
                continue
            rotated = True
            P, Q = P[act], Q[act]
            alpha, beta, gamma = alpha[act], beta[act], gamma[act]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            up, uq = U[:, P], U[:, Q]
            U[:, P] = c * up - s * uq
            U[:, Q] = s * up + c * uq
            vp, vq = V[:, P], V[:, Q]
            V[:, P] = c * vp - s * vq
            V[:, Q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(U, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, U, V = sigma[order], U[:, order], V[:, order]
    nz = sigma > 0
    U[:, nz] /= sigma[nz]
    return U, sigma, V


def condition_number(A) -> float:
    """2-norm condition number ``sigma_max / sigma_min``; ``inf`` when singular."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("condition number needs a square matrix")
    _, s, _ = jacobi_svd(A)
    if s[-1] == 0.0:
        return math.inf
    return float(s[0] / s[-1])


def relative_error(exact, approx) -> float:
    """``||exact - approx||_2 / ||exact||_2`` over all entries."""
    e = np.asarray(exact, dtype=float).ravel()
    a = np.asarray(approx, dtype=float).ravel()
    if e.shape != a.shape:
        raise ValidationError("relative_error needs vectors of equal length")
    norm = np.linalg.norm(e)
    if norm == 0.0:
        raise ValidationError("relative error undefined for a zero exact vector")
    return float(np.linalg.norm(e - a) / norm)


# -- exact rational channel ---------------------------------------------------


def bareiss_solve(M: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve ``M X = rhs`` exactly; ``rhs`` is a list of rows (one column per right-hand side).

    Rows are scaled to integers, reduced by Bareiss fraction-free
    elimination (all intermediate divisions exact), then back-substituted
    in rationals.
    """
    n = len(M)
    if any(len(row) != n for row in M) or len(rhs) != n:
        raise ValidationError("bareiss_solve needs a square system")
    k_rhs = len(rhs[0]) if n else 0
    aug = []
    for row, b in zip(M, rhs):
        entries = [to_fraction(v) for v in row] + [to_fraction(v) for v in b]
        scale = reduce(math.lcm, (e.denominator for e in entries), 1)
        aug.append([int(e * scale) for e in entries])
    width = n + k_rhs
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for r in range(k + 1, n):
                if aug[r][k] != 0:
                    aug[k], aug[r] = aug[r], aug[k]
                    break
            else:
                raise SingularMatrixError("matrix is exactly singular")
        pivot = aug[k][k]
        rowk = aug[k]
        for i in range(k + 1, n):
            rowi = aug[i]
            lead = rowi[k]
            for j in range(k + 1, width):
                rowi[j] = (rowi[j] * pivot - lead * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    X = [[Fraction(0)] * k_rhs for _ in range(n)]
    for col in range(k_rhs):
        for i in range(n - 1, -1, -1):
            acc = Fraction(aug[i][n + col])
            for j in range(i + 1, n):
                acc -= aug[i][j] * X[j][col]
            X[i][col] = acc / aug[i][i]
    return X


def exact_bv_matrix(nodes) -> list[list[Fraction]]:
    """Rational ``A[i][j] = B_i^n(x_j)``."""
    x = [to_fraction(v) for v in nodes]
    n = len(x) - 1
    return [[math.comb(n, i) * (1 - xj) ** (n - i) * xj**i for xj in x] for i in range(n + 1)]


def _transpose(M):
    return [list(col) for col in zip(*M)]


def _check_distinct(x: list[Fraction]) -> None:
    if len(set(x)) != len(x):
        raise SingularMatrixError("duplicate nodes make the system singular")


def exact_solve_1d(nodes, f) -> list:
    """Exact control points for univariate data; ``f`` may be vector valued (rows)."""
    x = [to_fraction(v) for v in nodes]
    _check_distinct(x)
    rows = [[to_fraction(e) for e in np.atleast_1d(np.asarray(r, dtype=object))] for r in f]
    X = bareiss_solve(_transpose(exact_bv_matrix(x)), rows)
    if np.ndim(f[0]) == 0:
        return [r[0] for r in X]
    return X


def exact_solve_tensor(axes: Sequence, data) -> np.ndarray:
    """Exact tensor-product control points via one exact solve per axis.

    The full system matrix is the Kronecker product of the axis matrices,
    so its inverse factors into per-axis inverses.
    """
    c = np.array(data, dtype=object)
    if c.ndim != len(axes):
        raise ValidationError("data rank must equal the number of axes")
    c = np.vectorize(to_fraction, otypes=[object])(c)
    for ax, nodes in enumerate(axes):
        moved = np.moveaxis(c, ax, 0)
        shape = moved.shape
        flat = moved.reshape(shape[0], -1)
        x = [to_fraction(v) for v in nodes]
        _check_distinct(x)
        sol = bareiss_solve(_transpose(exact_bv_matrix(x)), flat.tolist())
        c = np.moveaxis(np.array(sol, dtype=object).reshape(shape), 0, ax)
    return c


def exact_solve_simplex(points, data, tri: Triangle, n: int) -> list[Fraction]:
    """Exact triangle control points (canonical order) from rational nodes and vertices."""
    alphas = enumerate_multi_indices(2, n)
    if len(points) != len(alphas):
        raise ValidationError(f"degree {n} needs {len(alphas)} nodes, got {len(points)}")
    rtri = Triangle(*[tuple(to_fraction(c) for c in v) for v in tri.vertices])
    rows = []
    for p in points:
        lam = barycentric_coords(rtri, (to_fraction(p[0]), to_fraction(p[1])))
        row = []
        for alpha in alphas:
            val = Fraction(multinomial(alpha))
            for l, a in zip(lam, alpha):
                val *= l**a
            row.append(val)
        rows.append(row)
    X = bareiss_solve(rows, [[to_fraction(v)] for v in data])
    return [r[0] for r in X]


def exact_solve_rational(kind: str, **problem):
    """Dispatch exact solves by problem kind.

    ``univariate``: ``nodes, data``; ``tensor2d``/``tensor3d``: ``axes, data``;
    ``simplex2d``: ``points, data, triangle, degree``.
    """
    if kind == "univariate":
        return exact_solve_1d(problem["nodes"], problem["data"])
    if kind in ("tensor2d", "tensor3d"):
        return exact_solve_tensor(problem["axes"], problem["data"])
    if kind == "simplex2d":
        return exact_solve_simplex(problem["points"], problem["data"], problem["triangle"], problem["degree"])
    raise ValidationError(f"unknown problem kind {kind!r}")


def exact_de_casteljau_1d(c, x) -> Fraction:
    b = [to_fraction(v) for v in c]
    x = to_fraction(x)
    for r in range(len(b) - 1, 0, -1):
        b = [(1 - x) * b[i] + x * b[i + 1] for i in range(r)]
    return b[0]


# -- extended precision channel ---------------------------------------------


def _mp_collocation_inverse(nodes, prec: int):
    x = [mpmath.mpf(v) if not isinstance(v, Fraction) else mpmath.mpf(v.numerator) / v.denominator for v in nodes]
    n = len(x) - 1
    M = mpmath.matrix(n + 1, n + 1)
    for j, xj in enumerate(x):
        for i in range(n + 1):
            M[j, i] = math.comb(n, i) * (1 - xj) ** (n - i) * xj**i
    return mpmath.inverse(M)


def extended_solve_1d(nodes, f, *, prec: int = 200) -> np.ndarray:
    """Control points computed in ``prec``-bit arithmetic, rounded to double.

    Float nodes are taken at their exact binary values.
    """
    with mpmath.workprec(prec):
        Minv = _mp_collocation_inverse(nodes, prec)
        rhs = mpmath.matrix([mpmath.mpf(float(v)) if not isinstance(v, Fraction) else mpmath.mpf(v.numerator) / v.denominator for v in f])
        sol = Minv * rhs
        return np.array([float(sol[i]) for i in range(sol.rows)])


def extended_solve_tensor(axes: Sequence, data, *, prec: int = 200) -> np.ndarray:
    """Tensor control points in ``prec``-bit arithmetic via per-axis inverses."""
    with mpmath.workprec(prec):
        c = np.vectorize(lambda v: mpmath.mpf(float(v)), otypes=[object])(np.asarray(data, dtype=float))
        for ax, nodes in enumerate(axes):
            Minv = _mp_collocation_inverse(nodes, prec)
            k = Minv.rows
            moved = np.moveaxis(c, ax, 0)
            shape = moved.shape
            flat = moved.reshape(shape[0], -1)
            Mi = np.array([[Minv[i, j] for j in range(k)] for i in range(k)], dtype=object)
            c = np.moveaxis(Mi.dot(flat).reshape(shape), 0, ax)
        return np.vectorize(float, otypes=[float])(c)
