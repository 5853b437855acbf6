"""Univariate Bernstein-Bezier interpolation.

The main entry point is :func:`newton_bernstein`, an O(n^2) solver that
builds the Newton form of the interpolant and converts it to Bernstein
form on the fly: the Newton basis polynomials ``w_k = prod_{i<k}(x - x_i)``
are multiplied up one linear factor at a time in Bernstein form, while the
running interpolant is degree-raised and updated with the next divided
difference. Data may be vector valued (any trailing axes), which is what the
tensor-product solvers use.

:func:`closed_form_control_points` is an independent O(n^3) route through
the Lagrange form, kept as a cross-check.
"""

from __future__ import annotations

import numpy as np

from .bb_core import bernstein_basis_1d
from .errors import NodeError

__all__ = [
    "OpCounter",
    "validate_nodes",
    "divided_differences",
    "newton_bernstein",
    "leja_order",
    "node_factor_bb",
    "barycentric_weights",
    "closed_form_control_points",
]

DUPLICATE_TOL = 1e-14


class OpCounter:
    """Tally of floating-point operations for one solver call."""

    def __init__(self) -> None:
        self.flops = 0

    def add(self, count: int) -> None:
        self.flops += int(count)


def validate_nodes(nodes, *, unit_interval: bool = True) -> np.ndarray:
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise NodeError("nodes must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(x)):
        raise NodeError("nodes must be finite")
    if unit_interval and (x.min() < 0.0 or x.max() > 1.0):
        raise NodeError("nodes must lie in [0, 1]")
    if x.size > 1 and np.min(np.diff(np.sort(x))) < DUPLICATE_TOL:
        raise NodeError("duplicate interpolation nodes")
    return x


def _as_data(data, count: int) -> np.ndarray:
    f = np.array(data, dtype=float)
    if f.ndim == 0 or f.shape[0] != count:
        raise NodeError(f"expected {count} data values, got shape {f.shape}")
    return f


def _bcast(v: np.ndarray, like: np.ndarray) -> np.ndarray:
    return v.reshape(v.shape + (1,) * (like.ndim - 1))


def divided_differences(nodes, data) -> np.ndarray:
    """Newton divided differences ``f[x_0..x_j]`` for ``j = 0..n``.

    Triangular in-place sweep; row ``j`` of the result has the shape of a
    single datum.
    """
    x = validate_nodes(nodes, unit_interval=False)
    f = _as_data(data, x.size)
    for s in range(1, x.size):
        f[s:] = (f[s:] - f[s - 1 : -1]) / _bcast(x[s:] - x[:-s], f[s:])
    return f


def newton_bernstein(nodes, data, *, counter: OpCounter | None = None) -> np.ndarray:
    """Control points of the degree-``n`` interpolant of ``data`` at ``nodes``.

    Parameters
    ----------
    nodes : array_like, shape (n+1,)
        Distinct nodes in [0, 1], used in the order given.
    data : array_like, shape (n+1, ...)
        Values to interpolate; trailing axes are treated as a vector space.
    counter : OpCounter, optional
        Receives the number of floating-point operations performed.

    Returns
    -------
    ndarray, shape (n+1, ...)
        Bernstein coefficients ``c_0..c_n`` on [0, 1].
    """
    x = validate_nodes(nodes)
    f = _as_data(data, x.size)
    n = x.size - 1
    width = int(np.prod(f.shape[1:], dtype=int))

    c = np.zeros_like(f)
    w = np.zeros(n + 1)
    c[0] = f[0]
    w[0] = 1.0
    for s in range(1, n + 1):
        # f[s..n] <- next column of the divided-difference table
        f[s:] = (f[s:] - f[s - 1 : -1]) / _bcast(x[s:] - x[: n + 1 - s], f[s:])
        xs = x[s - 1]
        k = np.arange(1, s + 1) / s
        # w <- w * (x - x_{s-1}); c <- degree-raised c + f[x_0..x_s] w
        w[1 : s + 1] = k * w[:s] * (1.0 - xs) - (1.0 - k) * w[1 : s + 1] * xs
        kb = _bcast(k, c)
        c[1 : s + 1] = kb * c[:s] + (1.0 - kb) * c[1 : s + 1] + f[s] * _bcast(w[1 : s + 1], c)
        w[0] = -w[0] * xs
        c[0] = c[0] + f[s] * w[0]
        if counter is not None:
            counter.add(3 * (n + 1 - s) * width)  # divided differences
            counter.add(6 * s + 7 * s * width)  # weight and coefficient updates
            counter.add(2 + 2 * width)  # k = 0 tail
    return c


def leja_order(nodes) -> np.ndarray:
    """Greedy Leja permutation of ``nodes``.

    The first index maximises ``|x_j|``; each next one maximises the
    product of distances to the nodes already chosen. Ties go to the
    smallest original index.
    """
    x = validate_nodes(nodes, unit_interval=False)
    order = [int(np.argmax(np.abs(x)))]
    # log-distances avoid underflow of the running products for large n
    score = np.zeros_like(x)
    for _ in range(1, x.size):
        with np.errstate(divide="ignore"):
            score += np.log(np.abs(x - x[order[-1]]))
        score[order] = -np.inf
        order.append(int(np.argmax(score)))
    return np.array(order, dtype=np.intp)


def node_factor_bb(nodes) -> np.ndarray:
    """Degree ``n+1`` Bernstein coefficients of ``l(x) = prod_k (x - x_k)``."""
    x = np.asarray(nodes, dtype=float)
    a = np.array([1.0])
    for s, xs in enumerate(x, start=1):
        k = np.arange(s + 1) / s
        prev = np.concatenate(([0.0], a))
        nxt = np.concatenate((a, [0.0]))
        a = k * prev * (1.0 - xs) - (1.0 - k) * nxt * xs
    return a


def barycentric_weights(nodes) -> np.ndarray:
    """``mu_j = 1 / prod_{k != j} (x_j - x_k)``."""
    x = validate_nodes(nodes, unit_interval=False)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def closed_form_control_points(nodes, data, *, method: str = "product") -> np.ndarray:
    """Control points from the Lagrange form, O(n^3).

    ``c_k = sum_j mu_j f_j wt_k(x_j)`` where ``wt_k(x_j)`` are the Bernstein
    coefficients of ``l(x) / (x - x_j)``.

    With ``method="product"`` those coefficients are built by multiplying
    the linear factors ``x - x_i``, ``i != j``, in Bernstein form. With
    ``method="partial-sums"`` they come from
    ``-sum_{i<=k} a_i B_i^{n+1}(x_j) / (x_j (1 - x_j) B_k^n(x_j))`` with
    ``a`` the coefficients of ``l``; the partial sums cancel badly (their
    total is ``l(x_j) = 0``), so this variant loses accuracy quickly past
    degree 8 and is kept for reference only.

    Nodes must be interior because the partial-sum divisor vanishes at 0
    and 1.
    """
    x = validate_nodes(nodes)
    if x.min() <= 0.0 or x.max() >= 1.0:
        raise NodeError("closed-form control points need nodes strictly inside (0, 1)")
    f = _as_data(data, x.size)
    if f.ndim != 1:
        raise NodeError("closed-form control points take scalar data")
    n = x.size - 1
    mu = barycentric_weights(x)
    if method == "product":
        wt = np.array([node_factor_bb(np.delete(x, j)) for j in range(n + 1)])
    elif method == "partial-sums":
        a = node_factor_bb(x)
        big = bernstein_basis_1d(n + 1, x)  # B_i^{n+1}(x_j)
        small = bernstein_basis_1d(n, x)  # B_k^n(x_j)
        partial = -np.cumsum(a[None, :] * big, axis=1)[:, : n + 1]
        wt = partial / ((x * (1.0 - x))[:, None] * small)
    else:
        raise ValueError(f"unknown method {method!r}")
    return (mu * f) @ wt
