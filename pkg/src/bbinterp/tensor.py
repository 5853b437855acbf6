"""Tensor-product interpolation on box grids.

The univariate solver is applied along one axis at a time with the other
axes flattened into a vector of data, so every sweep is a single
vector-valued call. Coefficient arrays use the same layout as the data:
axis 0 is x (slowest in row-major order), then y, then z.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .newton_bernstein import newton_bernstein, validate_nodes

__all__ = ["tensor_product_2d", "tensor_product_3d", "tensor_sweep"]

Solver1D = Callable[[np.ndarray, np.ndarray], np.ndarray]


def tensor_sweep(
    axes: Sequence,
    data,
    *,
    solver: Solver1D = newton_bernstein,
    axis_order: Sequence[int] | None = None,
) -> np.ndarray:
    """Interpolate on the grid ``axes[0] x axes[1] x ...``.

    ``solver(nodes, values)`` must accept values with trailing axes.
    ``axis_order`` changes the order of the sweeps; the result is the same
    polynomial up to round-off.
    """
    nodes = [validate_nodes(a) for a in axes]
    c = np.array(data, dtype=float)
    expected = tuple(a.size for a in nodes)
    if c.shape != expected:
        raise ValidationError(f"data shape {c.shape} does not match node counts {expected}")
    order = range(len(nodes)) if axis_order is None else axis_order
    if sorted(order) != list(range(len(nodes))):
        raise ValidationError("axis_order must be a permutation of the axes")
    for ax in order:
        moved = np.moveaxis(c, ax, 0)
        shape = moved.shape
        solved = solver(nodes[ax], moved.reshape(shape[0], -1))
        c = np.moveaxis(np.asarray(solved).reshape(shape), 0, ax)
    return np.ascontiguousarray(c)


def tensor_product_2d(xnodes, ynodes, data, *, solver: Solver1D = newton_bernstein) -> np.ndarray:
    """Control points ``c[k, l]`` with ``sum c[k,l] B_k(x_i) B_l(y_j) = data[i, j]``.

    First one univariate solve in x per grid line ``y = y_j`` (done as a
    single call on the columns), then a solve in y whose data are the
    intermediate x-coefficients.
    """
    return tensor_sweep([xnodes, ynodes], data, solver=solver)


def tensor_product_3d(xnodes, ynodes, znodes, data, *, solver: Solver1D = newton_bernstein) -> np.ndarray:
    """Three-axis version of :func:`tensor_product_2d` (x, then y, then z)."""
    return tensor_sweep([xnodes, ynodes, znodes], data, solver=solver)
