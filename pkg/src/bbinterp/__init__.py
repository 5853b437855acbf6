"""Bernstein-Bezier interpolation: univariate, tensor-product and triangle solvers."""

from __future__ import annotations

__version__ = "0.1.0"

from .bb_core import (
    Triangle,
    barycentric_coords,
    bernstein_basis_1d,
    bernstein_eval_1d,
    bernstein_eval_simplex,
    de_casteljau_1d,
    de_casteljau_simplex,
    degree_raise_1d,
    enumerate_multi_indices,
)
from .errors import (
    BBInterpError,
    GeometryError,
    NodeError,
    ParseError,
    PartitionError,
    ResourceError,
    SolvabilityError,
    SolverError,
    ValidationError,
)
from .newton_bernstein import closed_form_control_points, leja_order, newton_bernstein
from .simplex import NodePartition, newton_bernstein_2d
from .tensor import tensor_product_2d, tensor_product_3d, tensor_sweep

__all__ = [
    "__version__",
    "Triangle",
    "barycentric_coords",
    "bernstein_basis_1d",
    "bernstein_eval_1d",
    "bernstein_eval_simplex",
    "de_casteljau_1d",
    "de_casteljau_simplex",
    "degree_raise_1d",
    "enumerate_multi_indices",
    "BBInterpError",
    "GeometryError",
    "NodeError",
    "ParseError",
    "PartitionError",
    "ResourceError",
    "SolvabilityError",
    "SolverError",
    "ValidationError",
    "closed_form_control_points",
    "leja_order",
    "newton_bernstein",
    "NodePartition",
    "newton_bernstein_2d",
    "tensor_product_2d",
    "tensor_product_3d",
    "tensor_sweep",
]
