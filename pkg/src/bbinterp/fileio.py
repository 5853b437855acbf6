"""Problem and solution files.

Problems and solutions are JSON documents validated against the schemas in
``bbinterp/schemas``. Numbers in problem files may be strings such as
``"1/17"``; every number is kept as an exact :class:`~fractions.Fraction`
(for the exact solver) alongside its float value. Solutions are written
with 17 significant digits so that floats round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .bb_core import Triangle, barycentric_coords, de_casteljau_1d, de_casteljau_simplex, simplex_degree
from .errors import ParseError, ResourceError, ValidationError
from .newton_bernstein import leja_order, newton_bernstein
from .reference import (
    assemble_bv_matrix,
    assemble_simplex_bv_matrix,
    assemble_tensor_bv_matrix,
    condition_number,
    exact_solve_1d,
    exact_solve_simplex,
    exact_solve_tensor,
    lu_solve,
    to_fraction,
)
from .simplex import NodePartition, detect_partition, newton_bernstein_2d
from .tensor import tensor_sweep

__all__ = [
    "InterpolationProblem",
    "SolutionRecord",
    "load_problem",
    "parse_problem",
    "solve_problem",
    "load_solution",
    "solution_to_json",
    "evaluate_solution",
    "read_points",
    "write_values",
    "problem_matrix",
    "atomic_write_text",
    "dumps",
    "SOLVERS",
    "ORDERINGS",
    "MAX_COND_UNKNOWNS",
]

SOLVERS = ("newton-bernstein", "lu", "exact")
ORDERINGS = ("given", "ascending", "leja")
MAX_COND_UNKNOWNS = 1500
SOLUTION_FORMAT = "bbinterp-solution/1"


@lru_cache(maxsize=None)
def _schema(name: str) -> dict:
    text = resources.files("bbinterp").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)


def _validate(doc: Any, name: str) -> None:
    try:
        jsonschema.validate(doc, _schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{name}: {where}: {exc.message}") from None


# -- serialisation ----------------------------------------------------------


def _num(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("cannot serialise a non-finite number")
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits.

    Lists of scalars stay on one line to keep coefficient arrays compact.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- problems -----------------------------------------------------------------


@dataclass
class InterpolationProblem:
    """A validated problem with exact (``Fraction``) node and data values.

    ``axes``: one node list per axis for univariate/tensor kinds.
    ``groups``: ``[(points, values), ...]`` for simplex2d, ``A_n`` first,
    or ``None`` when the partition should be detected.
    """

    kind: str
    data: Any = None
    axes: list[list[Fraction]] = field(default_factory=list)
    triangle: tuple | None = None
    groups: list | None = None
    points: list | None = None
    ordering: str = "given"

    @property
    def float_axes(self) -> list[np.ndarray]:
        return [np.array([float(v) for v in a]) for a in self.axes]

    @property
    def float_data(self) -> np.ndarray:
        return np.vectorize(float, otypes=[float])(np.asarray(self.data, dtype=object))

    def float_triangle(self) -> Triangle:
        return Triangle(*[tuple(float(c) for c in v) for v in self.triangle])

    def exact_triangle(self) -> Triangle:
        return Triangle(*[tuple(c for c in v) for v in self.triangle])

    def partition(self) -> NodePartition:
        if self.groups is not None:
            return NodePartition(
                [([(float(a), float(b)) for a, b in pts], [float(v) for v in vals]) for pts, vals in self.groups]
            )
        pts = [(float(a), float(b)) for a, b in self.points]
        return detect_partition(pts, [float(v) for v in self.data])

    def simplex_nodes(self) -> tuple[list, list]:
        """Exact points and data for simplex problems, flattened group by group."""
        if self.groups is not None:
            pts = [p for g, _ in self.groups for p in g]
            vals = [v for _, g in self.groups for v in g]
            return pts, vals
        return list(self.points), list(self.data)

    @property
    def degree(self) -> list[int]:
        if self.kind == "simplex2d":
            return [simplex_degree(len(self.simplex_nodes()[0]))]
        return [len(a) - 1 for a in self.axes]

    @property
    def unknowns(self) -> int:
        if self.kind == "simplex2d":
            return len(self.simplex_nodes()[0])
        return math.prod(len(a) for a in self.axes)


def _exact(v) -> Fraction:
    try:
        return to_fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad number {v!r}: {exc}") from None


def _exact_nested(v):
    if isinstance(v, list):
        return [_exact_nested(e) for e in v]
    return _exact(v)


def parse_problem(text: str) -> InterpolationProblem:
    try:
        doc = json.loads(text)
        exact_doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"problem file is not valid JSON: {exc}") from None
    _validate(doc, "problem.schema.json")
    kind = doc["kind"]
    ordering = doc.get("ordering", "given")
    if kind == "simplex2d":
        tri = tuple(tuple(_exact(c) for c in v) for v in exact_doc["triangle"])
        prob = InterpolationProblem(kind, triangle=tri, ordering=ordering)
        if "groups" in exact_doc:
            prob.groups = [
                ([tuple(_exact(c) for c in p) for p in g["nodes"]], [_exact(v) for v in g["data"]])
                for g in exact_doc["groups"]
            ]
            for pts, vals in prob.groups:
                if len(pts) != len(vals):
                    raise ValidationError("each group needs one datum per node")
        else:
            prob.points = [tuple(_exact(c) for c in p) for p in exact_doc["nodes"]]
            prob.data = [_exact(v) for v in exact_doc["data"]]
            if len(prob.points) != len(prob.data):
                raise ValidationError("need one datum per node")
        try:
            prob.float_triangle()
        except Exception as exc:
            raise ValidationError(str(exc)) from None
        return prob

    if kind == "univariate":
        axes = [[_exact(v) for v in exact_doc["nodes"]]]
    else:
        names = "xy" if kind == "tensor2d" else "xyz"
        axes = [[_exact(v) for v in exact_doc["nodes"][a]] for a in names]
    data = _exact_nested(exact_doc["data"])
    shape = tuple(len(a) for a in axes)
    try:
        arr = np.array(data, dtype=object)
    except ValueError:
        arr = None
    if arr is None or arr.shape != shape:
        raise ValidationError(f"data shape does not match node counts {shape}")
    return InterpolationProblem(kind, data=arr, axes=axes, ordering=ordering)


def load_problem(path: str | os.PathLike) -> InterpolationProblem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read problem file: {exc}") from None
    return parse_problem(text)


# -- solving -----------------------------------------------------------------


def _permutation(nodes: np.ndarray, ordering: str) -> np.ndarray:
    if ordering == "ascending":
        return np.argsort(nodes, kind="stable")
    if ordering == "leja":
        return leja_order(nodes)
    if ordering == "given":
        return np.arange(nodes.size)
    raise ValidationError(f"unknown ordering {ordering!r}")


def problem_matrix(problem: InterpolationProblem) -> np.ndarray:
    """Full Bernstein-Vandermonde matrix ``A`` (basis x nodes) of the problem."""
    if problem.kind == "simplex2d":
        pts, _ = problem.simplex_nodes()
        fpts = [(float(a), float(b)) for a, b in pts]
        return assemble_simplex_bv_matrix(fpts, problem.float_triangle(), problem.degree[0])
    if problem.kind == "univariate":
        return assemble_bv_matrix(problem.float_axes[0])
    return assemble_tensor_bv_matrix(problem.float_axes)


def _solve_float(problem: InterpolationProblem, solver: str, ordering: str) -> np.ndarray:
    if solver == "lu":
        A = problem_matrix(problem)
        if problem.kind == "simplex2d":
            f = np.array([float(v) for v in problem.simplex_nodes()[1]])
        else:
            f = problem.float_data.ravel()
        return lu_solve(A.T, f)
    if problem.kind == "simplex2d":
        return newton_bernstein_2d(problem.partition(), problem.float_triangle(), ordering=ordering)
    axes = problem.float_axes
    data = problem.float_data
    for ax, nodes in enumerate(axes):
        perm = _permutation(nodes, ordering)
        axes[ax] = nodes[perm]
        data = np.take(data, perm, axis=ax)
    if problem.kind == "univariate":
        return newton_bernstein(axes[0], data)
    return tensor_sweep(axes, data).ravel()


def _solve_exact(problem: InterpolationProblem) -> list[Fraction]:
    if problem.kind == "simplex2d":
        pts, vals = problem.simplex_nodes()
        return exact_solve_simplex(pts, vals, problem.exact_triangle(), problem.degree[0])
    if problem.kind == "univariate":
        return exact_solve_1d(problem.axes[0], list(problem.data))
    return list(exact_solve_tensor(problem.axes, problem.data).ravel())


@dataclass
class SolutionRecord:
    kind: str
    solver: str
    ordering: str
    degree: list[int]
    control_points: np.ndarray
    residual_max: float
    elapsed_seconds: float
    triangle: tuple | None = None
    control_points_exact: list[Fraction] | None = None

    @property
    def shape(self) -> list[int]:
        if self.kind == "simplex2d":
            return [int(self.control_points.size)]
        return [d + 1 for d in self.degree]


def _problem_points_and_values(problem: InterpolationProblem):
    if problem.kind == "simplex2d":
        pts, vals = problem.simplex_nodes()
        return np.array([[float(a), float(b)] for a, b in pts]), np.array([float(v) for v in vals])
    grids = np.meshgrid(*problem.float_axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1), problem.float_data.ravel()


def residual_max(record: SolutionRecord, problem: InterpolationProblem) -> float:
    pts, vals = _problem_points_and_values(problem)
    got = evaluate_solution(record, pts)
    return float(np.max(np.abs(got - vals)))


def solve_problem(problem: InterpolationProblem, solver: str = "newton-bernstein", ordering: str | None = None) -> SolutionRecord:
    if solver not in SOLVERS:
        raise ValidationError(f"unknown solver {solver!r}")
    ordering = ordering or problem.ordering
    if ordering not in ORDERINGS:
        raise ValidationError(f"unknown ordering {ordering!r}")
    start = time.perf_counter()
    exact = None
    if solver == "exact":
        exact = _solve_exact(problem)
        coeffs = np.array([float(v) for v in exact])
    else:
        coeffs = np.asarray(_solve_float(problem, solver, ordering), dtype=float).ravel()
    elapsed = time.perf_counter() - start
    tri = None
    if problem.kind == "simplex2d":
        tri = tuple(tuple(float(c) for c in v) for v in problem.triangle)
    record = SolutionRecord(problem.kind, solver, ordering, problem.degree, coeffs, 0.0, elapsed, tri, exact)
    record.residual_max = residual_max(record, problem)
    return record


def solution_to_json(record: SolutionRecord) -> str:
    doc: dict[str, Any] = {
        "format": SOLUTION_FORMAT,
        "kind": record.kind,
        "solver": record.solver,
        "ordering": record.ordering,
        "degree": list(record.degree),
        "shape": record.shape,
    }
    if record.triangle is not None:
        doc["triangle"] = [list(v) for v in record.triangle]
    doc["control_points"] = [float(v) for v in record.control_points]
    if record.control_points_exact is not None:
        doc["control_points_exact"] = [str(v) for v in record.control_points_exact]
    doc["residual_max"] = float(record.residual_max)
    doc["elapsed_seconds"] = float(record.elapsed_seconds)
    return dumps(doc) + "\n"


def load_solution(path: str | os.PathLike) -> SolutionRecord:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read solution file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"solution file is not valid JSON: {exc}") from None
    _validate(doc, "solution.schema.json")
    coeffs = np.array(doc["control_points"], dtype=float)
    if math.prod(doc["shape"]) != coeffs.size:
        raise ValidationError("control point count does not match shape")
    tri = tuple(tuple(v) for v in doc["triangle"]) if "triangle" in doc else None
    exact = [Fraction(s) for s in doc["control_points_exact"]] if "control_points_exact" in doc else None
    return SolutionRecord(doc["kind"], doc["solver"], doc["ordering"], doc["degree"], coeffs,
                          doc["residual_max"], doc["elapsed_seconds"], tri, exact)


# -- evaluation --------------------------------------------------------------


_DIMENSION = {"univariate": 1, "tensor2d": 2, "tensor3d": 3, "simplex2d": 2}


def evaluate_solution(record: SolutionRecord, points) -> np.ndarray:
    """de Casteljau evaluation of a solution at the rows of ``points``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        # a flat list is many 1-D points, or a single point of higher dimension
        pts = pts[:, None] if record.kind == "univariate" else pts[None, :]
    dim = _DIMENSION[record.kind]
    if pts.shape[1] != dim:
        raise ValidationError(f"{record.kind} solutions take {dim}-dimensional points, got {pts.shape[1]}")
    c = record.control_points
    if record.kind == "simplex2d":
        tri = Triangle(*record.triangle)
        return np.array([de_casteljau_simplex(c, np.array(barycentric_coords(tri, p))) for p in pts])
    net = c.reshape(record.shape)
    out = np.empty(pts.shape[0])
    for r, p in enumerate(pts):
        val = net
        for coord in p:  # contract the leading (x) axis first
            val = de_casteljau_1d(val, coord)
        out[r] = val
    return out


def read_points(path: str | os.PathLike) -> np.ndarray:
    """CSV points, one per row; a non-numeric first row is taken as a header, ``#`` lines are skipped."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ParseError(f"cannot read points file: {exc}") from None
    out = []
    for i, row in enumerate(rows):
        try:
            out.append([float(v) for v in row])
        except ValueError:
            if i == 0:
                continue
            raise ParseError(f"non-numeric entry in points row {i + 1}") from None
    if not out:
        raise ParseError("points file holds no points")
    if len({len(r) for r in out}) != 1:
        raise ParseError("points rows have differing dimensions")
    return np.array(out)


def write_values(path: str | os.PathLike, points: np.ndarray, values: np.ndarray) -> None:
    dim = points.shape[1]
    names = ["x", "y", "z"][:dim] if dim <= 3 else [f"x{i}" for i in range(dim)]
    lines = [",".join(names + ["value"])]
    for p, v in zip(points, values):
        lines.append(",".join([_num(c) for c in p] + [_num(v)]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def problem_condition(problem: InterpolationProblem) -> tuple[float, int]:
    size = problem.unknowns
    if size > MAX_COND_UNKNOWNS:
        raise ResourceError(f"{size} unknowns exceed the SVD budget of {MAX_COND_UNKNOWNS}")
    return condition_number(problem_matrix(problem)), size
