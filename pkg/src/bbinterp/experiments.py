"""Reproduction harness for the six benchmark problems.

Each ``exampleN()`` builds the problem exactly (rational nodes where the
nodes are rational), runs the floating solvers and the naive LU baseline,
measures relative errors against exact or extended-precision control
points, and returns an :class:`ExperimentTable`.

Random loads use :func:`lcg_integers`, a 32-bit linear congruential
generator (``a = 1664525``, ``c = 1013904223``, modulus ``2**32``; the value
is taken from the high 16 bits) so the tables are identical on every
platform. Seeds are ``1000 * example + load``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bb_core import Triangle
from .newton_bernstein import leja_order, newton_bernstein
from .reference import (
    assemble_bv_matrix,
    assemble_simplex_bv_matrix,
    assemble_tensor_bv_matrix,
    condition_number,
    exact_solve_1d,
    exact_solve_simplex,
    exact_solve_tensor,
    extended_solve_1d,
    extended_solve_tensor,
    jacobi_svd,
    lu_solve,
    relative_error,
)
from .simplex import NodePartition, newton_bernstein_2d
from .tensor import tensor_sweep

__all__ = [
    "ExperimentTable",
    "lcg_integers",
    "example1_problem",
    "example2_problem",
    "example3_problem",
    "example4_problem",
    "example5_problem",
    "example6_problem",
    "run_example",
    "EXAMPLES",
]

EX1_F2 = [2, 1, 2, 3, -1, 0, 1, -2, 4, 1, 1, -3, 0, -1, -1, 2]
EX1_F3 = [1, -2, 1, -1, 3, -1, 2, -1, 4, -1, 2, -1, 1, -3, 1, -4]
EX2_NODES = ["1/18", "1/16", "1/14", "1/12", "1/10", "1/8", "1/6", "1/4",
             "11/20", "19/34", "17/30", "15/26", "11/18", "9/14", "7/10", "5/6"]
EX3_F2 = [-3, -1, 2, -1, 2, -1, 1, -3, 2, -3, 1, 2, -1, -2, 1, -2, -1, -2, 1, -2, 3, -2, -3, 2, 1, -2]
EX3_F3 = [-1, 2, 1, -1, -2, -3, 2, 3, -2, -1, 2, 1, 3, -2, 1, -1, -1, 2, -2, -3, 1, -1, 1, -3, 2, -1]


def lcg_integers(seed: int, count: int, low: int = -3, high: int = 3) -> list[int]:
    """``count`` integers in ``[low, high]`` from the documented LCG."""
    state = seed % 2**32
    out = []
    span = high - low + 1
    for _ in range(count):
        state = (1664525 * state + 1013904223) % 2**32
        out.append(low + (state >> 16) % span)
    return out


@dataclass
class ExperimentTable:
    example: int
    title: str
    columns: list[str]
    rows: list[tuple[str, list[float]]]
    info: dict = field(default_factory=dict)

    def column(self, name: str) -> list[float]:
        i = self.columns.index(name)
        return [vals[i] for _, vals in self.rows]

    def value(self, row: str, column: str) -> float:
        i = self.columns.index(column)
        return dict(self.rows)[row][i]

    def to_text(self) -> str:
        head = ["f_i"] + self.columns
        body = [[label] + [f"{v:.1e}" for v in vals] for label, vals in self.rows]
        widths = [max(len(r[k]) for r in [head] + body) for k in range(len(head))]
        fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths))
        lines = [f"Example {self.example}: {self.title}", ""]
        lines += [f"{k}: {v}" for k, v in self.info.items()]
        lines += ["", fmt(head), fmt(["-" * w for w in widths])]
        lines += [fmt(r) for r in body]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "title": self.title,
            "columns": self.columns,
            "rows": [{"load": label, "errors": vals} for label, vals in self.rows],
            "info": self.info,
        }


def _floats(values) -> np.ndarray:
    return np.array([float(v) for v in values])


def _lu_1d(nodes, values):
    return lu_solve(assemble_bv_matrix(nodes).T, values)


# -- problem builders --------------------------------------------------------


def example1_problem() -> dict:
    n = 15
    nodes = [Fraction(i + 1, 17) for i in range(n + 1)]
    loads = {
        "f_1": [(1 - x) ** n for x in nodes],
        "f_2": [Fraction(v) for v in EX1_F2],
        "f_3": [Fraction(v) for v in EX1_F3],
    }
    return {"nodes": nodes, "loads": loads}


def example2_problem() -> dict:
    """Nodes plus right-hand sides ``u_1..u_16``.

    ``u_i`` is the ``i``-th left singular vector (descending singular
    values) of the collocation matrix ``A.T`` that the interpolation
    actually inverts, so ``u_1`` is the hardest load and ``u_16`` the easiest.
    """
    nodes = [Fraction(s) for s in EX2_NODES]
    A = assemble_bv_matrix(_floats(nodes))
    U, s, _ = jacobi_svd(A.T)
    loads = {f"f_{i + 1}": [Fraction(float(v)) for v in U[:, i]] for i in range(U.shape[1])}
    return {"nodes": nodes, "loads": loads, "singular_values": s}


def example3_problem() -> dict:
    """Chebyshev zeros mapped from (-1, 1) to (0, 1), ascending."""
    n = 25
    k = np.arange(n + 1)
    nodes = np.sort((np.cos((2 * k + 1) * np.pi / (2 * (n + 1))) + 1.0) / 2.0)
    loads = {
        "f_1": (1.0 - nodes) ** n,
        "f_2": np.array(EX3_F2, dtype=float),
        "f_3": np.array(EX3_F3, dtype=float),
    }
    return {"nodes": nodes, "loads": loads}


def example4_problem() -> dict:
    n = 15
    x = [Fraction(i + 1, n + 2) for i in range(n + 1)]
    y = [Fraction(j + 1, n + 3) for j in range(n + 1)]
    loads = {
        f"f_{i}": np.array(lcg_integers(4000 + i, (n + 1) ** 2)).reshape(n + 1, n + 1)
        for i in (1, 2)
    }
    return {"axes": [x, y], "loads": loads}


def example5_problem() -> dict:
    n = 10
    x = [Fraction(i + 1, n + 2) for i in range(n + 1)]
    y = [Fraction(j + 1, n + 3) for j in range(n + 1)]
    z = [Fraction(k + 2, n + 4) for k in range(n + 1)]
    loads = {
        f"f_{i}": np.array(lcg_integers(5000 + i, (n + 1) ** 3)).reshape(n + 1, n + 1, n + 1)
        for i in (1, 2)
    }
    return {"axes": [x, y, z], "loads": loads}


def example6_problem(n: int = 10) -> dict:
    """Degree-``n`` node set on the unit triangle with horizontal node lines.

    ``A_j`` (``j + 1`` nodes) lies on ``y = (2(n - j) + 1) / (2(n + 1))`` at
    ``x = (1 - y)(i + 1)/(j + 2)``, so every line crosses the triangle's
    interior and no node sits on another group's line. Loads alternate in
    sign with LCG magnitudes 1..3.
    """
    tri = Triangle((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    groups = []
    for j in range(n, -1, -1):
        y = Fraction(2 * (n - j) + 1, 2 * (n + 1))
        groups.append([((1 - y) * Fraction(i + 1, j + 2), y) for i in range(j + 1)])
    count = sum(len(g) for g in groups)
    loads = {}
    for i in (1, 2):
        mags = lcg_integers(6000 + i, count, 1, 3)
        loads[f"f_{i}"] = [Fraction((-1) ** k * m) for k, m in enumerate(mags)]
    return {"triangle": tri, "groups": groups, "degree": n, "loads": loads}


# -- experiments --------------------------------------------------------------


def example1() -> ExperimentTable:
    prob = example1_problem()
    x = _floats(prob["nodes"])
    A = assemble_bv_matrix(x)
    rows = []
    for label, load in prob["loads"].items():
        exact = _floats(exact_solve_1d(prob["nodes"], load))
        f = _floats(load)
        rows.append((label, [relative_error(exact, lu_solve(A.T, f)),
                             relative_error(exact, newton_bernstein(x, f))]))
    return ExperimentTable(1, "uniform nodes (i+1)/17, n = 15", ["LU", "NewtonBernstein"], rows,
                           {"condition_number": condition_number(A), "oracle": "exact rational"})


def example2() -> ExperimentTable:
    prob = example2_problem()
    x = _floats(prob["nodes"])
    A = assemble_bv_matrix(x)
    rows = []
    for label, load in prob["loads"].items():
        exact = _floats(exact_solve_1d(prob["nodes"], load))
        f = _floats(load)
        rows.append((label, [relative_error(exact, lu_solve(A.T, f)),
                             relative_error(exact, newton_bernstein(x, f))]))
    return ExperimentTable(2, "rational nodes, singular-vector loads, n = 15", ["LU", "NewtonBernstein"],
                           rows, {"condition_number": condition_number(A), "oracle": "exact rational"})


def example3() -> ExperimentTable:
    prob = example3_problem()
    x = prob["nodes"]
    A = assemble_bv_matrix(x)
    perm = leja_order(x)
    rows = []
    for label, f in prob["loads"].items():
        exact = extended_solve_1d(x, f, prec=200)
        rows.append((label, [relative_error(exact, lu_solve(A.T, f)),
                             relative_error(exact, newton_bernstein(x[perm], f[perm])),
                             relative_error(exact, newton_bernstein(x, f))]))
    return ExperimentTable(3, "Chebyshev zeros mapped to [0, 1], n = 25",
                           ["LU", "NewtonBernstein_Leja", "NewtonBernstein"], rows,
                           {"condition_number": condition_number(A), "oracle": "200-bit mpmath"})


def _tensor_table(example: int, title: str, prob: dict, oracle: str) -> ExperimentTable:
    axes_f = [_floats(a) for a in prob["axes"]]
    A = assemble_tensor_bv_matrix(axes_f)
    rows = []
    for label, f in prob["loads"].items():
        if oracle == "exact rational":
            exact = exact_solve_tensor(prob["axes"], f).astype(float)
        else:
            exact = extended_solve_tensor(axes_f, f, prec=200)
        full = lu_solve(A.T, f.ravel().astype(float)).reshape(f.shape)
        rows.append((label, [relative_error(exact, full),
                             relative_error(exact, tensor_sweep(axes_f, f)),
                             relative_error(exact, tensor_sweep(axes_f, f, solver=_lu_1d))]))
    axis_kappa = [condition_number(assemble_bv_matrix(a)) for a in axes_f]
    info = {"system_size": A.shape[0], "axis_condition_numbers": axis_kappa,
            "condition_number": math.prod(axis_kappa), "oracle": oracle}
    return ExperimentTable(example, title, ["LU_full", "NewtonBernstein", "Tensor_LU"], rows, info)


def example4() -> ExperimentTable:
    return _tensor_table(4, "tensor grid 16 x 16", example4_problem(), "exact rational")


def example5() -> ExperimentTable:
    return _tensor_table(5, "tensor grid 11 x 11 x 11", example5_problem(), "200-bit mpmath")


def example6() -> ExperimentTable:
    prob = example6_problem()
    tri_r = prob["triangle"]
    tri = Triangle(*[tuple(float(c) for c in v) for v in tri_r.vertices])
    pts_r = [p for g in prob["groups"] for p in g]
    pts = [(float(a), float(b)) for a, b in pts_r]
    A = assemble_simplex_bv_matrix(pts, tri, prob["degree"])
    rows = []
    for label, load in prob["loads"].items():
        exact = _floats(exact_solve_simplex(pts_r, load, tri_r, prob["degree"]))
        f = _floats(load)
        sizes = [len(g) for g in prob["groups"]]
        offs = np.cumsum([0] + sizes)
        part = NodePartition([(pts[a:b], f[a:b]) for a, b in zip(offs[:-1], offs[1:])])
        rows.append((label, [relative_error(exact, lu_solve(A.T, f)),
                             relative_error(exact, newton_bernstein_2d(part, tri))]))
    return ExperimentTable(6, "degree-10 nodes on horizontal chords of the unit triangle",
                           ["LU", "S2D-NewtonBernstein"], rows,
                           {"condition_number": condition_number(A), "oracle": "exact rational"})


EXAMPLES = {1: example1, 2: example2, 3: example3, 4: example4, 5: example5, 6: example6}


def run_example(example: int) -> ExperimentTable:
    try:
        return EXAMPLES[example]()
    except KeyError:
        raise ValueError(f"no example {example}; choose 1..6") from None
