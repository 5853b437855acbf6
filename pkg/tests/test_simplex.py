"""Tests for interpolation on a triangle."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import numpy.testing as npt
import pytest

from _problems import float_groups, random_simplex_problem, separated_simplex_problem, unit_triangle
from bbinterp.bb_core import Triangle, barycentric_coords, de_casteljau_1d, de_casteljau_simplex, bb_product_affine
from bbinterp.errors import GeometryError, PartitionError, SolvabilityError
from bbinterp.reference import exact_solve_simplex, relative_error
from bbinterp.simplex import (
    LineSegment,
    NewtonBernstein2DTrace,
    NodePartition,
    bb_affine,
    bb_extension,
    chord,
    detect_partition,
    gcap_t,
    newton_bernstein_2d,
    transform_1d,
)

TRI = Triangle.unit()


def evaluate(c, tri: Triangle, point) -> float:
    return float(de_casteljau_simplex(c, barycentric_coords(tri, point)))


class TestBBAffine:
    def test_vertical_line(self) -> None:
        npt.assert_allclose(bb_affine([(0.5, 0), (0.5, 0.5)], TRI), [-1, 1, -1])

    def test_bottom_edge(self) -> None:
        g = bb_affine([(0, 0), (1, 0)], TRI)
        npt.assert_allclose(np.abs(g), [0, 0, 1], atol=1e-15)

    def test_vanishes_on_group(self) -> None:
        rng = np.random.default_rng(0)
        for _ in range(10):
            a, b = rng.random((2, 2)) * 0.5
            pts = [a + t * (b - a) for t in rng.random(4)]
            g = bb_affine(pts, TRI)
            assert np.max(np.abs(g)) == pytest.approx(1.0)
            for p in pts:
                assert abs(evaluate(g, TRI, p)) <= 1e-12

    def test_not_collinear(self) -> None:
        with pytest.raises(PartitionError):
            bb_affine([(0, 0), (1, 0), (0.5, 0.1)], TRI)

    def test_needs_two_nodes(self) -> None:
        with pytest.raises(PartitionError):
            bb_affine([(0.2, 0.2)], TRI)


class TestGcapT:
    def test_vertical_line(self) -> None:
        seg = gcap_t([-1, 1, -1], TRI)
        assert seg.kappa == 1  # second vertex, counted from zero
        npt.assert_allclose(seg.z1, (0.5, 0))
        npt.assert_allclose(seg.z2, (0.5, 0.5))

    def test_horizontal_line(self) -> None:
        seg = gcap_t([-1, -1, 1], TRI)
        assert seg.kappa == 2
        assert {tuple(np.round(seg.z1, 12)), tuple(np.round(seg.z2, 12))} == {(0.0, 0.5), (0.5, 0.5)}

    def test_edge_line_rejected(self) -> None:
        with pytest.raises(GeometryError):
            gcap_t([0, 0, -1], TRI)

    def test_line_missing_triangle(self) -> None:
        with pytest.raises(GeometryError):
            gcap_t([1, 2, 3], TRI)

    def test_line_through_vertex_rejected(self) -> None:
        # x = y passes through the vertex (0, 0)
        with pytest.raises(GeometryError):
            gcap_t([0, 1, -1], TRI)

    def test_sign_conditions(self) -> None:
        rng = np.random.default_rng(1)
        for _ in range(30):
            verts = rng.normal(size=(3, 2))
            tri = Triangle(*map(tuple, verts))
            lam_a, lam_b = rng.dirichlet([1, 1, 1], 2)
            a, b = lam_a @ verts, lam_b @ verts
            seg = gcap_t(bb_affine([a, b], tri), tri)
            l1 = barycentric_coords(tri, seg.z1)
            l2 = barycentric_coords(tri, seg.z2)
            # z1 is on the edge opposite kappa + 1, z2 on the edge opposite kappa + 2
            a, b = (seg.kappa + 1) % 3, (seg.kappa + 2) % 3
            assert abs(l1[a]) <= 1e-12 and l1[b] > 0 and l1[seg.kappa] > 0
            assert abs(l2[b]) <= 1e-12 and l2[a] > 0 and l2[seg.kappa] > 0

    def test_chord_accepts_edge(self) -> None:
        seg = chord([0, 0, -1], TRI)
        assert seg.kappa == 2
        assert {seg.z1, seg.z2} == {(0.0, 0.0), (1.0, 0.0)}


class TestTransform1D:
    SEG = LineSegment((0.5, 0.0), (0.5, 0.5), 1)

    def test_start(self) -> None:
        npt.assert_allclose(transform_1d([(0.5, 0.0)], self.SEG), [0.0])

    def test_midpoint(self) -> None:
        npt.assert_allclose(transform_1d([(0.5, 0.25)], self.SEG), [0.5])

    def test_outside_chord(self) -> None:
        with pytest.raises(PartitionError):
            transform_1d([(0.5, 0.75)], self.SEG)


class TestBBExtension:
    def test_horizontal_chord(self) -> None:
        seg = LineSegment((0.0, 0.5), (0.5, 0.5), 2)
        npt.assert_allclose(bb_extension([1.0, 1.0], seg, TRI), [2.0, 2.0, 0.0])

    def test_degree_zero(self) -> None:
        seg = gcap_t([-1, 1, -1], TRI)
        npt.assert_allclose(bb_extension([4.0], seg, TRI), [4.0])

    @pytest.mark.parametrize("seed", range(5))
    def test_restriction(self, seed: int) -> None:
        rng = np.random.default_rng(seed)
        verts = rng.normal(size=(3, 2))
        tri = Triangle(*map(tuple, verts))
        lam_a, lam_b = rng.dirichlet([1, 1, 1], 2)
        seg = gcap_t(bb_affine([lam_a @ verts, lam_b @ verts], tri), tri)
        cg = rng.normal(size=int(rng.integers(1, 8)))
        ext = bb_extension(cg, seg, tri)
        z1, z2 = np.array(seg.z1), np.array(seg.z2)
        for t in np.linspace(0, 1, 10):
            point = z1 + t * (z2 - z1)
            assert evaluate(ext, tri, point) == pytest.approx(de_casteljau_1d(cg, t), abs=1e-12 * max(1, np.abs(cg).max()))

    def test_zero_off_chord_face(self) -> None:
        seg = gcap_t([-1, 1, -1], TRI)
        ext = bb_extension(np.arange(1.0, 4.0), seg, TRI)
        from bbinterp.bb_core import enumerate_multi_indices

        for alpha, v in zip(enumerate_multi_indices(2, 2), ext):
            if alpha[seg.kappa] > 0:
                assert v == 0.0


class TestNewtonBernstein2D:
    def test_vertex_problem(self) -> None:
        part = NodePartition([([(1, 0), (0, 1)], [5.0, 7.0]), ([(0, 0)], [3.0])])
        npt.assert_allclose(newton_bernstein_2d(part, TRI), [3, 5, 7], atol=1e-14)

    def test_constant_data(self) -> None:
        rng = np.random.default_rng(2)
        groups, _ = random_simplex_problem(rng, 4)
        part = NodePartition([(pts, [2.5] * len(vals)) for pts, vals in float_groups(groups, [0] * 15)])
        npt.assert_allclose(newton_bernstein_2d(part, TRI), 2.5, atol=1e-11)

    def test_quadratic_against_oracle(self) -> None:
        rng = np.random.default_rng(3)
        groups = [
            [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)), (Fraction(1), Fraction(0))],
            [(Fraction(1, 8), Fraction(1, 4)), (Fraction(1, 2), Fraction(1, 4))],
            [(Fraction(1, 4), Fraction(5, 8))],
        ]
        a = rng.integers(-4, 5, 6)
        data = [Fraction(int(a[0])) + a[1] * x + a[2] * y + a[3] * x * x + a[4] * x * y + a[5] * y * y
                for g in groups for x, y in g]
        exact = [float(v) for v in exact_solve_simplex([p for g in groups for p in g], data, unit_triangle(True), 2)]
        part = NodePartition(float_groups(groups, data))
        npt.assert_allclose(newton_bernstein_2d(part, TRI), exact, atol=1e-12)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_residual_smooth_data(self, n: int) -> None:
        rng = np.random.default_rng(40 + n)
        groups, _ = separated_simplex_problem(rng, n)
        part = NodePartition(
            [(pts, [np.exp(x) * np.sin(2 * y + 1) for x, y in pts]) for pts, _ in float_groups(groups, [0] * 66)]
        )
        c = newton_bernstein_2d(part, TRI)
        f = part.values()
        resid = max(abs(evaluate(c, TRI, p) - v) for p, v in zip(part.points(), f))
        assert resid <= 1e-10 * np.abs(f).max()

    @pytest.mark.parametrize("n", range(1, 11))
    def test_residual_random_data(self, n: int) -> None:
        # integer data give control points near 1e8 at degree 10, and rounding
        # those alone moves the node values by about eps * max|c|
        rng = np.random.default_rng(40 + n)
        groups, data = separated_simplex_problem(rng, n)
        part = NodePartition(float_groups(groups, data))
        c = newton_bernstein_2d(part, TRI)
        f = part.values()
        resid = max(abs(evaluate(c, TRI, p) - v) for p, v in zip(part.points(), f))
        assert resid <= 1e-13 * max(np.abs(c).max(), np.abs(f).max())

    @pytest.mark.parametrize("n", range(1, 6))
    def test_oracle_equivalence(self, n: int) -> None:
        rng = np.random.default_rng(n)
        groups, data = random_simplex_problem(rng, n)
        exact = [float(v) for v in exact_solve_simplex([p for g in groups for p in g], data, unit_triangle(True), n)]
        got = newton_bernstein_2d(NodePartition(float_groups(groups, data)), TRI)
        assert relative_error(exact, got) <= 1e-11

    def test_corner_chords_lose_accuracy(self) -> None:
        # chords ending close to the isolated vertex make the extension divide by
        # small barycentric values; the result still interpolates, only less accurately
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(40):
            n = int(rng.integers(3, 6))
            groups, data = random_simplex_problem(rng, n, edge_params=(1, 15))
            exact = [float(v) for v in exact_solve_simplex([p for g in groups for p in g], data, unit_triangle(True), n)]
            got = newton_bernstein_2d(NodePartition(float_groups(groups, data)), TRI)
            worst = max(worst, relative_error(exact, got))
        assert worst <= 1e-5

    def test_restriction_and_annihilation(self) -> None:
        rng = np.random.default_rng(5)
        n = 6
        groups, data = random_simplex_problem(rng, n)
        part = NodePartition(float_groups(groups, data))
        trace = NewtonBernstein2DTrace()
        newton_bernstein_2d(part, TRI, trace=trace)
        for i, (ext, t, vals, cg) in enumerate(zip(trace.extensions, trace.line_params, trace.line_data, trace.line_coeffs)):
            pts = part.groups[i][0]
            scale = max(1.0, np.abs(vals).max())
            for p, ti, v in zip(pts, t, vals):
                assert evaluate(ext, TRI, p) == pytest.approx(v, abs=1e-12 * scale)
                assert de_casteljau_1d(cg, ti) == pytest.approx(v, abs=1e-12 * scale)
        # prod_{i > j} G_i vanishes on every node of the groups A_i, i > j
        prod = np.array([1.0])
        for i, g in enumerate(trace.lines):
            prod = bb_product_affine(prod, g)
            for earlier in range(i + 1):
                for p in part.groups[earlier][0]:
                    assert abs(evaluate(prod, TRI, p)) <= 1e-12

    def test_affine_invariance(self) -> None:
        rng = np.random.default_rng(6)
        groups, data = random_simplex_problem(rng, 5)
        part = NodePartition(float_groups(groups, data))
        base = newton_bernstein_2d(part, TRI)
        M = np.array([[2.0, 0.7], [-0.4, 1.5]])
        shift = np.array([3.0, -1.0])
        mapped_tri = Triangle(*[tuple(M @ np.array(v, dtype=float) + shift) for v in TRI.vertices])
        mapped = NodePartition([(np.asarray(p) @ M.T + shift, v) for p, v in part.groups])
        assert relative_error(base, newton_bernstein_2d(mapped, mapped_tri)) <= 1e-11

    @pytest.mark.parametrize("ordering", ["ascending", "leja"])
    def test_line_orderings(self, ordering: str) -> None:
        rng = np.random.default_rng(7)
        groups, data = random_simplex_problem(rng, 5)
        part = NodePartition(float_groups(groups, data))
        assert relative_error(newton_bernstein_2d(part, TRI), newton_bernstein_2d(part, TRI, ordering=ordering)) <= 1e-11

    def test_node_on_earlier_line(self) -> None:
        part = NodePartition([
            ([(0, 0), (0.5, 0), (1, 0)], [1, 2, 3]),
            ([(0.25, 0.25), (0.25, 0.5)], [1, 1]),
            ([(0.25, 0)], [0]),
        ])
        with pytest.raises((SolvabilityError, PartitionError)):
            newton_bernstein_2d(part, TRI)

    def test_wrong_group_size(self) -> None:
        part = NodePartition([([(0, 0), (1, 0)], [1, 2]), ([(0.2, 0.3), (0.1, 0.1)], [0, 0])])
        with pytest.raises(PartitionError):
            newton_bernstein_2d(part, TRI)


class TestNodePartition:
    def test_validate_ok(self) -> None:
        part = NodePartition([([(1, 0), (0, 1)], [5, 7]), ([(0, 0)], [3])])
        part.validate(TRI)
        assert part.degree == 1

    def test_validate_duplicates(self) -> None:
        part = NodePartition([([(1, 0), (0, 1)], [5, 7]), ([(1, 0)], [3])])
        with pytest.raises(PartitionError):
            part.validate(TRI)


class TestDetectPartition:
    def test_principal_lattice(self) -> None:
        pts = [(i / 2, j / 2) for i in range(3) for j in range(3 - i)]
        part = detect_partition(pts, np.arange(6.0))
        part.validate(TRI)
        assert [len(p) for p, _ in part.groups] == [3, 2, 1]
        npt.assert_allclose(newton_bernstein_2d(part, TRI), newton_bernstein_2d(part, TRI))

    def test_three_points(self) -> None:
        part = detect_partition([(0.1, 0.1), (0.6, 0.2), (0.3, 0.5)], [1, 2, 3])
        part.validate(TRI)
        assert [len(p) for p, _ in part.groups] == [2, 1]

    def test_general_position(self) -> None:
        pts = [(0.1, 0.1), (0.7, 0.15), (0.2, 0.6), (0.4, 0.3), (0.05, 0.35), (0.33, 0.12)]
        with pytest.raises(PartitionError):
            detect_partition(pts, np.zeros(6))

    def test_not_triangular(self) -> None:
        with pytest.raises(PartitionError):
            detect_partition([(0, 0), (1, 0)], [1, 2])

    def test_recovers_random_partition(self) -> None:
        rng = np.random.default_rng(8)
        groups, data = random_simplex_problem(rng, 3)
        fg = float_groups(groups, data)
        pts = [p for g, _ in fg for p in g]
        vals = [v for _, g in fg for v in g]
        perm = rng.permutation(len(pts))
        part = detect_partition([pts[i] for i in perm], [vals[i] for i in perm])
        part.validate(TRI)
        c = newton_bernstein_2d(part, TRI)
        for p, v in zip(pts, vals):
            assert evaluate(c, TRI, p) == pytest.approx(v, abs=1e-9)
