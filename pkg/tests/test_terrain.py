import numpy as np
import pytest

from terrapose import (
    BSPLINE_BASIS,
    ControlGrid,
    SurfacePath,
    TerrainBoundsError,
    TerrainSurface,
    eval_patch,
    eval_path,
    path_heading,
)
from terrapose.terrain import parameter_powers, parameter_powers_d1, parameter_powers_d2

from conftest import make_plane_surface, make_random_surface


class TestBasis:
    def test_partition_of_unity(self):
        # The four basis weights must sum to 1 everywhere in the span.
        for t in np.linspace(0.0, 1.0, 257):
            weights = parameter_powers(t) @ BSPLINE_BASIS
            assert abs(weights.sum() - 1.0) < 1e-14

    def test_basis_weight_endpoints(self):
        w0 = parameter_powers(0.0) @ BSPLINE_BASIS
        assert np.allclose(w0, [1 / 6, 4 / 6, 1 / 6, 0.0], atol=1e-15)


class TestControlGrid:
    def test_rejects_small_grid(self):
        with pytest.raises(ValueError):
            ControlGrid(0.0, 0.0, 1.0, np.zeros((3, 4)))

    def test_rejects_bad_spacing(self):
        with pytest.raises(ValueError):
            ControlGrid(0.0, 0.0, 0.0, np.zeros((4, 4)))

    def test_rejects_non_finite_heights(self):
        heights = np.zeros((4, 4))
        heights[1, 2] = np.nan
        with pytest.raises(ValueError):
            ControlGrid(0.0, 0.0, 1.0, heights)

    def test_heights_become_read_only(self):
        grid = ControlGrid(0.0, 0.0, 1.0, np.zeros((4, 4)))
        with pytest.raises(ValueError):
            grid.heights[0, 0] = 1.0


class TestEvalPatch:
    def test_zero_control_gives_zero(self):
        surface = make_plane_surface()
        patch = surface.patch_at(0.1, 0.2)
        for v, w in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)]:
            assert eval_patch(patch, v, w)[2] == pytest.approx(0.0, abs=1e-15)

    def test_constant_control_reproduced(self):
        surface = make_plane_surface(c=2.5)
        patch = surface.patch_at(-0.4, 0.9)
        for v, w in [(0.0, 0.5), (0.25, 0.25), (1.0, 0.0)]:
            assert eval_patch(patch, v, w)[2] == pytest.approx(2.5, abs=1e-12)

    def test_plane_value_at_interior_parameters(self):
        # Cubic B-splines reproduce affine data; compare with the plane
        # formula at the mapped world point.
        surface = make_plane_surface(a=1.0)
        patch = surface.patch_at(0.3, -0.6)
        point = eval_patch(patch, 0.3, 0.7)
        assert point[2] == pytest.approx(point[0], abs=1e-12)

    def test_parameters_out_of_range_rejected(self):
        surface = make_plane_surface()
        patch = surface.patch_at(0.0, 0.0)
        with pytest.raises(ValueError):
            eval_patch(patch, 1.2, 0.5)
        with pytest.raises(ValueError):
            eval_patch(patch, 0.5, -0.1)


class TestHeightQueries:
    def test_flat_interior_is_zero(self, flat_surface):
        for x, y in [(0.0, 0.0), (-1.0, 0.7), (1.3, -1.3)]:
            assert flat_surface.height_at(x, y) == pytest.approx(0.0, abs=1e-15)

    def test_affine_reproduction_point(self):
        surface = make_plane_surface(a=2.0, b=3.0, rows=20, cols=20,
                                     origin_x=-1.0, origin_y=-1.0, spacing=0.5)
        assert surface.height_at(1.0, 2.0) == pytest.approx(8.0, abs=1e-10)

    def test_affine_reproduction_everywhere(self):
        rng = np.random.default_rng(3)
        a, b, c = rng.uniform(-2, 2, 3)
        surface = make_plane_surface(a=a, b=b, c=c)
        fx0, fx1, fy0, fy1 = surface.footprint
        xs = np.linspace(fx0, fx1, 23)
        ys = np.linspace(fy0, fy1, 23)
        for x in xs:
            got = surface.heights_at(np.full_like(ys, x), ys)
            assert np.allclose(got, a * x + b * ys + c, atol=1e-10)

    def test_vector_and_scalar_queries_agree(self):
        surface = make_random_surface(seed=5)
        rng = np.random.default_rng(11)
        fx0, fx1, fy0, fy1 = surface.footprint
        xs = rng.uniform(fx0, fx1, 40)
        ys = rng.uniform(fy0, fy1, 40)
        batch = surface.heights_at(xs, ys)
        single = [surface.height_at(x, y) for x, y in zip(xs, ys)]
        assert np.allclose(batch, single, atol=0.0)

    def test_footprint_edge_is_evaluable(self, flat_surface):
        fx0, fx1, fy0, fy1 = flat_surface.footprint
        assert flat_surface.height_at(fx0, fy0) == pytest.approx(0.0, abs=1e-12)
        assert flat_surface.height_at(fx1, fy1) == pytest.approx(0.0, abs=1e-12)

    def test_query_beyond_edge_rejected(self, flat_surface):
        fx0, fx1, fy0, fy1 = flat_surface.footprint
        s = flat_surface.grid.spacing
        with pytest.raises(TerrainBoundsError):
            flat_surface.height_at(fx1 + s, 0.0)
        with pytest.raises(TerrainBoundsError):
            flat_surface.height_at(0.0, fy0 - s)

    def test_outer_margin_not_queryable(self, flat_surface):
        # Inside the grid bounding box but without full 4x4 support.
        g = flat_surface.grid
        with pytest.raises(TerrainBoundsError):
            flat_surface.height_at(g.origin_x + 0.4 * g.spacing, 0.0)

    def test_nan_query_rejected(self, flat_surface):
        with pytest.raises(TerrainBoundsError):
            flat_surface.height_at(float("nan"), 0.0)


class TestContinuity:
    def _window_eval(self, surface, cx, cy, v, w, dv=0, dw=0):
        # Evaluate one 4x4 window directly from control points so adjacent
        # windows can be compared across their shared seam.
        h = surface.grid.heights
        d = h[cy : cy + 4, cx : cx + 4].T
        pv = (parameter_powers, parameter_powers_d1, parameter_powers_d2)[dv](v)
        pw = (parameter_powers, parameter_powers_d1, parameter_powers_d2)[dw](w)
        return float(pv @ BSPLINE_BASIS @ d @ BSPLINE_BASIS.T @ pw)

    def test_c2_across_x_seams(self):
        surface = make_random_surface(seed=9, amplitude=0.5)
        cells_x = surface.grid.cols - 3
        for cx in range(cells_x - 1):
            for w in (0.0, 0.31, 0.77):
                for dv in (0, 1, 2):
                    left = self._window_eval(surface, cx, 2, 1.0, w, dv=dv)
                    right = self._window_eval(surface, cx + 1, 2, 0.0, w, dv=dv)
                    assert left == pytest.approx(right, abs=1e-9)

    def test_c2_across_y_seams(self):
        surface = make_random_surface(seed=10, amplitude=0.5)
        cells_y = surface.grid.rows - 3
        for cy in range(cells_y - 1):
            for v in (0.12, 0.5, 0.93):
                for dw in (0, 1, 2):
                    low = self._window_eval(surface, 3, cy, v, 1.0, dw=dw)
                    high = self._window_eval(surface, 3, cy + 1, v, 0.0, dw=dw)
                    assert low == pytest.approx(high, abs=1e-9)

    def test_gradient_matches_finite_difference(self):
        surface = make_random_surface(seed=12, amplitude=0.3)
        rng = np.random.default_rng(1)
        fx0, fx1, fy0, fy1 = surface.footprint
        eps = 1e-6
        for _ in range(20):
            x = rng.uniform(fx0 + 0.1, fx1 - 0.1)
            y = rng.uniform(fy0 + 0.1, fy1 - 0.1)
            _, gx, gy = surface.height_and_gradient(x, y)
            fdx = (surface.height_at(x + eps, y) - surface.height_at(x - eps, y)) / (2 * eps)
            fdy = (surface.height_at(x, y + eps) - surface.height_at(x, y - eps)) / (2 * eps)
            assert gx == pytest.approx(fdx, abs=1e-6)
            assert gy == pytest.approx(fdy, abs=1e-6)


class TestNormals:
    def test_flat_normal_is_up(self, flat_surface):
        assert np.allclose(flat_surface.normal_at(0.3, -0.4), [0.0, 0.0, 1.0], atol=1e-12)

    def test_x_ramp_normal(self):
        surface = make_plane_surface(a=1.0)
        n = surface.normal_at(0.25, 0.25)
        assert np.allclose(n, [-np.sqrt(0.5), 0.0, np.sqrt(0.5)], atol=1e-10)

    def test_y_ramp_normal(self):
        surface = make_plane_surface(b=1.0)
        n = surface.normal_at(-0.5, 0.5)
        assert np.allclose(n, [0.0, -np.sqrt(0.5), np.sqrt(0.5)], atol=1e-10)

    def test_normals_unit_and_upward(self):
        surface = make_random_surface(seed=21, amplitude=0.4)
        rng = np.random.default_rng(2)
        fx0, fx1, fy0, fy1 = surface.footprint
        for _ in range(50):
            n = surface.normal_at(rng.uniform(fx0, fx1), rng.uniform(fy0, fy1))
            assert abs(np.linalg.norm(n) - 1.0) < 1e-12
            assert n[2] > 0.0


class TestSurfacePath:
    def test_constant_point_path(self, flat_surface):
        control = np.full((16, 2), 0.5)
        path = SurfacePath(control)
        expected = flat_surface.param_to_world(0.5, 0.5)
        for u in (0.0, 0.33, 1.0):
            point = eval_path(path, flat_surface, u)
            assert np.allclose(point[:2], expected, atol=1e-12)
            assert point[2] == pytest.approx(0.0, abs=1e-14)

    def test_flat_surface_any_path_z_zero(self, flat_surface):
        rng = np.random.default_rng(4)
        path = SurfacePath(rng.uniform(0.2, 0.8, (4, 4, 2)))
        for u in np.linspace(0, 1, 9):
            assert eval_path(path, flat_surface, u)[2] == pytest.approx(0.0, abs=1e-14)

    def test_diagonal_path_on_ramp_matches_plane(self):
        surface = make_plane_surface(a=1.0)
        t = np.linspace(0.25, 0.75, 16)
        path = SurfacePath(np.stack([t, t], axis=1))
        point = eval_path(path, surface, 0.5)
        assert point[2] == pytest.approx(point[0], abs=1e-10)

    def test_4x4x2_array_accepted(self):
        control = np.full((4, 4, 2), 0.5)
        assert SurfacePath(control).control.shape == (16, 2)

    def test_control_outside_unit_square_rejected(self):
        control = np.full((16, 2), 0.5)
        control[3, 0] = 1.2
        with pytest.raises(ValueError):
            SurfacePath(control)

    def test_u_out_of_range_rejected(self, flat_surface):
        path = SurfacePath(np.full((16, 2), 0.5))
        with pytest.raises(ValueError):
            eval_path(path, flat_surface, 1.5)

    def test_straight_path_heading_constant(self, flat_surface):
        t = np.linspace(0.2, 0.8, 16)
        path = SurfacePath(np.stack([t, t], axis=1))
        fx0, fx1, fy0, fy1 = flat_surface.footprint
        expected = np.arctan2(fy1 - fy0, fx1 - fx0)
        for u in (0.0, 0.5, 1.0):
            assert path_heading(path, flat_surface, u) == pytest.approx(expected, abs=1e-6)

    def test_degenerate_tangent_heading_zero(self, flat_surface):
        path = SurfacePath(np.full((16, 2), 0.5))
        assert path_heading(path, flat_surface, 0.5) == 0.0


class TestParameterMaps:
    def test_param_world_round_trip(self, flat_surface):
        for v, w in [(0.0, 0.0), (0.42, 0.87), (1.0, 1.0)]:
            x, y = flat_surface.param_to_world(v, w)
            v2, w2 = flat_surface.world_to_param(x, y)
            assert v2 == pytest.approx(v, abs=1e-12)
            assert w2 == pytest.approx(w, abs=1e-12)

    def test_patch_at_covers_query(self):
        surface = make_random_surface(seed=31)
        patch = surface.patch_at(0.4, -0.7)
        assert patch.cell_x <= 0.4 <= patch.cell_x + patch.spacing
        assert patch.cell_y <= -0.7 <= patch.cell_y + patch.spacing

    def test_patch_eval_matches_surface(self):
        surface = make_random_surface(seed=32)
        x, y = 0.37, -0.21
        patch = surface.patch_at(x, y)
        v = (x - patch.cell_x) / patch.spacing
        w = (y - patch.cell_y) / patch.spacing
        assert eval_patch(patch, v, w)[2] == pytest.approx(surface.height_at(x, y), abs=1e-12)
