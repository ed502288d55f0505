"""B-spline terrain surfaces.

A terrain is a regular grid of control heights interpreted as a uniform
bicubic B-spline: every 4x4 window of control points defines one patch, and
adjacent windows share 12 of their 16 points, which makes the stitched surface
C2-continuous by construction.  Control points are not interpolated exactly;
the surface smooths them.  (x, y) map affinely between world coordinates and
the per-cell parameters, so only the height is nonlinear.

The outer one-cell margin of the grid has no complete 4x4 window; queries
there raise :class:`TerrainBoundsError` rather than extrapolating.

Instances are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import TerrainBoundsError

# Uniform cubic B-spline basis in matrix form; pairs with the parameter powers
# (t^3, t^2, t, 1).  Rows sum to the classic (1, 4, 1)/6 weights at t=0.
BSPLINE_BASIS = np.array(
    [
        [-1.0, 3.0, -3.0, 1.0],
        [3.0, -6.0, 3.0, 0.0],
        [-3.0, 0.0, 3.0, 0.0],
        [1.0, 4.0, 1.0, 0.0],
    ]
) / 6.0


def parameter_powers(t):
    """Monomial row vector (t^3, t^2, t, 1)."""
    return np.array([t * t * t, t * t, t, 1.0])


def parameter_powers_d1(t):
    return np.array([3.0 * t * t, 2.0 * t, 1.0, 0.0])


def parameter_powers_d2(t):
    return np.array([6.0 * t, 2.0, 0.0, 0.0])


@dataclass(frozen=True)
class ControlGrid:
    """Regular grid of control heights.

    ``heights[i, j]`` is the control value at
    ``(origin_x + j * spacing, origin_y + i * spacing)``; rows run along y.
    """

    origin_x: float
    origin_y: float
    spacing: float
    heights: np.ndarray

    def __post_init__(self):
        heights = np.ascontiguousarray(np.asarray(self.heights, dtype=float))
        if heights.ndim != 2:
            raise ValueError("heights must be a 2-D array")
        rows, cols = heights.shape
        if rows < 4 or cols < 4:
            raise ValueError(f"grid must be at least 4x4, got {rows}x{cols}")
        if not (self.spacing > 0.0) or not np.isfinite(self.spacing):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if not np.isfinite(heights).all():
            raise ValueError("heights must be finite")
        if not (np.isfinite(self.origin_x) and np.isfinite(self.origin_y)):
            raise ValueError("grid origin must be finite")
        heights.setflags(write=False)
        object.__setattr__(self, "heights", heights)

    @property
    def rows(self):
        return self.heights.shape[0]

    @property
    def cols(self):
        return self.heights.shape[1]


@dataclass(frozen=True)
class BPatch:
    """One bicubic patch: the 4x4 control window backing a single grid cell.

    ``D[a, b]`` is the control height with x-offset ``a`` and y-offset ``b``
    inside the window.  The patch covers the central cell of the window,
    ``[cell_x, cell_x + spacing] x [cell_y, cell_y + spacing]`` in world
    coordinates, parameterised by (v, w) in [0, 1]^2.
    """

    D: np.ndarray
    cell_x: float
    cell_y: float
    spacing: float

    def world_point(self, v, w):
        return self.cell_x + v * self.spacing, self.cell_y + w * self.spacing


def eval_patch(patch: BPatch, v: float, w: float) -> np.ndarray:
    """Evaluate a patch at local parameters, returning the world (x, y, z).

    x and y come from the affine cell map; only z goes through the spline
    form V.R.D.Rt.Wt.
    """
    if not (0.0 <= v <= 1.0 and 0.0 <= w <= 1.0):
        raise ValueError(f"(v, w) must lie in [0, 1]^2, got ({v}, {w})")
    x, y = patch.world_point(v, w)
    z = parameter_powers(v) @ BSPLINE_BASIS @ patch.D @ BSPLINE_BASIS.T @ parameter_powers(w)
    return np.array([x, y, float(z)])


class TerrainSurface:
    """Evaluable view of a :class:`ControlGrid`.

    Precomputes R.D.Rt per 4x4 window so each height query is a single
    bicubic form; the heavy queries dispatch through ``kernels``.
    """

    def __init__(self, grid: ControlGrid):
        self.grid = grid
        rows, cols = grid.rows, grid.cols
        # windows[i, j, r, c] = heights[i + r, j + c]; transpose the window so
        # the first patch index runs along x, matching V.(R D Rt).Wt.
        windows = np.lib.stride_tricks.sliding_window_view(grid.heights, (4, 4))
        d = windows.transpose(0, 1, 3, 2)
        basis = BSPLINE_BASIS
        coeff = np.einsum("ma,ijab,nb->ijmn", basis, d, basis, optimize=True)
        self._coeff = np.ascontiguousarray(coeff)
        self._coeff.setflags(write=False)
        self._inv_spacing = 1.0 / grid.spacing
        self._cells_x = cols - 3
        self._cells_y = rows - 3

    @property
    def footprint(self):
        """Evaluable world rectangle (x_min, x_max, y_min, y_max)."""
        g = self.grid
        return (
            g.origin_x + g.spacing,
            g.origin_x + (g.cols - 2) * g.spacing,
            g.origin_y + g.spacing,
            g.origin_y + (g.rows - 2) * g.spacing,
        )

    @property
    def max_control_height(self):
        # Upper bound for the surface anywhere (convex-hull property).
        return float(self.grid.heights.max())

    @property
    def min_control_height(self):
        return float(self.grid.heights.min())

    def _raise_bounds(self, x, y):
        fx0, fx1, fy0, fy1 = self.footprint
        raise TerrainBoundsError(
            f"({x:.6g}, {y:.6g}) is outside the evaluable footprint "
            f"[{fx0:.6g}, {fx1:.6g}] x [{fy0:.6g}, {fy1:.6g}]"
        )

    def heights_at(self, xs, ys):
        """Vectorised heights for world coordinates; raises on any point
        outside the footprint."""
        xs = np.ascontiguousarray(xs, dtype=float)
        ys = np.ascontiguousarray(ys, dtype=float)
        out = np.empty_like(xs)
        g = self.grid
        bad = kernels.surface_heights(
            self._coeff, g.origin_x, g.origin_y, self._inv_spacing, xs, ys, out
        )
        if bad >= 0:
            self._raise_bounds(xs[bad], ys[bad])
        return out

    def height_at(self, x, y) -> float:
        return float(self.heights_at(np.array([x], dtype=float), np.array([y], dtype=float))[0])

    def height_and_gradient(self, x, y):
        """(z, dz/dx, dz/dy) at one world point."""
        xs = np.array([x], dtype=float)
        ys = np.array([y], dtype=float)
        z = np.empty(1)
        gx = np.empty(1)
        gy = np.empty(1)
        g = self.grid
        bad = kernels.surface_heights_grads(
            self._coeff, g.origin_x, g.origin_y, self._inv_spacing, xs, ys, z, gx, gy
        )
        if bad >= 0:
            self._raise_bounds(x, y)
        return float(z[0]), float(gx[0]), float(gy[0])

    def normal_at(self, x, y) -> np.ndarray:
        """Unit surface normal with positive z component."""
        _, gx, gy = self.height_and_gradient(x, y)
        n = np.array([-gx, -gy, 1.0])
        return n / np.linalg.norm(n)

    def wheel_geometry(self, rot, com, offsets):
        """World wheel points and vertical gaps for a rigid placement.

        Returns ``(points, gaps)`` with shapes (k, 3) and (k,); raises if any
        wheel leaves the footprint.
        """
        offsets = np.ascontiguousarray(offsets, dtype=float)
        k = offsets.shape[0]
        points = np.empty((k, 3))
        gaps = np.empty(k)
        g = self.grid
        bad = kernels.wheel_contact_geometry(
            self._coeff,
            g.origin_x,
            g.origin_y,
            self._inv_spacing,
            np.ascontiguousarray(rot, dtype=float),
            np.ascontiguousarray(com, dtype=float),
            offsets,
            points,
            gaps,
        )
        if bad >= 0:
            self._raise_bounds(points[bad, 0], points[bad, 1])
        return points, gaps

    def patch_at(self, x, y) -> BPatch:
        """The patch whose cell contains (x, y)."""
        g = self.grid
        tx = (x - g.origin_x) * self._inv_spacing - 1.0
        ty = (y - g.origin_y) * self._inv_spacing - 1.0
        if not (0.0 <= tx <= self._cells_x and 0.0 <= ty <= self._cells_y):
            self._raise_bounds(x, y)
        cx = min(int(tx), self._cells_x - 1)
        cy = min(int(ty), self._cells_y - 1)
        window = self.grid.heights[cy : cy + 4, cx : cx + 4]
        return BPatch(
            D=window.T.copy(),
            cell_x=g.origin_x + (cx + 1) * g.spacing,
            cell_y=g.origin_y + (cy + 1) * g.spacing,
            spacing=g.spacing,
        )

    def param_to_world(self, v, w):
        """Map normalised surface parameters in [0, 1]^2 onto the footprint."""
        fx0, fx1, fy0, fy1 = self.footprint
        return fx0 + v * (fx1 - fx0), fy0 + w * (fy1 - fy0)

    def world_to_param(self, x, y):
        fx0, fx1, fy0, fy1 = self.footprint
        return (x - fx0) / (fx1 - fx0), (y - fy0) / (fy1 - fy0)


@dataclass(frozen=True)
class SurfacePath:
    """Planned route across a surface.

    Control points are a 4x4x2 array read row-major as 16 waypoints in the
    surface's normalised (v, w) parameter square; the path itself is the
    uniform cubic B-spline curve over those waypoints, re-parameterised so
    ``u`` in [0, 1] spans the whole curve.
    """

    control: np.ndarray = field()

    def __post_init__(self):
        control = np.asarray(self.control, dtype=float)
        if control.shape == (4, 4, 2):
            control = control.reshape(16, 2)
        if control.ndim != 2 or control.shape[0] < 4 or control.shape[1] != 2:
            raise ValueError(f"path control must be 4x4x2 (or k>=4 by 2), got {control.shape}")
        if not np.isfinite(control).all():
            raise ValueError("path control points must be finite")
        if (control < 0.0).any() or (control > 1.0).any():
            raise ValueError("path control points must lie in the unit parameter square")
        control = control.copy()
        control.setflags(write=False)
        object.__setattr__(self, "control", control)

    @property
    def spans(self):
        return self.control.shape[0] - 3

    def param_point(self, u: float) -> np.ndarray:
        """(v, w) on the curve at u in [0, 1]."""
        if not (0.0 <= u <= 1.0):
            raise ValueError(f"u must lie in [0, 1], got {u}")
        s = u * self.spans
        span = min(int(s), self.spans - 1)
        t = s - span
        window = self.control[span : span + 4]
        vw = parameter_powers(t) @ BSPLINE_BASIS @ window
        return vw


def eval_path(path: SurfacePath, surface: TerrainSurface, u: float) -> np.ndarray:
    """World (x, y, z) of the path at u.

    The curve yields (v, w); the affine footprint map yields (x, y); the
    spline yields z.  Raises if the curve leaves the evaluable footprint.
    """
    v, w = path.param_point(u)
    if not (0.0 <= v <= 1.0 and 0.0 <= w <= 1.0):
        raise ValueError(f"path point at u={u} leaves the parameter square: ({v}, {w})")
    x, y = surface.param_to_world(v, w)
    return np.array([x, y, surface.height_at(x, y)])


def path_heading(path: SurfacePath, surface: TerrainSurface, u: float, du: float = 1e-6) -> float:
    """Yaw angle (radians) of the xy tangent at u, by central finite difference.

    Falls back to one-sided differences at the ends of the parameter range and
    to 0 for a degenerate (stationary) tangent.
    """
    u0 = max(0.0, u - du)
    u1 = min(1.0, u + du)
    v0, w0 = path.param_point(u0)
    v1, w1 = path.param_point(u1)
    fx0, fx1, fy0, fy1 = surface.footprint
    dx = (v1 - v0) * (fx1 - fx0)
    dy = (w1 - w0) * (fy1 - fy0)
    if max(abs(dx), abs(dy)) < 1e-12:
        # Stationary tangent up to rounding noise.
        return 0.0
    return float(np.arctan2(dy, dx))
