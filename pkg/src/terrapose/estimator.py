"""Drop-to-equilibrium pose estimation.

Placing the vehicle at a planar position (x, y, yaw) leaves three unknowns:
height, roll and pitch.  Instead of solving the contact configuration
directly, the vehicle is dropped from above the terrain and integrated with
semi-implicit Euler in the reduced coordinates q = (z, roll, pitch).  Each
step solves for contact forces that cancel the predicted motion of every
wheel whose gap is below the contact threshold (a fully plastic impact), so
kinetic energy drains at every touch and the body settles into static
equilibrium; the pose there is the answer.

Gaps below ``d_epsilon`` are treated as exactly closed when building the
force problem, so contacts hold wheels at the height where they first
crossed the threshold.  ``dt``, ``d_epsilon`` and the drop clearance are the
accuracy knobs; the defaults resolve poses to a few millimetres.

Everything here is functional: ``step`` maps state to state and the inputs
are immutable, so independent queries can run on worker threads freely.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import contact
from .errors import ConvergenceError
from .terrain import eval_path, path_heading
from .vehicle import GRAVITY, FullConfiguration, build_wrench, rotation_matrix, wheel_world_points

# Consecutive quiet steps required before declaring equilibrium.
EQUILIBRIUM_STREAK = 3


@dataclass(frozen=True)
class SolverParams:
    """Integrator and solver settings for one estimation run."""

    dt: float = 1e-3
    d_epsilon: float = 0.01
    accel_tol: float = 1e-6
    vel_tol: float = 1e-6
    max_iterations: int = 100_000
    svd_epsilon: float = contact.DEFAULT_SVD_EPSILON

    def __post_init__(self):
        for name in ("dt", "d_epsilon", "accel_tol", "vel_tol"):
            value = getattr(self, name)
            if not (value > 0.0) or not np.isfinite(value):
                raise ValueError(f"{name} must be positive, got {value}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be at least 1, got {self.max_iterations}")
        if not (0.0 < self.svd_epsilon < 1.0):
            raise ValueError(f"svd_epsilon must lie in (0, 1), got {self.svd_epsilon}")


@dataclass(frozen=True)
class DropState:
    """Instantaneous integrator state.

    ``gaps`` and ``points`` describe the wheel geometry at ``q``; ``forces``
    and ``active`` are the contact resolution of the step that produced this
    state (empty before the first step).
    """

    q: np.ndarray
    v: np.ndarray
    accel: np.ndarray
    gaps: np.ndarray
    points: np.ndarray
    forces: np.ndarray
    active: tuple
    iteration: int


@dataclass(frozen=True)
class PoseResult:
    """Equilibrium pose for one placement."""

    placement: tuple
    q: np.ndarray
    contacts: np.ndarray
    forces: np.ndarray
    iterations: int
    elapsed: float
    elapsed_total: float

    @property
    def configuration(self) -> FullConfiguration:
        return FullConfiguration.from_parts(self.placement, self.q)

    @property
    def contact_count(self) -> int:
        return int(self.contacts.sum())


def _wheel_geometry(model, placement, q, surface):
    rot = rotation_matrix(q[1], q[2], placement[2])
    com = np.array([placement[0], placement[1], q[0]])
    return surface.wheel_geometry(rot, com, model.wheels)


def _weighted_norm(vec, length_scale):
    # Mixed units: angular entries are scaled by the lever arm so the
    # tolerance bounds wheel-point motion in metres.
    return float(np.sqrt(vec[0] ** 2 + (length_scale * vec[1]) ** 2 + (length_scale * vec[2]) ** 2))


def step(state: DropState, model, surface, placement, params: SolverParams, mode="vertical") -> DropState:
    """Advance the drop by one semi-implicit Euler step.

    Wheels with gaps below ``params.d_epsilon`` are the active set; their
    gaps enter the force problem as zeros.  If the updated pose leaves a gap
    below ``-d_epsilon`` the body is projected upward by the worst
    penetration before the next step.
    """
    dt = params.dt
    active = np.flatnonzero(state.gaps < params.d_epsilon)
    forces_full = np.zeros(model.wheel_count)
    if active.size:
        wrench = build_wrench(
            model, placement, state.q, active, surface=surface, mode=mode, points=state.points
        )
        prob = contact.assemble(
            wrench, model.mass_diagonal, state.v, np.zeros(active.size), dt, active=active
        )
        f = contact.solve_forces(prob, params.svd_epsilon)
        forces_full[active] = f
        net = wrench.columns @ f + wrench.gravity
    else:
        net = model.gravity_wrench()
    accel = net / model.mass_diagonal
    v = state.v + dt * accel
    q = state.q + dt * v
    points, gaps = _wheel_geometry(model, placement, q, surface)
    worst = gaps.min()
    if worst < -params.d_epsilon:
        # A pure vertical lift shifts every gap equally.
        q = q.copy()
        q[0] -= worst
        points = points.copy()
        points[:, 2] -= worst
        gaps = gaps - worst
    return DropState(
        q=q,
        v=v,
        accel=accel,
        gaps=gaps,
        points=points,
        forces=forces_full,
        active=tuple(int(i) for i in active),
        iteration=state.iteration + 1,
    )


def default_z_start(model, surface, placement, clearance=0.5) -> float:
    """Drop height rule: highest terrain sample under the footprint plus a
    clearance, raised so every wheel starts at least that far up."""
    points = wheel_world_points(model, placement, (0.0, 0.0, 0.0))
    grid = surface.grid
    pad = 2.0 * grid.spacing
    xs = grid.origin_x + np.arange(grid.cols) * grid.spacing
    ys = grid.origin_y + np.arange(grid.rows) * grid.spacing
    in_x = (xs >= points[:, 0].min() - pad) & (xs <= points[:, 0].max() + pad)
    in_y = (ys >= points[:, 1].min() - pad) & (ys <= points[:, 1].max() + pad)
    under = grid.heights[np.ix_(in_y, in_x)]
    top = float(under.max()) if under.size else surface.max_control_height
    hang = -float(points[:, 2].min())  # how far wheels reach below the center of mass
    return top + clearance + hang


def _trace_record(state: DropState) -> dict:
    return {
        "iteration": state.iteration,
        "q": [float(x) for x in state.q],
        "v": [float(x) for x in state.v],
        "accel": [float(x) for x in state.accel],
        "gaps": [float(x) for x in state.gaps],
        "forces": [float(x) for x in state.forces],
        "active": [int(i) for i in state.active],
        "terminal": False,
    }


def estimate_pose(placement, model, surface, params: SolverParams | None = None,
                  z_start: float | None = None, clearance: float = 0.5,
                  mode: str = "vertical", trace=None) -> PoseResult:
    """Drop the vehicle at ``placement`` = (x, y, yaw) and return its
    equilibrium pose.

    Equilibrium means the weighted acceleration and velocity norms stay below
    their tolerances for three consecutive steps.  ``trace``, if given, is
    called with one record per iteration (the state the iteration started
    from); the last record has ``terminal`` set.

    Raises :class:`ConvergenceError` (with the last state attached) if the
    iteration cap is reached, and ``ValueError`` if ``z_start`` does not
    place every wheel strictly above the terrain.
    """
    params = params if params is not None else SolverParams()
    placement = (float(placement[0]), float(placement[1]), float(placement[2]))
    if z_start is None:
        z_start = default_z_start(model, surface, placement, clearance)
    q = np.array([float(z_start), 0.0, 0.0])
    points, gaps = _wheel_geometry(model, placement, q, surface)
    if gaps.min() <= 0.0:
        raise ValueError(f"z_start={z_start} does not place all wheels above the terrain")
    state = DropState(
        q=q,
        v=np.zeros(3),
        accel=np.array([-GRAVITY, 0.0, 0.0]),
        gaps=gaps,
        points=points,
        forces=np.zeros(model.wheel_count),
        active=(),
        iteration=0,
    )
    scale = model.length_scale
    quiet = 0
    converged = False
    pending = None
    t_begin = time.perf_counter()
    t_contact = None
    for _ in range(params.max_iterations):
        if trace is not None:
            if pending is not None:
                trace(pending)
            pending = _trace_record(state)
        if t_contact is None and (state.gaps < params.d_epsilon).any():
            t_contact = time.perf_counter()
        state = step(state, model, surface, placement, params, mode)
        if (
            _weighted_norm(state.accel, scale) < params.accel_tol
            and _weighted_norm(state.v, scale) < params.vel_tol
        ):
            quiet += 1
        else:
            quiet = 0
        if quiet >= EQUILIBRIUM_STREAK:
            converged = True
            break
    t_end = time.perf_counter()
    if trace is not None and pending is not None:
        pending["terminal"] = True
        trace(pending)
    if not converged:
        raise ConvergenceError(
            f"no equilibrium within {params.max_iterations} iterations "
            f"(|accel|={_weighted_norm(state.accel, scale):.3g}, "
            f"|v|={_weighted_norm(state.v, scale):.3g})",
            state=state,
        )
    return PoseResult(
        placement=placement,
        q=state.q.copy(),
        contacts=state.gaps < params.d_epsilon,
        forces=state.forces.copy(),
        iterations=state.iteration,
        elapsed=t_end - (t_contact if t_contact is not None else t_begin),
        elapsed_total=t_end - t_begin,
    )


def pose_along_path(path, model, surface, samples: int, params: SolverParams | None = None,
                    clearance: float = 0.5, warm_clearance: float = 0.3,
                    mode: str = "vertical", trace=None) -> list:
    """Estimate poses at ``samples`` evenly spaced parameters along a path.

    Yaw at each sample follows the path tangent.  After the first sample the
    drop height is warm-started from the previous equilibrium plus
    ``warm_clearance`` (raised if the terrain ahead demands it).  Returns a
    list of (u, PoseResult) pairs in parameter order.
    """
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}")
    us = np.linspace(0.0, 1.0, samples) if samples > 1 else np.array([0.0])
    results = []
    prev_z = None
    for u in us:
        point = eval_path(path, surface, float(u))
        yaw = path_heading(path, surface, float(u))
        placement = (float(point[0]), float(point[1]), yaw)
        if prev_z is None:
            z0 = None
        else:
            z0 = max(prev_z + warm_clearance, default_z_start(model, surface, placement, 0.02))
        if trace is not None:
            u_value = float(u)

            def tagged(record, _u=u_value):
                record["u"] = _u
                trace(record)

            cb = tagged
        else:
            cb = None
        result = estimate_pose(
            placement, model, surface, params=params, z_start=z0,
            clearance=clearance, mode=mode, trace=cb,
        )
        results.append((float(u), result))
        prev_z = float(result.q[0])
    return results
