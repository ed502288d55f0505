"""terrapose: static pose of multi-wheel vehicles on B-spline terrain.

Given a terrain described by a grid of B-spline control heights and a rigid
vehicle placed at (x, y, yaw), the package finds the equilibrium height, roll
and pitch by dropping the vehicle and resolving wheel contact forces with an
SVD pseudo-inverse (a Lemke LCP solver is included as a baseline).
"""

from .contact import ContactProblem, assemble, clamp_active_set, pseudo_inverse, solve_forces
from .errors import (
    ConvergenceError,
    SchemaError,
    SolverError,
    TerrainBoundsError,
    TerraPoseError,
)
from .estimator import (
    DropState,
    PoseResult,
    SolverParams,
    default_z_start,
    estimate_pose,
    pose_along_path,
    step,
)
from .lcp import LcpProblem, LcpSolution, lcp_contact_forces, lemke_solve
from .terrain import (
    BPatch,
    BSPLINE_BASIS,
    ControlGrid,
    SurfacePath,
    TerrainSurface,
    eval_patch,
    eval_path,
    path_heading,
)
from .vehicle import (
    GRAVITY,
    FullConfiguration,
    VehicleModel,
    WrenchMap,
    build_wrench,
    gap_vector,
    rotation_matrix,
    wheel_world_points,
)

__version__ = "0.1.0"

__all__ = [
    "BPatch",
    "BSPLINE_BASIS",
    "ContactProblem",
    "ControlGrid",
    "ConvergenceError",
    "DropState",
    "FullConfiguration",
    "GRAVITY",
    "LcpProblem",
    "LcpSolution",
    "PoseResult",
    "SchemaError",
    "SolverError",
    "SolverParams",
    "SurfacePath",
    "TerrainBoundsError",
    "TerrainSurface",
    "TerraPoseError",
    "VehicleModel",
    "WrenchMap",
    "assemble",
    "build_wrench",
    "clamp_active_set",
    "default_z_start",
    "estimate_pose",
    "eval_patch",
    "eval_path",
    "gap_vector",
    "lcp_contact_forces",
    "lemke_solve",
    "path_heading",
    "pose_along_path",
    "pseudo_inverse",
    "rotation_matrix",
    "solve_forces",
    "step",
    "wheel_world_points",
]
