"""JSON file formats and bundled data access.

Every file carries a ``schema_version`` so readers can reject future
revisions.  Formats:

terrain
    ``{"schema_version": 1, "rows": R, "cols": C, "origin_x": x0,
    "origin_y": y0, "spacing": s, "heights": [R*C floats, row-major]}``

vehicle
    ``{"schema_version": 1, "mass": m, "inertia_roll": Ia,
    "inertia_pitch": Ib, "wheel_radius": r, "wheels": [[x, y, z], ...]}``

path
    ``{"schema_version": 1, "control_points": [[[v, w] x4] x4]}`` with the
    4x4x2 array read row-major as 16 waypoints in the surface's normalised
    parameter square.

scenario
    terrain/vehicle/path file references (relative to the scenario file),
    one query (``pose`` or ``path``), optional solver parameter overrides and
    the wrench mode.

Results round-trip exactly: floats are serialised with ``repr`` precision by
the ``json`` module, which preserves IEEE doubles bit for bit.
"""

from __future__ import annotations

import importlib.resources
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .estimator import PoseResult, SolverParams
from .terrain import ControlGrid, SurfacePath, TerrainSurface
from .vehicle import VehicleModel

SCHEMA_VERSION = 1

OUTPUT_DIR_ENV = "TERRAPOSE_OUT_DIR"


def _fail(path, message):
    raise SchemaError(f"{path}: {message}")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        _fail(path, "file not found")
    except json.JSONDecodeError as exc:
        _fail(path, f"invalid JSON ({exc})")


def _check_version(doc, path):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        _fail(path, f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")


def _require(doc, key, kinds, path):
    if key not in doc:
        _fail(path, f"missing required field {key!r}")
    value = doc[key]
    if not isinstance(value, kinds):
        names = kinds.__name__ if isinstance(kinds, type) else "/".join(k.__name__ for k in kinds)
        _fail(path, f"field {key!r} must be {names}, got {type(value).__name__}")
    return value


_NUMBER = (int, float)


def load_terrain(path) -> TerrainSurface:
    doc = _load_json(path)
    _check_version(doc, path)
    rows = _require(doc, "rows", int, path)
    cols = _require(doc, "cols", int, path)
    origin_x = float(_require(doc, "origin_x", _NUMBER, path))
    origin_y = float(_require(doc, "origin_y", _NUMBER, path))
    spacing = float(_require(doc, "spacing", _NUMBER, path))
    heights = _require(doc, "heights", list, path)
    if len(heights) != rows * cols:
        _fail(path, f"heights has {len(heights)} entries, expected rows*cols = {rows * cols}")
    try:
        grid = ControlGrid(
            origin_x=origin_x,
            origin_y=origin_y,
            spacing=spacing,
            heights=np.asarray(heights, dtype=float).reshape(rows, cols),
        )
    except (ValueError, TypeError) as exc:
        _fail(path, str(exc))
    return TerrainSurface(grid)


def load_vehicle(path) -> VehicleModel:
    doc = _load_json(path)
    _check_version(doc, path)
    try:
        return VehicleModel(
            mass=float(_require(doc, "mass", _NUMBER, path)),
            inertia_roll=float(_require(doc, "inertia_roll", _NUMBER, path)),
            inertia_pitch=float(_require(doc, "inertia_pitch", _NUMBER, path)),
            wheel_radius=float(_require(doc, "wheel_radius", _NUMBER, path)),
            wheels=np.asarray(_require(doc, "wheels", list, path), dtype=float),
        )
    except (ValueError, TypeError) as exc:
        _fail(path, str(exc))


def load_path(path) -> SurfacePath:
    doc = _load_json(path)
    _check_version(doc, path)
    control = _require(doc, "control_points", list, path)
    try:
        arr = np.asarray(control, dtype=float)
    except (ValueError, TypeError) as exc:
        _fail(path, f"control_points is not numeric: {exc}")
    if arr.shape != (4, 4, 2):
        _fail(path, f"control_points must be 4x4x2, got {arr.shape}")
    try:
        return SurfacePath(control=arr)
    except ValueError as exc:
        _fail(path, str(exc))


@dataclass(frozen=True)
class Scenario:
    """One CLI work order: terrain + vehicle + a query."""

    name: str
    surface: TerrainSurface
    vehicle: VehicleModel
    query_kind: str  # "pose" | "path"
    pose: tuple | None
    path: SurfacePath | None
    samples: int
    params: SolverParams
    mode: str
    clearance: float
    z_start: float | None
    warm_clearance: float


_PARAM_FIELDS = ("dt", "d_epsilon", "accel_tol", "vel_tol", "max_iterations", "svd_epsilon")


def load_scenario(path) -> Scenario:
    path = Path(path)
    doc = _load_json(path)
    _check_version(doc, path)
    base = path.parent

    surface = load_terrain(base / _require(doc, "terrain", str, path))
    vehicle = load_vehicle(base / _require(doc, "vehicle", str, path))

    query = _require(doc, "query", dict, path)
    if ("pose" in query) == ("path" in query):
        _fail(path, "query must contain exactly one of 'pose' or 'path'")

    pose = None
    spath = None
    samples = 1
    if "pose" in query:
        kind = "pose"
        body = query["pose"]
        if not isinstance(body, dict):
            _fail(path, "query.pose must be an object")
        pose = (
            float(_require(body, "x", _NUMBER, path)),
            float(_require(body, "y", _NUMBER, path)),
            float(_require(body, "yaw", _NUMBER, path)),
        )
    else:
        kind = "path"
        body = query["path"]
        if not isinstance(body, dict):
            _fail(path, "query.path must be an object")
        spath = load_path(base / _require(body, "file", str, path))
        samples = int(body.get("samples", 5))
        if samples < 1:
            _fail(path, f"query.path.samples must be at least 1, got {samples}")

    overrides = doc.get("params", {})
    if not isinstance(overrides, dict):
        _fail(path, "params must be an object")
    unknown = set(overrides) - set(_PARAM_FIELDS)
    if unknown:
        _fail(path, f"unknown params fields: {sorted(unknown)}")
    try:
        params = SolverParams(**overrides)
    except (ValueError, TypeError) as exc:
        _fail(path, f"bad params: {exc}")

    mode = doc.get("mode", "vertical")
    if mode not in ("vertical", "normal"):
        _fail(path, f"mode must be 'vertical' or 'normal', got {mode!r}")

    z_start = doc.get("z_start")
    if z_start is not None and not isinstance(z_start, _NUMBER):
        _fail(path, "z_start must be a number")

    return Scenario(
        name=path.stem,
        surface=surface,
        vehicle=vehicle,
        query_kind=kind,
        pose=pose,
        path=spath,
        samples=samples,
        params=params,
        mode=mode,
        clearance=float(doc.get("clearance", 0.5)),
        z_start=None if z_start is None else float(z_start),
        warm_clearance=float(doc.get("warm_clearance", 0.3)),
    )


def result_to_dict(u, result: PoseResult) -> dict:
    x, y, yaw = result.placement
    return {
        "u": None if u is None else float(u),
        "x": x,
        "y": y,
        "yaw": yaw,
        "z": float(result.q[0]),
        "roll": float(result.q[1]),
        "pitch": float(result.q[2]),
        "contacts": [bool(c) for c in result.contacts],
        "forces": [float(f) for f in result.forces],
        "iterations": result.iterations,
        "elapsed": result.elapsed,
        "elapsed_total": result.elapsed_total,
    }


def result_from_dict(doc) -> tuple:
    result = PoseResult(
        placement=(doc["x"], doc["y"], doc["yaw"]),
        q=np.array([doc["z"], doc["roll"], doc["pitch"]]),
        contacts=np.array(doc["contacts"], dtype=bool),
        forces=np.array(doc["forces"], dtype=float),
        iterations=doc["iterations"],
        elapsed=doc["elapsed"],
        elapsed_total=doc["elapsed_total"],
    )
    return doc["u"], result


def results_document(scenario_name, mode, results) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario_name,
        "mode": mode,
        "results": [result_to_dict(u, r) for u, r in results],
    }


def write_results_json(path, document):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")


def write_results_csv(path, results):
    import csv

    k = results[0][1].forces.shape[0] if results else 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["u", "x", "y", "yaw", "z", "roll_deg", "pitch_deg", "contacts", "iterations", "elapsed"]
        header += [f"force_{j}" for j in range(k)]
        writer.writerow(header)
        for u, result in results:
            x, y, yaw = result.placement
            row = [
                "" if u is None else repr(float(u)),
                repr(float(x)),
                repr(float(y)),
                repr(float(yaw)),
                repr(float(result.q[0])),
                repr(float(np.degrees(result.q[1]))),
                repr(float(np.degrees(result.q[2]))),
                "".join("1" if c else "0" for c in result.contacts),
                result.iterations,
                repr(float(result.elapsed)),
            ]
            row += [repr(float(f)) for f in result.forces]
            writer.writerow(row)


def default_output_dir():
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def bundled_data_dir() -> Path:
    return Path(importlib.resources.files("terrapose") / "data")


def bundled_scenarios() -> list:
    """Paths of every scenario shipped with the package, sorted by name."""
    root = bundled_data_dir() / "scenarios"
    return sorted(root.glob("*.json"))
