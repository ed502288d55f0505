"""Regenerate the bundled terrains, vehicles, paths and scenarios.

Run from the repository root:

    python scripts/generate_data.py

The files land in src/terrapose/data/ and are committed; this script exists
so the data stays reproducible and tweakable.
"""

import json
import math
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "terrapose" / "data"

SCHEMA_VERSION = 1


def write(relpath, doc):
    path = DATA / relpath
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ": "))
        fh.write("\n")
    print(f"wrote {path.relative_to(ROOT)}")


def terrain_doc(origin_x, origin_y, spacing, heights):
    heights = np.asarray(heights, dtype=float)
    rows, cols = heights.shape
    return {
        "schema_version": SCHEMA_VERSION,
        "rows": rows,
        "cols": cols,
        "origin_x": origin_x,
        "origin_y": origin_y,
        "spacing": spacing,
        "heights": [float(h) for h in heights.ravel()],
    }


def grid_axes(origin_x, origin_y, spacing, rows, cols):
    xs = origin_x + spacing * np.arange(cols)
    ys = origin_y + spacing * np.arange(rows)
    return np.meshgrid(xs, ys)  # shapes (rows, cols)


def footprint(origin, spacing, count):
    # Evaluable range along one axis: one-cell margin on each side.
    return origin + spacing, origin + (count - 2) * spacing


def world_to_param(x, ox, spacing, cols):
    lo, hi = footprint(ox, spacing, cols)
    return (x - lo) / (hi - lo)


def straight_path_controls(a, b):
    """16 collinear waypoints such that the curve runs exactly from a to b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    step = (b - a) / 13.0
    return np.stack([a + (i - 1) * step for i in range(16)])


def path_doc(control):
    control = np.asarray(control, dtype=float)
    if control.shape != (16, 2):
        raise ValueError(f"need 16 waypoints, got {control.shape}")
    if control.min() < 0.0 or control.max() > 1.0:
        raise ValueError("waypoints must stay inside the unit parameter square")
    return {
        "schema_version": SCHEMA_VERSION,
        "control_points": [[[float(v), float(w)] for v, w in control[i * 4 : i * 4 + 4]] for i in range(4)],
    }


def vehicle_doc(mass, length, width, height, wheel_xy, wheel_drop, wheel_radius):
    # Uniform-box inertia about the roll (x) and pitch (y) axes.
    inertia_roll = mass * (width**2 + height**2) / 12.0
    inertia_pitch = mass * (length**2 + height**2) / 12.0
    return {
        "schema_version": SCHEMA_VERSION,
        "mass": mass,
        "inertia_roll": inertia_roll,
        "inertia_pitch": inertia_pitch,
        "wheel_radius": wheel_radius,
        "wheels": [[float(x), float(y), -wheel_drop] for x, y in wheel_xy],
    }


def scenario_doc(terrain, vehicle, query, **extra):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "terrain": f"../terrains/{terrain}.json",
        "vehicle": f"../vehicles/{vehicle}.json",
        "query": query,
    }
    doc.update(extra)
    return doc


def make_vehicles():
    # Six wheels, three per side; front/mid/rear left then front/mid/rear right.
    six = [(0.75, 0.45), (0.0, 0.45), (-0.75, 0.45), (0.75, -0.45), (0.0, -0.45), (-0.75, -0.45)]
    write("vehicles/six_wheel.json", vehicle_doc(500.0, 1.5, 0.9, 0.5, six, 0.25, 0.15))

    four = [(0.6, 0.4), (-0.6, 0.4), (0.6, -0.4), (-0.6, -0.4)]
    write("vehicles/four_wheel.json", vehicle_doc(400.0, 1.2, 0.8, 0.4, four, 0.2, 0.12))

    eight = [(x, y) for y in (0.5, -0.5) for x in (0.9, 0.3, -0.3, -0.9)]
    write("vehicles/eight_wheel.json", vehicle_doc(650.0, 1.8, 1.0, 0.5, eight, 0.25, 0.15))


def make_flat():
    heights = np.zeros((16, 16))
    write("terrains/flat.json", terrain_doc(-1.875, -1.875, 0.25, heights))


def make_ramp():
    ox, oy, s = -2.25, -1.5, 0.25
    rows, cols = 13, 19
    gx, _ = grid_axes(ox, oy, s, rows, cols)
    heights = gx * math.tan(math.radians(10.0))
    write("terrains/ramp10.json", terrain_doc(ox, oy, s, heights))


def make_pads():
    # Base plane well below three flat pads at height 0 under wheels 1, 3, 5
    # (front-left, rear-left, mid-right) of the six-wheel layout.  A 5x5 block
    # of equal control points makes the surface exactly flat over the block's
    # central cells, so contact forces follow the ideal tripod geometry.
    ox, oy, s = -1.5, -1.2, 0.15
    rows, cols = 17, 21
    heights = np.full((rows, cols), -0.25)
    for cx, cy in ((0.75, 0.45), (-0.75, 0.45), (0.0, -0.45)):
        j = round((cx - ox) / s)
        i = round((cy - oy) / s)
        heights[i - 2 : i + 3, j - 2 : j + 3] = 0.0
    write("terrains/pads.json", terrain_doc(ox, oy, s, heights))


def make_bump():
    # A ridge across the driving direction under the front axle: the front
    # wheels ride the bump, the rear wheels keep the ground, and the middle
    # axle hangs in between, leaving exactly four wheels in contact.
    ox, oy, s = -1.725, -1.05, 0.15
    rows, cols = 15, 24
    gx, _ = grid_axes(ox, oy, s, rows, cols)
    heights = 0.12 * np.exp(-(((gx - 0.75) / 0.25) ** 2))
    write("terrains/bump.json", terrain_doc(ox, oy, s, heights))


def make_rock():
    ox, oy, s = -1.8, -1.2, 0.15
    rows, cols = 17, 25
    gx, gy = grid_axes(ox, oy, s, rows, cols)
    r2 = (gx - 0.1) ** 2 + (gy - 0.08) ** 2
    heights = 0.09 * np.exp(-r2 / 0.18**2)
    write("terrains/rock.json", terrain_doc(ox, oy, s, heights))

    a = (world_to_param(-0.9, ox, s, cols), world_to_param(0.0, oy, s, rows))
    b = (world_to_param(0.9, ox, s, cols), world_to_param(0.0, oy, s, rows))
    write("paths/rock_path.json", path_doc(straight_path_controls(a, b)))


def make_bump_hole():
    ox, oy, s = -2.4, -1.6, 0.2
    rows, cols = 17, 25
    gx, gy = grid_axes(ox, oy, s, rows, cols)
    bump = 0.14 * np.exp(-(((gx + 0.55) ** 2 + (gy - 0.25) ** 2) / 0.35**2))
    hole = -0.12 * np.exp(-(((gx - 0.55) ** 2 + (gy + 0.3) ** 2) / 0.3**2))
    heights = bump + hole
    write("terrains/bump_hole.json", terrain_doc(ox, oy, s, heights))

    a = (world_to_param(-0.8, ox, s, cols), world_to_param(0.0, oy, s, rows))
    b = (world_to_param(0.8, ox, s, cols), world_to_param(0.0, oy, s, rows))
    write("paths/bump_hole_path.json", path_doc(straight_path_controls(a, b)))


def make_mountain():
    ox, oy, s = -3.0, -3.0, 0.3
    rows, cols = 21, 21
    gx, gy = grid_axes(ox, oy, s, rows, cols)
    rng = np.random.default_rng(42)
    heights = np.zeros((rows, cols))
    for _ in range(10):
        cx, cy = rng.uniform(-2.5, 2.5, 2)
        amp = rng.uniform(-0.1, 0.14)
        sigma = rng.uniform(0.8, 1.4)
        heights += amp * np.exp(-(((gx - cx) ** 2 + (gy - cy) ** 2) / sigma**2))
    write("terrains/mountain.json", terrain_doc(ox, oy, s, heights))

    # Diagonal route with a gentle S-curve; waypoints in world coordinates.
    t = np.linspace(0.0, 1.0, 16)
    along = -1.4 + 2.8 * t
    lateral = 0.2 * np.sin(np.pi * t)
    wx = along - lateral / math.sqrt(2.0)
    wy = along + lateral / math.sqrt(2.0)
    control = np.stack(
        [
            [world_to_param(x, ox, s, cols) for x in wx],
            [world_to_param(y, oy, s, rows) for y in wy],
        ],
        axis=1,
    )
    write("paths/mountain_path.json", path_doc(control))


def make_scenarios():
    pose0 = {"pose": {"x": 0.0, "y": 0.0, "yaw": 0.0}}
    write("scenarios/example1_flat.json", scenario_doc("flat", "six_wheel", pose0))
    write("scenarios/example2_pads.json", scenario_doc("pads", "six_wheel", pose0))
    write("scenarios/example3_bump.json", scenario_doc("bump", "six_wheel", pose0))
    write(
        "scenarios/example4_rock_path.json",
        scenario_doc("rock", "four_wheel", {"path": {"file": "../paths/rock_path.json", "samples": 9}}),
    )
    write(
        "scenarios/example5_bump_hole.json",
        scenario_doc("bump_hole", "six_wheel", {"path": {"file": "../paths/bump_hole_path.json", "samples": 5}}),
    )
    write(
        "scenarios/example6_mountain_path.json",
        scenario_doc("mountain", "eight_wheel", {"path": {"file": "../paths/mountain_path.json", "samples": 7}}),
    )
    write(
        "scenarios/ramp10.json",
        scenario_doc(
            "ramp10",
            "six_wheel",
            pose0,
            params={"dt": 0.00025},
            clearance=0.1,
        ),
    )


def main():
    make_vehicles()
    make_flat()
    make_ramp()
    make_pads()
    make_bump()
    make_rock()
    make_bump_hole()
    make_mountain()
    make_scenarios()


if __name__ == "__main__":
    main()
