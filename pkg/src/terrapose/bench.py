"""Benchmarks: force-solver comparison and kernel backend comparison.

The solver benchmark times only the force solve (pseudo-inverse path versus
Lemke pivoting) on freshly assembled flat-ground contact problems of varying
wheel count; problem construction stays outside the clock.  The kernel
benchmark compares the compiled and pure-numpy terrain kernels on the same
queries and on a full drop.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import contact, kernels, lcp
from .estimator import SolverParams, estimate_pose
from .terrain import ControlGrid, TerrainSurface
from .vehicle import VehicleModel, build_wrench

DEFAULT_WHEEL_COUNTS = (4, 6, 8, 12, 16, 20, 24)
_WARMUP = 3


def _grid_layout(count):
    # Wheels on a two-column rack, like stretching the stock vehicles.
    if count < 1:
        raise ValueError(f"wheel count must be at least 1, got {count}")
    per_side = (count + 1) // 2
    xs = np.linspace(-0.75, 0.75, per_side) if per_side > 1 else np.zeros(1)
    wheels = []
    for i in range(count):
        side = 1.0 if i < per_side else -1.0
        wheels.append([xs[i % per_side], 0.45 * side, -0.25])
    return np.asarray(wheels)


def bench_vehicle(count) -> VehicleModel:
    return VehicleModel(
        mass=500.0,
        inertia_roll=44.1667,
        inertia_pitch=104.1667,
        wheel_radius=0.15,
        wheels=_grid_layout(count),
    )


def flat_contact_problem(count, dt=1e-3) -> contact.ContactProblem:
    """The at-rest flat-ground contact problem with ``count`` wheels: every
    wheel touching, zero velocity, gravity drift only."""
    model = bench_vehicle(count)
    q = np.array([0.25, 0.0, 0.0])
    wrench = build_wrench(model, (0.0, 0.0, 0.0), q, np.arange(count))
    return contact.assemble(wrench, model.mass_diagonal, np.zeros(3), np.zeros(count), dt)


@dataclass(frozen=True)
class BenchRecord:
    method: str
    wheel_count: int
    repetitions: int
    mean: float
    stddev: float


def _time_solver(solver, prob, repetitions):
    for _ in range(_WARMUP):
        solver(prob)
    samples = np.empty(repetitions)
    for i in range(repetitions):
        t0 = time.perf_counter()
        solver(prob)
        samples[i] = time.perf_counter() - t0
    return float(samples.mean()), float(samples.std())


def run_benchmark(wheel_counts=DEFAULT_WHEEL_COUNTS, repetitions=100,
                  svd_epsilon=contact.DEFAULT_SVD_EPSILON) -> list:
    """Time both force solvers across wheel counts; returns BenchRecords."""
    if repetitions < 1:
        raise ValueError(f"repetitions must be at least 1, got {repetitions}")
    records = []
    for count in wheel_counts:
        prob = flat_contact_problem(count)
        mean, std = _time_solver(lambda p: contact.solve_forces(p, svd_epsilon), prob, repetitions)
        records.append(BenchRecord("svd", count, repetitions, mean, std))
        mean, std = _time_solver(lcp.lcp_contact_forces, prob, repetitions)
        records.append(BenchRecord("lcp", count, repetitions, mean, std))
    return records


def write_benchmark_csv(path, records):
    import csv

    methods = {r.method for r in records}
    if not methods <= {"svd", "lcp"}:
        # Generic long layout for anything beyond the solver comparison,
        # e.g. the kernel-backend records.
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "size", "repetitions", "mean", "stddev"])
            for r in records:
                writer.writerow(
                    [r.method, r.wheel_count, r.repetitions, repr(r.mean), repr(r.stddev)]
                )
        return

    # Two-series plot layout: one row per wheel count, one column pair per
    # method, ready for any external plotting tool.
    by_count: dict = {}
    for r in records:
        by_count.setdefault(r.wheel_count, {})[r.method] = r
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["wheel_count", "mean_svd", "mean_lcp", "stddev_svd", "stddev_lcp", "repetitions"]
        )
        for count in sorted(by_count):
            pair = by_count[count]
            svd, lcp = pair.get("svd"), pair.get("lcp")
            writer.writerow(
                [
                    count,
                    repr(svd.mean) if svd else "",
                    repr(lcp.mean) if lcp else "",
                    repr(svd.stddev) if svd else "",
                    repr(lcp.stddev) if lcp else "",
                    (svd or lcp).repetitions,
                ]
            )


def _bench_surface():
    rng = np.random.default_rng(7)
    grid = ControlGrid(
        origin_x=-3.0, origin_y=-3.0, spacing=0.25,
        heights=0.15 * rng.standard_normal((25, 25)),
    )
    return TerrainSurface(grid)


def run_kernel_benchmark(points=20_000, repetitions=20) -> list:
    """Compare kernel backends on raw height queries and on a full drop.

    Returns records with method names ``heights/<backend>`` and
    ``drop/<backend>``; with no compiled extension only the pure backend
    appears.
    """
    surface = _bench_surface()
    model = bench_vehicle(6)
    rng = np.random.default_rng(11)
    fx0, fx1, fy0, fy1 = surface.footprint
    xs = rng.uniform(fx0, fx1, points)
    ys = rng.uniform(fy0, fy1, points)
    params = SolverParams()
    records = []
    previous = kernels.backend_name()
    try:
        for backend in kernels.available_backends():
            kernels.set_backend(backend)
            samples = np.empty(repetitions)
            for _ in range(_WARMUP):
                surface.heights_at(xs, ys)
            for i in range(repetitions):
                t0 = time.perf_counter()
                surface.heights_at(xs, ys)
                samples[i] = time.perf_counter() - t0
            records.append(BenchRecord(f"heights/{backend}", points, repetitions,
                                       float(samples.mean()), float(samples.std())))
            drops = np.empty(max(1, repetitions // 4))
            for i in range(drops.shape[0]):
                t0 = time.perf_counter()
                estimate_pose((0.0, 0.0, 0.3), model, surface, params=params, clearance=0.3)
                drops[i] = time.perf_counter() - t0
            records.append(BenchRecord(f"drop/{backend}", 6, drops.shape[0],
                                       float(drops.mean()), float(drops.std())))
    finally:
        kernels.set_backend(previous)
    return records
