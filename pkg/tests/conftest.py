import numpy as np
import pytest

from terrapose import ControlGrid, TerrainSurface, VehicleModel, schemas


def make_plane_surface(a=0.0, b=0.0, c=0.0, rows=16, cols=16, spacing=0.25,
                       origin_x=-1.875, origin_y=-1.875):
    """Surface sampling z = a*x + b*y + c; splines reproduce it exactly."""
    xs = origin_x + spacing * np.arange(cols)
    ys = origin_y + spacing * np.arange(rows)
    gx, gy = np.meshgrid(xs, ys)
    grid = ControlGrid(origin_x=origin_x, origin_y=origin_y, spacing=spacing,
                       heights=a * gx + b * gy + c)
    return TerrainSurface(grid)


def make_random_surface(seed=0, rows=14, cols=14, spacing=0.3, amplitude=0.1):
    rng = np.random.default_rng(seed)
    grid = ControlGrid(origin_x=-2.0, origin_y=-2.0, spacing=spacing,
                       heights=amplitude * rng.standard_normal((rows, cols)))
    return TerrainSurface(grid)


SIX_WHEEL_OFFSETS = np.array(
    [
        [0.75, 0.45, -0.25],
        [0.0, 0.45, -0.25],
        [-0.75, 0.45, -0.25],
        [0.75, -0.45, -0.25],
        [0.0, -0.45, -0.25],
        [-0.75, -0.45, -0.25],
    ]
)


def make_six_wheel(mass=500.0):
    # Uniform-box inertia for a 1.5 x 0.9 x 0.5 body.
    return VehicleModel(
        mass=mass,
        inertia_roll=mass / 12.0 * (0.9**2 + 0.5**2),
        inertia_pitch=mass / 12.0 * (1.5**2 + 0.5**2),
        wheel_radius=0.15,
        wheels=SIX_WHEEL_OFFSETS.copy(),
    )


@pytest.fixture
def flat_surface():
    return make_plane_surface()


@pytest.fixture
def six_wheel():
    return make_six_wheel()


@pytest.fixture
def data_dir():
    return schemas.bundled_data_dir()


@pytest.fixture
def scenario_loader(data_dir):
    def load(name):
        return schemas.load_scenario(data_dir / "scenarios" / f"{name}.json")

    return load
