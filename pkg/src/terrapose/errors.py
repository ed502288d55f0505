"""Exception types shared across the package."""


class TerraPoseError(Exception):
    """Base class for package-specific errors."""


class TerrainBoundsError(TerraPoseError, ValueError):
    """A query landed outside the evaluable footprint of the terrain."""


class SchemaError(TerraPoseError, ValueError):
    """An input file failed validation."""


class SolverError(TerraPoseError, RuntimeError):
    """A numerical solve could not produce a usable result."""


class ConvergenceError(SolverError):
    """The drop simulation hit the iteration cap before reaching equilibrium.

    The last integrator state is attached for diagnosis.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
