"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Bad user input: geometry, region literal, size limits, parameter ranges."""


class GeometryMismatchError(ValidationError):
    """Two regions (or a region and a lattice) live on different lattices."""


class NumericalError(ArithmeticError):
    """A computation could not be carried out reliably."""


class RegularizationError(NumericalError):
    """A normal mode has non-positive frequency, so the ground state is ill defined."""

    def __init__(self, k, omega):
        self.k = tuple(float(x) for x in k)
        self.omega = float(omega)
        super().__init__(
            f"mode k={self.k} has frequency {self.omega:.3e}; "
            "the antiperiodic grid does not regularize this dispersion"
        )
