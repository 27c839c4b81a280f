"""Exception and warning types shared across the solver."""


class SolverError(Exception):
    """Base class for runtime solver failures."""


class AdmissibilityError(SolverError):
    """A state left the admissible set (rho > 0, e > 0)."""


class CFLError(SolverError):
    """A time step violates the CFL condition of the active scheme."""


class ConfigError(Exception):
    """Malformed run configuration."""


class SubcharacteristicWarning(UserWarning):
    """The acoustic impedance was too small for positive star specific volumes."""
