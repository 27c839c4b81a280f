"""Perfect-gas equation of state used by every scheme and diagnostic.

All functions broadcast over numpy arrays and accept plain floats.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError


@dataclass(frozen=True)
class GasParams:
    """Adiabatic index and specific heat at constant volume."""

    gamma: float
    cv: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.cv > 0.0:
            raise ValueError(f"cv must be positive, got {self.cv}")


def _check_positive(name, value):
    # NaN fails the comparison too, which is what we want.
    if np.any(~(np.asarray(value) > 0.0)):
        raise AdmissibilityError(f"{name} must be strictly positive")


def pressure(gas, rho, e):
    """p = (gamma-1)*rho*e for density rho and specific internal energy e."""
    _check_positive("rho", rho)
    _check_positive("e", e)
    return (gas.gamma - 1.0) * rho * e


def sound_speed(gas, rho, p):
    """c = sqrt(gamma*p/rho)."""
    _check_positive("rho", rho)
    _check_positive("p", p)
    return np.sqrt(gas.gamma * p / rho)


def specific_entropy(gas, rho, e):
    """s = cv*log(p*rho^-gamma), additive constant fixed to zero."""
    _check_positive("rho", rho)
    _check_positive("e", e)
    p = (gas.gamma - 1.0) * rho * e
    return gas.cv * (np.log(p) - gas.gamma * np.log(rho))


def temperature(gas, e):
    """T = e/cv."""
    if np.any(np.asarray(e) < 0.0):
        raise AdmissibilityError("e must be non-negative")
    return e / gas.cv


def pressure_from_tau_entropy(gas, tau, s):
    """p as a function of specific volume tau and entropy s (inverse of specific_entropy)."""
    _check_positive("tau", tau)
    return np.exp(s / gas.cv) * tau ** (-gas.gamma)


def energy_from_tau_entropy(gas, tau, s):
    """e(tau, s) = p(tau, s)*tau/(gamma-1)."""
    return pressure_from_tau_entropy(gas, tau, s) * tau / (gas.gamma - 1.0)
