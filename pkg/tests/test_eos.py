import numpy as np
import pytest

from fslp import AdmissibilityError, GasParams
from fslp.eos import (
    energy_from_tau_entropy,
    pressure,
    pressure_from_tau_entropy,
    sound_speed,
    specific_entropy,
    temperature,
)

GAS = GasParams(1.4)


def test_pressure_examples():
    assert pressure(GAS, 1.0, 2.5) == pytest.approx(1.0)
    assert pressure(GAS, 0.125, 2.0) == pytest.approx(0.1)
    assert pressure(GasParams(5.0 / 3.0), 1.0, 1.5) == pytest.approx(1.0)


def test_sound_speed_examples():
    assert sound_speed(GAS, 1.0, 1.0) == pytest.approx(np.sqrt(1.4))
    assert sound_speed(GAS, 0.125, 0.1) == pytest.approx(np.sqrt(1.12))
    assert sound_speed(GasParams(5.0 / 3.0), 1.0, 5.0 / 3.0) == pytest.approx(5.0 / 3.0)


def test_entropy_examples():
    assert specific_entropy(GAS, 1.0, 2.5) == pytest.approx(0.0, abs=1e-15)
    assert specific_entropy(GAS, 1.0, 5.0) == pytest.approx(np.log(2.0))
    assert specific_entropy(GAS, 2.0, 2.5) == pytest.approx(-0.4 * np.log(2.0))


def test_temperature_examples():
    assert temperature(GasParams(1.4, cv=1.0), 3.78565) == pytest.approx(3.78565)
    assert temperature(GasParams(1.4, cv=1.0), 0.0) == 0.0
    assert temperature(GasParams(1.4, cv=2.0), 4.0) == pytest.approx(2.0)


def test_admissibility_errors():
    with pytest.raises(AdmissibilityError):
        pressure(GAS, -1.0, 2.0)
    with pytest.raises(AdmissibilityError):
        sound_speed(GAS, 1.0, 0.0)
    with pytest.raises(AdmissibilityError):
        specific_entropy(GAS, 1.0, np.nan)


def test_gas_params_validation():
    with pytest.raises(ValueError):
        GasParams(1.0)
    with pytest.raises(ValueError):
        GasParams(1.4, cv=0.0)


def test_sound_speed_identity():
    # c^2 = gamma*(gamma-1)*e exactly, for random admissible states
    rng = np.random.default_rng(0)
    rho = 0.01 + rng.random(1000) * 10
    e = 0.01 + rng.random(1000) * 10
    c = sound_speed(GAS, rho, pressure(GAS, rho, e))
    assert np.allclose(c**2, GAS.gamma * (GAS.gamma - 1.0) * e, rtol=1e-14)


def test_entropy_increasing_in_e():
    rng = np.random.default_rng(1)
    rho = 0.01 + rng.random(500) * 10
    e = 0.01 + rng.random(500) * 10
    de = 1e-3 + rng.random(500)
    assert np.all(specific_entropy(GAS, rho, e + de) > specific_entropy(GAS, rho, e))


def test_tau_entropy_inverse():
    rng = np.random.default_rng(2)
    rho = 0.1 + rng.random(200) * 5
    e = 0.1 + rng.random(200) * 5
    s = specific_entropy(GAS, rho, e)
    assert np.allclose(pressure_from_tau_entropy(GAS, 1.0 / rho, s), pressure(GAS, rho, e),
                       rtol=1e-12)
    assert np.allclose(energy_from_tau_entropy(GAS, 1.0 / rho, s), e, rtol=1e-12)


def _lambda(U):
    rho, mom, rhoE = U
    return rhoE - mom**2 / (2.0 * rho)


def test_lambda_concavity():
    # Lambda(U) = rhoE - (rho u)^2 / (2 rho) is concave: midpoint inequality
    rng = np.random.default_rng(3)
    for _ in range(500):
        rho = 0.05 + rng.random(2) * 5
        u = rng.standard_normal(2) * 3
        e = 0.05 + rng.random(2) * 5
        U1 = (rho[0], rho[0] * u[0], rho[0] * (e[0] + 0.5 * u[0] ** 2))
        U2 = (rho[1], rho[1] * u[1], rho[1] * (e[1] + 0.5 * u[1] ** 2))
        lam = rng.random()
        mid = tuple(lam * a + (1 - lam) * b for a, b in zip(U1, U2))
        assert _lambda(mid) >= lam * _lambda(U1) + (1 - lam) * _lambda(U2) - 1e-12


def test_eta_concavity():
    # eta(rho, rho*tau, rho*u, rho*E) = rho * s(tau, e) is concave
    def eta(rho, rho_tau, mom, rhoE):
        tau = rho_tau / rho
        e = rhoE / rho - 0.5 * (mom / rho) ** 2
        return rho * specific_entropy(GAS, 1.0 / tau, e)

    rng = np.random.default_rng(4)
    for _ in range(500):
        rho = 0.05 + rng.random(2) * 5
        tau = 0.05 + rng.random(2) * 5
        u = rng.standard_normal(2) * 2
        e = 0.05 + rng.random(2) * 5
        W1 = (rho[0], rho[0] * tau[0], rho[0] * u[0], rho[0] * (e[0] + 0.5 * u[0] ** 2))
        W2 = (rho[1], rho[1] * tau[1], rho[1] * u[1], rho[1] * (e[1] + 0.5 * u[1] ** 2))
        lam = rng.random()
        mid = tuple(lam * a + (1 - lam) * b for a, b in zip(W1, W2))
        lhs = eta(*mid)
        rhs = lam * eta(*W1) + (1 - lam) * eta(*W2)
        assert lhs >= rhs - 1e-10 * max(1.0, abs(lhs))
