import numpy as np
import pytest

from fslp import GasParams, PrimitiveState
from fslp.riemann import sample_profile, solve_exact

GAS = GasParams(1.4)
SOD_L = PrimitiveState(1.0, 0.0, 0.0, 1.0)
SOD_R = PrimitiveState(0.125, 0.0, 0.0, 0.1)


def test_sod_star_values():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    assert sol.p_star == pytest.approx(0.30313, abs=2e-5)
    assert sol.u_star == pytest.approx(0.92745, abs=2e-5)
    assert sol.left_wave == "rarefaction" and sol.right_wave == "shock"


def test_equal_states():
    V = PrimitiveState(0.7, 0.9, 0.0, 1.3)
    sol = solve_exact(V, V, GAS)
    assert sol.p_star == pytest.approx(1.3, rel=1e-12)
    assert sol.u_star == pytest.approx(0.9, rel=1e-12)


def test_einfeldt_symmetry():
    VL = PrimitiveState(1.0, -2.0, 0.0, 0.4)
    VR = PrimitiveState(1.0, 2.0, 0.0, 0.4)
    sol = solve_exact(VL, VR, GAS)
    assert sol.u_star == pytest.approx(0.0, abs=1e-12)
    # closed-form two-rarefaction pressure as an independent oracle
    c = np.sqrt(1.4 * 0.4)
    p_exact = 0.4 * (1.0 - (GAS.gamma - 1.0) * 2.0 / (2.0 * c)) ** (2.0 * GAS.gamma / 0.4)
    assert sol.p_star == pytest.approx(p_exact, rel=1e-10)


def test_vacuum_detection():
    VL = PrimitiveState(1.0, -20.0, 0.0, 0.4)
    VR = PrimitiveState(1.0, 20.0, 0.0, 0.4)
    sol = solve_exact(VL, VR, GAS)
    assert sol.is_vacuum
    V = sample_profile(sol, np.array([0.5]), 0.5, 0.1)
    assert V.rho[0] == 0.0


def test_far_field_samples():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    V = sample_profile(sol, np.array([-100.0, 100.0]), 0.0, 0.1)
    assert V.rho[0] == pytest.approx(1.0) and V.p[0] == pytest.approx(1.0)
    assert V.rho[1] == pytest.approx(0.125) and V.p[1] == pytest.approx(0.1)


def test_contact_separates_star_densities():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    t = 0.2
    eps = 1e-6
    V = sample_profile(sol, np.array([0.5 + (sol.u_star - eps) * t,
                                      0.5 + (sol.u_star + eps) * t]), 0.5, t)
    rho_star_L = SOD_L.rho * (sol.p_star / SOD_L.p) ** (1.0 / GAS.gamma)
    rho_star_R = SOD_R.rho * (
        (sol.p_star / SOD_R.p + 0.4 / 2.4) / (0.4 / 2.4 * sol.p_star / SOD_R.p + 1.0)
    )
    assert V.rho[0] == pytest.approx(rho_star_L, rel=1e-6)
    assert V.rho[1] == pytest.approx(rho_star_R, rel=1e-6)
    assert V.p[0] == pytest.approx(sol.p_star) and V.p[1] == pytest.approx(sol.p_star)


def test_rankine_hugoniot_across_shock():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    t = 0.2
    s = SOD_R.u + np.sqrt(1.4 * SOD_R.p / SOD_R.rho) * np.sqrt(
        (GAS.gamma + 1.0) / (2 * GAS.gamma) * sol.p_star / SOD_R.p
        + (GAS.gamma - 1.0) / (2 * GAS.gamma)
    )
    eps = 1e-8
    V = sample_profile(sol, np.array([0.5 + (s - eps) * t, 0.5 + (s + eps) * t]), 0.5, t)
    # RH: conservation of mass, momentum, energy fluxes in the shock frame
    for flux in (
        lambda r, u, p: r * (u - s),
        lambda r, u, p: r * u * (u - s) + p,
        lambda r, u, p: (p / 0.4 + 0.5 * r * u * u) * (u - s) + p * u,
    ):
        jump = flux(V.rho[0], V.u[0], V.p[0]) - flux(V.rho[1], V.u[1], V.p[1])
        assert abs(jump) < 1e-10


def test_riemann_invariants_through_rarefaction():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    t = 0.2
    cL = np.sqrt(1.4)
    c_star = cL * (sol.p_star / 1.0) ** (0.4 / 2.8)
    xi = np.linspace(-cL + 1e-6, sol.u_star - c_star - 1e-6, 20)
    V = sample_profile(sol, 0.5 + xi * t, 0.5, t)
    c = np.sqrt(1.4 * V.p / V.rho)
    invariant = V.u + 2.0 * c / 0.4
    assert np.abs(invariant - invariant[0]).max() < 1e-10
    entropy = V.p / V.rho**1.4
    assert np.abs(entropy - 1.0).max() < 1e-10


def test_sampler_requires_positive_time():
    sol = solve_exact(SOD_L, SOD_R, GAS)
    with pytest.raises(ValueError):
        sample_profile(sol, np.array([0.5]), 0.5, 0.0)
