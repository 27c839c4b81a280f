import numpy as np
import pytest

from fslp import GasParams, PrimitiveState, prim_to_cons
from fslp.cases import gresho_state
from fslp.fluxes import acoustic_impedance, fslp_flux, hllc_flux, low_mach_theta, star_states

GAS = GasParams(1.4)
SOD_L = PrimitiveState(1.0, 0.0, 0.0, 1.0)
SOD_R = PrimitiveState(0.125, 0.0, 0.0, 0.1)


def exact_flux(V, gas):
    U = prim_to_cons(V, gas)
    return (
        V.rho * V.u,
        V.rho * V.u**2 + V.p,
        V.rho * V.u * V.v,
        V.u * (U.rhoE + V.p),
    )


def test_impedance_examples():
    assert acoustic_impedance(SOD_L, SOD_R, GAS, 1.1) == pytest.approx(1.1 * np.sqrt(1.4))
    same = PrimitiveState(1.0, 0.0, 0.0, 1.0)
    assert acoustic_impedance(same, same, GAS, 1.1) == pytest.approx(1.30154, rel=1e-5)
    # (rho c)_L = 2, (rho c)_R = 1, K = 1.5 -> 3.0
    VL = PrimitiveState(4.0 / 1.4, 0.0, 0.0, 1.4 / 4.0 * 4.0)  # rho*c = sqrt(g p rho) = 2
    VR = PrimitiveState(1.0 / 1.4, 0.0, 0.0, 1.0 / 1.4 * 1.4 / 1.0)
    a = 1.5 * max(np.sqrt(1.4 * VL.p * VL.rho), np.sqrt(1.4 * VR.p * VR.rho))
    assert acoustic_impedance(VL, VR, GAS, 1.5) == pytest.approx(a)
    with pytest.raises(ValueError):
        acoustic_impedance(SOD_L, SOD_R, GAS, 1.0)


def test_low_mach_theta():
    rest = PrimitiveState(1.0, 0.0, 0.0, 1.0)
    assert low_mach_theta(rest, rest, GAS) == 0.0
    fast = PrimitiveState(1.0, 3.0 * np.sqrt(1.4), 0.0, 1.0)
    assert low_mach_theta(fast, rest, GAS) == 1.0
    # Gresho ring at r = 0.2, Ma = 1e-3: theta is of order 1e-3
    u_theta, p = gresho_state(0.2, 1e-3)
    ring = PrimitiveState(1.0, u_theta, 0.0, p)
    th = low_mach_theta(ring, ring, GAS)
    assert 5e-4 < th < 5e-3


def test_star_states_sod():
    a = acoustic_impedance(SOD_L, SOD_R, GAS, 1.1)
    st = star_states(SOD_L, SOD_R, 0.0, 0.0, a, 1.0, GAS)
    assert st.u_star == pytest.approx(0.9 / (2 * 1.30154), rel=1e-4)
    assert st.pi_star_theta == pytest.approx(0.55)
    assert st.m_jump == 0.0


def test_star_states_consistency():
    V = PrimitiveState(1.3, 0.7, 0.0, 2.1)
    a = acoustic_impedance(V, V, GAS)
    st = star_states(V, V, 0.0, 0.0, a, 1.0, GAS)
    assert st.u_star == pytest.approx(0.7)
    assert st.pi_star_theta == pytest.approx(2.1)
    assert st.m_jump == 0.0


def test_star_states_hydrostatic_pair():
    VL = PrimitiveState(1.0, 0.0, 0.0, 1.0)
    VR = PrimitiveState(1.0, 0.0, 0.0, 0.9)
    a = acoustic_impedance(VL, VR, GAS)
    st = star_states(VL, VR, 0.0, 0.1, a, 1.0, GAS)
    assert abs(st.u_star) < 1e-15
    assert st.pi_star_L == pytest.approx(1.0)
    assert st.pi_star_R == pytest.approx(0.9)


def test_fslp_flux_consistency():
    V = PrimitiveState(0.8, 1.2, 0.4, 2.0)
    U = prim_to_cons(V, GAS)
    a = acoustic_impedance(V, V, GAS)
    st = star_states(V, V, 0.0, 0.0, a, 1.0, GAS)
    flux = fslp_flux(U, U, st, 0.1)
    for got, want in zip((flux.mass, flux.mom_x, flux.mom_y, flux.energy), exact_flux(V, GAS)):
        assert got == pytest.approx(want, rel=1e-14)
    assert flux.src_half_mom == 0.0 and flux.src_half_energy == 0.0


def test_fslp_flux_sod_upwinds_left():
    a = acoustic_impedance(SOD_L, SOD_R, GAS, 1.1)
    st = star_states(SOD_L, SOD_R, 0.0, 0.0, a, 1.0, GAS)
    flux = fslp_flux(prim_to_cons(SOD_L, GAS), prim_to_cons(SOD_R, GAS), st, 0.01)
    assert flux.mass == pytest.approx(st.u_star * 1.0)


def test_fslp_flux_mirror_pair():
    VL = PrimitiveState(1.0, 0.4, 0.0, 1.0)
    VR = PrimitiveState(1.0, -0.4, 0.0, 1.0)
    a = acoustic_impedance(VL, VR, GAS)
    st = star_states(VL, VR, 0.0, 0.0, a, 1.0, GAS)
    flux = fslp_flux(prim_to_cons(VL, GAS), prim_to_cons(VR, GAS), st, 0.01)
    assert st.u_star == pytest.approx(0.0, abs=1e-15)
    assert flux.mass == pytest.approx(0.0, abs=1e-15)
    assert flux.mom_x == pytest.approx(st.pi_star_theta)


def test_pi_star_galilean_invariance():
    rng = np.random.default_rng(5)
    for _ in range(50):
        rho = 0.1 + rng.random(2) * 4
        u = rng.standard_normal(2) * 2
        p = 0.1 + rng.random(2) * 4
        w = rng.standard_normal() * 5
        theta = rng.random()
        VL = PrimitiveState(rho[0], u[0], 0.0, p[0])
        VR = PrimitiveState(rho[1], u[1], 0.0, p[1])
        VLs = PrimitiveState(rho[0], u[0] + w, 0.0, p[0])
        VRs = PrimitiveState(rho[1], u[1] + w, 0.0, p[1])
        a = acoustic_impedance(VL, VR, GAS)
        st = star_states(VL, VR, 0.0, 0.0, a, theta, GAS)
        st_shift = star_states(VLs, VRs, 0.0, 0.0, a, theta, GAS)
        assert st_shift.pi_star_theta == pytest.approx(st.pi_star_theta, rel=1e-12, abs=1e-12)
        assert st_shift.u_star == pytest.approx(st.u_star + w, rel=1e-12)


def test_theta_modified_states_reconstruct_flux():
    # Pi and Pi*u parts of the theta flux equal their reconstruction from the
    # theta-modified star states (u*theta_k, E*theta_k, Pi*_k)
    rng = np.random.default_rng(6)
    for _ in range(50):
        rho = 0.1 + rng.random(2) * 4
        u = rng.standard_normal(2) * 2
        p = 0.1 + rng.random(2) * 4
        theta = rng.random()
        VL = PrimitiveState(rho[0], u[0], 0.0, p[0])
        VR = PrimitiveState(rho[1], u[1], 0.0, p[1])
        a = acoustic_impedance(VL, VR, GAS)
        st1 = star_states(VL, VR, 0.0, 0.0, a, 1.0, GAS)  # theta = 1 base states
        st = star_states(VL, VR, 0.0, 0.0, a, theta, GAS)
        du = VR.u - VL.u
        u_th_L = st1.u_star - (1.0 - theta) * du / 2.0
        u_th_R = st1.u_star + (1.0 - theta) * du / 2.0
        # momentum flux: mean(Pi) - a/2 (u_th_L - u_L + u_R - u_th_R) == Pi*theta
        pi_rec = 0.5 * (VL.p + VR.p) - 0.5 * a * ((u_th_L - VL.u) + (VR.u - u_th_R))
        assert pi_rec == pytest.approx(st.pi_star_theta, rel=1e-12, abs=1e-12)
        # energy flux reconstruction via E*theta states
        eL = VL.p / (0.4 * VL.rho)
        eR = VR.p / (0.4 * VR.rho)
        EL = eL + VL.u**2 / 2
        ER = eR + VR.u**2 / 2
        EsL = EL - (st1.pi_star_L * st1.u_star - VL.p * VL.u) / a
        EsR = ER + (st1.pi_star_R * st1.u_star - VR.p * VR.u) / a
        EthL = EsL - (1.0 - theta) * du / 2.0 * st1.u_star
        EthR = EsR + (1.0 - theta) * du / 2.0 * st1.u_star
        en_rec = 0.5 * (VL.p * VL.u + VR.p * VR.u) - 0.5 * a * (
            (EthL - EL) + (ER - EthR)
        )
        assert en_rec == pytest.approx(st.pi_star_theta * st.u_star, rel=1e-11, abs=1e-11)


def test_hllc_consistency():
    V = PrimitiveState(0.9, -0.6, 0.3, 1.7)
    U = prim_to_cons(V, GAS)
    flux = hllc_flux(U, U, GAS)
    for got, want in zip((flux.mass, flux.mom_x, flux.mom_y, flux.energy), exact_flux(V, GAS)):
        assert got == pytest.approx(want, rel=1e-13, abs=1e-14)


def test_hllc_supersonic_left():
    # both states moving left faster than sound: flux = F(U_R)
    VL = PrimitiveState(1.0, -5.0, 0.0, 1.0)
    VR = PrimitiveState(0.9, -5.2, 0.1, 0.8)
    flux = hllc_flux(prim_to_cons(VL, GAS), prim_to_cons(VR, GAS), GAS)
    for got, want in zip((flux.mass, flux.mom_x, flux.mom_y, flux.energy), exact_flux(VR, GAS)):
        assert got == pytest.approx(want, rel=1e-13)
