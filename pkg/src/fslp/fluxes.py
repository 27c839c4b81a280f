"""Interface solvers: acoustic star states, the flux-splitting numerical flux and HLLC.

Public functions use the x-normal convention (u is the velocity component normal
to the interface); directional sweeps swap components before calling in. All
functions broadcast, so scalar states and whole interface arrays go through the
same code.
"""

from dataclasses import dataclass

import numpy as np

from . import eos
from .grid import ConservativeState, PrimitiveState

DEFAULT_K = 1.1


@dataclass
class StarState:
    """Interface quantities from the acoustic approximate Riemann solver."""

    a: object            # acoustic impedance
    theta: object        # low-Mach blend in [0, 1]
    u_star: object
    pi_star_theta: object
    pi_star: object      # uncorrected (theta = 1) value, diagnostics
    m_jump: object       # gravity jump M = (rho_L+rho_R)/2 * (phi_R-phi_L)
    pi_star_L: object
    pi_star_R: object
    tau_star_L: object
    tau_star_R: object
    e_star_L: object
    e_star_R: object

    def subcharacteristic_ok(self):
        """True where both star specific volumes are positive."""
        return np.asarray((self.tau_star_L > 0.0) & (self.tau_star_R > 0.0))


@dataclass
class InterfaceFlux:
    """Numerical flux plus the interface's halves of the gravity source."""

    mass: object
    mom_x: object
    mom_y: object
    energy: object
    src_half_mom: object     # (1/2) {rho dphi}_(j+1/2)
    src_half_energy: object  # (1/2) u* {rho dphi}_(j+1/2)


def acoustic_impedance(VL, VR, gas, k=DEFAULT_K):
    """a = K * max(rho_L c_L, rho_R c_R) with K > 1."""
    if not k > 1.0:
        raise ValueError(f"impedance multiplier K must exceed 1, got {k}")
    cL = eos.sound_speed(gas, VL.rho, VL.p)
    cR = eos.sound_speed(gas, VR.rho, VR.p)
    return k * np.maximum(VL.rho * cL, VR.rho * cR)


def low_mach_theta(VL, VR, gas):
    """theta = min(1, max(|u_L|/c_L, |u_R|/c_R)) from the interface-normal velocities."""
    cL = eos.sound_speed(gas, VL.rho, VL.p)
    cR = eos.sound_speed(gas, VR.rho, VR.p)
    return np.minimum(1.0, np.maximum(np.abs(VL.u) / cL, np.abs(VR.u) / cR))


def star_states(VL, VR, phi_L, phi_R, a, theta, gas):
    """Full star-state set for one interface (or arrays of interfaces).

    u* and Pi*theta follow the all-regime interface formulas; the per-side
    quantities (Pi*_k = Pi* -+- M/2, tau*_k, e*_k) come from the approximate
    Riemann solver with gravity and are mainly used by diagnostics and the
    verification module. gas enters only through e_k = p_k/((gamma-1)rho_k).
    """
    m = 0.5 * (VL.rho + VR.rho) * (phi_R - phi_L)
    du = VR.u - VL.u
    u_star = 0.5 * (VL.u + VR.u) - (VR.p - VL.p + m) / (2.0 * a)
    pi_star = 0.5 * (VL.p + VR.p) - 0.5 * a * du
    pi_star_theta = 0.5 * (VL.p + VR.p) - theta * 0.5 * a * du
    pi_star_L = pi_star + 0.5 * m
    pi_star_R = pi_star - 0.5 * m
    tau_star_L = 1.0 / VL.rho + (u_star - VL.u) / a
    tau_star_R = 1.0 / VR.rho - (u_star - VR.u) / a
    # e*_k = e_k -+ (Pi*_k u* - Pi_k u_k)/a - (u*^2 - u_k^2)/2; the tangential
    # kinetic part is untouched by the acoustic waves and cancels out.
    eL = VL.p / ((gas.gamma - 1.0) * VL.rho)
    eR = VR.p / ((gas.gamma - 1.0) * VR.rho)
    dk = 0.5 * (u_star * u_star)
    e_star_L = eL - (pi_star_L * u_star - VL.p * VL.u) / a - (dk - 0.5 * VL.u * VL.u)
    e_star_R = eR + (pi_star_R * u_star - VR.p * VR.u) / a - (dk - 0.5 * VR.u * VR.u)
    return StarState(
        a=a,
        theta=theta,
        u_star=u_star,
        pi_star_theta=pi_star_theta,
        pi_star=pi_star,
        m_jump=m,
        pi_star_L=pi_star_L,
        pi_star_R=pi_star_R,
        tau_star_L=tau_star_L,
        tau_star_R=tau_star_R,
        e_star_L=e_star_L,
        e_star_R=e_star_R,
    )


def upwind(u_star, left, right):
    """Upwind selection: left value where u* > 0, right value otherwise."""
    return np.where(u_star > 0.0, left, right)


def fslp_flux(UL, UR, star, dx):
    """Flux-splitting numerical flux plus this interface's gravity source halves.

    The conserved quantities are upwinded on the sign of u*; the pressure part
    enters through Pi*theta. dx is needed because the source halves carry the
    1/dx of {rho dphi}_(j+1/2).
    """
    u_star = star.u_star
    mass = u_star * upwind(u_star, UL.rho, UR.rho)
    mom_x = u_star * upwind(u_star, UL.mom_x, UR.mom_x) + star.pi_star_theta
    mom_y = u_star * upwind(u_star, UL.mom_y, UR.mom_y)
    energy = u_star * upwind(u_star, UL.rhoE, UR.rhoE) + star.pi_star_theta * u_star
    src = 0.5 * star.m_jump / dx
    return InterfaceFlux(
        mass=mass,
        mom_x=mom_x,
        mom_y=mom_y,
        energy=energy,
        src_half_mom=src,
        src_half_energy=u_star * src,
    )


def hllc_flux(UL, UR, gas):
    """Standard three-wave HLLC flux with Davis wave-speed bounds."""
    rhoL, rhoR = UL.rho, UR.rho
    uL, uR = UL.mom_x / rhoL, UR.mom_x / rhoR
    vL, vR = UL.mom_y / rhoL, UR.mom_y / rhoR
    pL = (gas.gamma - 1.0) * (UL.rhoE - 0.5 * rhoL * (uL * uL + vL * vL))
    pR = (gas.gamma - 1.0) * (UR.rhoE - 0.5 * rhoR * (uR * uR + vR * vR))
    cL = eos.sound_speed(gas, rhoL, pL)
    cR = eos.sound_speed(gas, rhoR, pR)

    sL = np.minimum(uL - cL, uR - cR)
    sR = np.maximum(uL + cL, uR + cR)
    s_star = (pR - pL + rhoL * uL * (sL - uL) - rhoR * uR * (sR - uR)) / (
        rhoL * (sL - uL) - rhoR * (sR - uR)
    )

    def side_flux(rho, u, v, p, rhoE):
        return (rho * u, rho * u * u + p, rho * u * v, u * (rhoE + p))

    fL = side_flux(rhoL, uL, vL, pL, UL.rhoE)
    fR = side_flux(rhoR, uR, vR, pR, UR.rhoE)

    def star_U(rho, u, v, p, rhoE, sK):
        coef = rho * (sK - u) / (sK - s_star)
        return (
            coef,
            coef * s_star,
            coef * v,
            coef * (rhoE / rho + (s_star - u) * (s_star + p / (rho * (sK - u)))),
        )

    UsL = star_U(rhoL, uL, vL, pL, UL.rhoE, sL)
    UsR = star_U(rhoR, uR, vR, pR, UR.rhoE, sR)

    comps = []
    for i in range(4):
        UL_i = (UL.rho, UL.mom_x, UL.mom_y, UL.rhoE)[i]
        UR_i = (UR.rho, UR.mom_x, UR.mom_y, UR.rhoE)[i]
        fsL = fL[i] + sL * (UsL[i] - UL_i)
        fsR = fR[i] + sR * (UsR[i] - UR_i)
        fi = np.where(
            sL >= 0.0, fL[i], np.where(s_star >= 0.0, fsL, np.where(sR > 0.0, fsR, fR[i]))
        )
        comps.append(fi)
    zero = np.zeros_like(np.asarray(comps[0], dtype=float))
    return InterfaceFlux(comps[0], comps[1], comps[2], comps[3], zero, zero)
