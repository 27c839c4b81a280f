"""Exact Riemann solver for the 1D perfect-gas Euler equations.

Used as the reference for the shock-tube benchmarks. Newton iteration on the
standard pressure function with a two-rarefaction initial guess, bisection
fallback; the sampler evaluates the self-similar solution at x/t.
"""

from dataclasses import dataclass

import numpy as np

from .grid import PrimitiveState


@dataclass
class RiemannSolution:
    p_star: float
    u_star: float
    left_wave: str   # "shock" | "rarefaction"
    right_wave: str
    is_vacuum: bool
    VL: PrimitiveState
    VR: PrimitiveState
    gamma: float


def _f_side(p, rho_k, p_k, c_k, gamma):
    """One-sided pressure function and its derivative."""
    if p > p_k:  # shock
        A = 2.0 / ((gamma + 1.0) * rho_k)
        B = (gamma - 1.0) / (gamma + 1.0) * p_k
        root = np.sqrt(A / (p + B))
        f = (p - p_k) * root
        df = root * (1.0 - 0.5 * (p - p_k) / (p + B))
    else:  # rarefaction
        f = 2.0 * c_k / (gamma - 1.0) * ((p / p_k) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = 1.0 / (rho_k * c_k) * (p / p_k) ** (-(gamma + 1.0) / (2.0 * gamma))
    return f, df


def solve_exact(VL, VR, gas, tol=1e-12, max_newton=50):
    """Solve the Riemann problem; |f(p*)| <= tol on convergence."""
    gamma = gas.gamma
    cL = np.sqrt(gamma * VL.p / VL.rho)
    cR = np.sqrt(gamma * VR.p / VR.rho)
    du = VR.u - VL.u
    if 2.0 * cL / (gamma - 1.0) + 2.0 * cR / (gamma - 1.0) <= du:
        return RiemannSolution(0.0, np.nan, "rarefaction", "rarefaction", True, VL, VR, gamma)

    def f_total(p):
        fL, dL = _f_side(p, VL.rho, VL.p, cL, gamma)
        fR, dR = _f_side(p, VR.rho, VR.p, cR, gamma)
        return fL + fR + du, dL + dR

    # two-rarefaction guess
    z = (gamma - 1.0) / (2.0 * gamma)
    p = ((cL + cR - 0.5 * (gamma - 1.0) * du) / (cL / VL.p**z + cR / VR.p**z)) ** (1.0 / z)
    p = max(p, 1e-14)
    converged = False
    for _ in range(max_newton):
        f, df = f_total(p)
        if abs(f) <= tol:
            converged = True
            break
        p_new = p - f / df
        if p_new <= 0.0:
            p_new = 0.5 * p
        p = p_new
    if not converged:
        lo, hi = 1e-14, max(VL.p, VR.p)
        while f_total(hi)[0] < 0.0:
            hi *= 2.0
        for _ in range(200):
            p = 0.5 * (lo + hi)
            f, _ = f_total(p)
            if abs(f) <= tol:
                break
            if f > 0.0:
                hi = p
            else:
                lo = p

    fL, _ = _f_side(p, VL.rho, VL.p, cL, gamma)
    fR, _ = _f_side(p, VR.rho, VR.p, cR, gamma)
    u_star = 0.5 * (VL.u + VR.u) + 0.5 * (fR - fL)
    return RiemannSolution(
        p_star=float(p),
        u_star=float(u_star),
        left_wave="shock" if p > VL.p else "rarefaction",
        right_wave="shock" if p > VR.p else "rarefaction",
        is_vacuum=False,
        VL=VL,
        VR=VR,
        gamma=gamma,
    )


def sample_profile(sol, x, x0, t):
    """Exact states at (x - x0)/t, vectorized over x. Returns a PrimitiveState."""
    if t <= 0.0:
        raise ValueError("sampling requires t > 0")
    xi = (np.asarray(x, dtype=float) - x0) / t
    gamma = sol.gamma
    VL, VR = sol.VL, sol.VR
    cL = np.sqrt(gamma * VL.p / VL.rho)
    cR = np.sqrt(gamma * VR.p / VR.rho)

    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    if sol.is_vacuum:
        # two rarefactions around a vacuum region
        sHL, sTL = VL.u - cL, VL.u + 2.0 * cL / (gamma - 1.0)
        sHR, sTR = VR.u + cR, VR.u - 2.0 * cR / (gamma - 1.0)
        _fill_fan_left(xi, rho, u, p, VL, cL, gamma, sHL, sTL)
        _fill_fan_right(xi, rho, u, p, VR, cR, gamma, sTR, sHR)
        left = xi < sHL
        right = xi > sHR
        vac = (xi >= sTL) & (xi <= sTR)
        rho[left], u[left], p[left] = VL.rho, VL.u, VL.p
        rho[right], u[right], p[right] = VR.rho, VR.u, VR.p
        rho[vac], u[vac], p[vac] = 0.0, 0.0, 0.0
        return PrimitiveState(rho=rho, u=u, v=np.zeros_like(rho), p=p)

    ps, us = sol.p_star, sol.u_star
    # left of the contact
    mask = xi <= us
    if sol.left_wave == "shock":
        sL = VL.u - cL * np.sqrt(
            (gamma + 1.0) / (2.0 * gamma) * ps / VL.p + (gamma - 1.0) / (2.0 * gamma)
        )
        pre = mask & (xi < sL)
        post = mask & (xi >= sL)
        rho_star = VL.rho * (
            (ps / VL.p + (gamma - 1.0) / (gamma + 1.0))
            / ((gamma - 1.0) / (gamma + 1.0) * ps / VL.p + 1.0)
        )
        rho[pre], u[pre], p[pre] = VL.rho, VL.u, VL.p
        rho[post], u[post], p[post] = rho_star, us, ps
    else:
        c_star = cL * (ps / VL.p) ** ((gamma - 1.0) / (2.0 * gamma))
        sH, sT = VL.u - cL, us - c_star
        pre = mask & (xi < sH)
        fan = mask & (xi >= sH) & (xi <= sT)
        post = mask & (xi > sT)
        rho[pre], u[pre], p[pre] = VL.rho, VL.u, VL.p
        _fill_fan_left(xi, rho, u, p, VL, cL, gamma, sH, sT, fan)
        rho[post] = VL.rho * (ps / VL.p) ** (1.0 / gamma)
        u[post], p[post] = us, ps

    # right of the contact
    mask = xi > us
    if sol.right_wave == "shock":
        sR = VR.u + cR * np.sqrt(
            (gamma + 1.0) / (2.0 * gamma) * ps / VR.p + (gamma - 1.0) / (2.0 * gamma)
        )
        post = mask & (xi <= sR)
        pre = mask & (xi > sR)
        rho_star = VR.rho * (
            (ps / VR.p + (gamma - 1.0) / (gamma + 1.0))
            / ((gamma - 1.0) / (gamma + 1.0) * ps / VR.p + 1.0)
        )
        rho[post], u[post], p[post] = rho_star, us, ps
        rho[pre], u[pre], p[pre] = VR.rho, VR.u, VR.p
    else:
        c_star = cR * (ps / VR.p) ** ((gamma - 1.0) / (2.0 * gamma))
        sT, sH = us + c_star, VR.u + cR
        post = mask & (xi < sT)
        fan = mask & (xi >= sT) & (xi <= sH)
        pre = mask & (xi > sH)
        rho[post] = VR.rho * (ps / VR.p) ** (1.0 / gamma)
        u[post], p[post] = us, ps
        _fill_fan_right(xi, rho, u, p, VR, cR, gamma, sT, sH, fan)
        rho[pre], u[pre], p[pre] = VR.rho, VR.u, VR.p

    return PrimitiveState(rho=rho, u=u, v=np.zeros_like(rho), p=p)


def _fill_fan_left(xi, rho, u, p, VK, cK, gamma, sH, sT, mask=None):
    if mask is None:
        mask = (xi >= sH) & (xi <= sT)
    gm, gp = gamma - 1.0, gamma + 1.0
    fac = 2.0 / gp + gm / (gp * cK) * (VK.u - xi[mask])
    rho[mask] = VK.rho * fac ** (2.0 / gm)
    u[mask] = 2.0 / gp * (cK + 0.5 * gm * VK.u + xi[mask])
    p[mask] = VK.p * fac ** (2.0 * gamma / gm)


def _fill_fan_right(xi, rho, u, p, VK, cK, gamma, sT, sH, mask=None):
    if mask is None:
        mask = (xi >= sT) & (xi <= sH)
    gm, gp = gamma - 1.0, gamma + 1.0
    fac = 2.0 / gp - gm / (gp * cK) * (VK.u - xi[mask])
    rho[mask] = VK.rho * fac ** (2.0 / gm)
    u[mask] = 2.0 / gp * (-cK + 0.5 * gm * VK.u + xi[mask])
    p[mask] = VK.p * fac ** (2.0 * gamma / gm)
