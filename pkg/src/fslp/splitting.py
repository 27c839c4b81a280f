"""Verification machinery: pressure/advection sub-steps whose convex combination
rebuilds the flux-splitting update, star-state stability diagnostics, and the
eigenstructure residual of the 11-variable relaxation system.

Everything here exists to check the solver, not to run production simulations;
the sub-steps are 1D, matching the setting of the stability analysis.
"""

from dataclasses import dataclass

import numpy as np

from . import eos
from .errors import CFLError
from .grid import EN, MX, MY, RHO
from .schemes import _prims_full, _source_terms, _stars_axis

_SLACK = 1.0 + 1e-9  # float tolerance on the CFL pre-checks


@dataclass
class AugmentedGrid:
    """Grid plus the surrogate-pressure density rho*Pi and rho*Tau fields."""

    grid: object
    rho_pi: np.ndarray
    rho_tau: np.ndarray

    @classmethod
    def from_equilibrium(cls, grid, gas):
        """Equilibrium initialization: Pi = p^EOS and rho*Tau = 1 everywhere.

        Ghost cells of the grid must already be filled.
        """
        rho, _, _, p = _prims_full(grid, gas)
        return cls(grid=grid.copy(), rho_pi=rho * p, rho_tau=np.ones_like(rho))

    def copy(self):
        return AugmentedGrid(self.grid.copy(), self.rho_pi.copy(), self.rho_tau.copy())


@dataclass(frozen=True)
class AlphaSplit:
    """Convex weight of the pressure sub-step, with the speeds that set it."""

    alpha: float
    acoustic_speed: float
    transport_speed: float


def optimal_alpha(grid, gas, config):
    """alpha = c/(c+v) at the cell maximizing c+v, so both sub-step CFL bounds
    coincide with the flux-splitting one (clamped into (0,1) when v = 0)."""
    stars, _ = _stars_axis(grid, gas, config, 1, _prims_full(grid, gas))
    acoustic = 2.0 * np.maximum(stars.aor[:, :-1], stars.aor[:, 1:])
    transport = np.maximum(stars.u_star[:, :-1], 0.0) - np.minimum(stars.u_star[:, 1:], 0.0)
    i = np.unravel_index(np.argmax(acoustic + transport), acoustic.shape)
    c, v = float(acoustic[i]), float(transport[i])
    alpha = min(max(c / (c + v), 1e-6), 1.0 - 1e-6)
    return AlphaSplit(alpha=alpha, acoustic_speed=c, transport_speed=v)


def dt_substeps(grid, gas, config, alpha):
    """Largest dt satisfying both the pressure and advection CFL bounds for a
    given alpha (not necessarily the optimal one)."""
    stars, _ = _stars_axis(grid, gas, config, 1, _prims_full(grid, gas))
    dt_p = alpha * grid.dx / (2.0 * float(stars.aor.max()))
    transport = np.maximum(stars.u_star[:, :-1], 0.0) - np.minimum(stars.u_star[:, 1:], 0.0)
    vmax = float(transport.max())
    dt_a = (1.0 - alpha) * grid.dx / vmax if vmax > 0.0 else np.inf
    return min(dt_p, dt_a) * (1.0 - 1e-12)


def _require_1d(grid):
    if not grid.is_1d:
        raise ValueError("the sub-step verification path is one-dimensional")


def pressure_substep(aug, gas, config, alpha, dt):
    """Update (rho u, rho E, rho Pi, rho Tau) by the 1/alpha-weighted pressure
    sub-system; rho is untouched."""
    grid = aug.grid
    _require_1d(grid)
    stars, _ = _stars_axis(grid, gas, config, 1, _prims_full(grid, gas))
    r = dt / (alpha * grid.dx)
    if r * float(stars.aor.max()) > 0.5 * _SLACK:
        raise CFLError("pressure sub-step CFL violated")
    out = aug.copy()
    iy, ix = grid.interior
    src_mom, src_en = _source_terms(stars, grid.dx, True)
    pi_u = stars.pi_theta * stars.u_star
    a2u = stars.a**2 * stars.u_star
    du_star = stars.u_star[:, 1:] - stars.u_star[:, :-1]
    out.grid.U[MX][iy, ix] += -r * (stars.pi_theta[:, 1:] - stars.pi_theta[:, :-1]) + (
        dt / alpha
    ) * src_mom
    out.grid.U[EN][iy, ix] += -r * (pi_u[:, 1:] - pi_u[:, :-1]) + (dt / alpha) * src_en
    out.rho_pi[iy, ix] += -r * (a2u[:, 1:] - a2u[:, :-1])
    out.rho_tau[iy, ix] += r * du_star
    return out


def advection_substep(aug, gas, config, alpha, dt):
    """Update every rho*phi (phi in {1, u, v, E, Pi}) by the 1/(1-alpha)-weighted
    upwind transport sub-system; rho*Tau gets the compression term."""
    grid = aug.grid
    _require_1d(grid)
    stars, (L, R) = _stars_axis(grid, gas, config, 1, _prims_full(grid, gas))
    r = dt / ((1.0 - alpha) * grid.dx)
    transport = np.maximum(stars.u_star[:, :-1], 0.0) - np.minimum(stars.u_star[:, 1:], 0.0)
    if r * float(transport.max()) > _SLACK:
        raise CFLError("advection sub-step CFL violated")
    out = aug.copy()
    iy, ix = grid.interior
    up = stars.u_star > 0.0
    for field, comp in ((out.grid.U[RHO], RHO), (out.grid.U[MX], MX), (out.grid.U[MY], MY),
                        (out.grid.U[EN], EN)):
        q = grid.U[comp]
        flux = stars.u_star * np.where(up, q[L], q[R])
        field[iy, ix] -= r * (flux[:, 1:] - flux[:, :-1])
    flux = stars.u_star * np.where(up, aug.rho_pi[L], aug.rho_pi[R])
    out.rho_pi[iy, ix] -= r * (flux[:, 1:] - flux[:, :-1])
    out.rho_tau[iy, ix] -= r * (stars.u_star[:, 1:] - stars.u_star[:, :-1])
    return out


def convex_combine(P, A, alpha):
    """alpha*P + (1-alpha)*A; checks the grids match and that the combined
    rho*Tau telescopes back to one. Returns a plain Grid."""
    gp, ga = P.grid, A.grid
    if (gp.nx, gp.ny, gp.dx, gp.dy, gp.x0, gp.y0, gp.ng) != (
        ga.nx, ga.ny, ga.dx, ga.dy, ga.x0, ga.y0, ga.ng
    ):
        raise ValueError("sub-step grids do not match")
    out = gp.copy()
    out.U[...] = alpha * gp.U + (1.0 - alpha) * ga.U
    rho_tau = alpha * P.rho_tau + (1.0 - alpha) * A.rho_tau
    iy, ix = out.interior
    err = np.max(np.abs(rho_tau[iy, ix] - 1.0))
    if err > 1e-12:
        raise ValueError(f"combined rho*Tau deviates from 1 by {err:g}; inconsistent sub-steps")
    return out


def check_condition_co(VL, VR, star, gas):
    """Low-Mach entropy condition: both per-side residuals
    (p^EOS(tau*_k, s_k) - Pi*_k)^2/(2a^2) - (1-theta)^2 (u_R-u_L)^2 / 8
    must be non-negative. Returns (ok, (res_L, res_R)); diagnostic only."""
    du2 = (VR.u - VL.u) ** 2
    penalty = (1.0 - star.theta) ** 2 * du2 / 8.0
    res = []
    for V, tau_k, pi_k in (
        (VL, star.tau_star_L, star.pi_star_L),
        (VR, star.tau_star_R, star.pi_star_R),
    ):
        s_k = eos.specific_entropy(gas, V.rho, V.p / ((gas.gamma - 1.0) * V.rho))
        p_eos = eos.pressure_from_tau_entropy(gas, tau_k, s_k)
        res.append((p_eos - pi_k) ** 2 / (2.0 * star.a**2) - penalty)
    ok = np.all(res[0] >= 0.0) and np.all(res[1] >= 0.0)
    return bool(ok), (res[0], res[1])


def star_invariant_residuals(VL, VR, star, gas):
    """Relative residuals of the acoustic Riemann invariants (theta = 1 path):
    e*_k - Pi*_k^2/(2a^2) = e_k - Pi_k^2/(2a^2) and tau*_k + Pi*_k/a^2 = tau_k + Pi_k/a^2
    (the conserved Suliciu combination is Pi + a^2 tau; across the left wave
    Pi*-Pi = -a(u*-u) while tau*-tau = +(u*-u)/a, so only the 1/a^2 weighting
    telescopes). Returns ((energy_L, energy_R), (tau_L, tau_R))."""
    a2 = 2.0 * star.a**2
    res_e, res_tau = [], []
    for V, e_star, tau_star, pi_star in (
        (VL, star.e_star_L, star.tau_star_L, star.pi_star_L),
        (VR, star.e_star_R, star.tau_star_R, star.pi_star_R),
    ):
        e_k = V.p / ((gas.gamma - 1.0) * V.rho)
        lhs = e_star - pi_star**2 / a2
        rhs = e_k - V.p**2 / a2
        res_e.append(np.abs(lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300))
        lhs = tau_star + pi_star / star.a**2
        rhs = 1.0 / V.rho + V.p / star.a**2
        res_tau.append(
            np.abs(lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1e-300)
        )
    return (res_e[0], res_e[1]), (res_tau[0], res_tau[1])


@dataclass
class EigenReport:
    max_residual: float
    n_checked: int
    skipped: list


def relaxation_matrix(rho_p, u_p, a, rho_a):
    """The 11x11 quasilinear matrix of the off-equilibrium relaxation system in
    the variables (u^P, Pi^P, rho^P, phi, inv1, inv2, inv3, u^A, Pi^A, E^A, rho^A)."""
    M = np.zeros((11, 11))
    M[0, 1] = 2.0 / rho_p
    M[0, 3] = 2.0
    M[1, 0] = 2.0 * a**2 / rho_p
    for i in (7, 8, 9, 10):
        M[i, i] = 2.0 * u_p
    M[10, 0] = 2.0 * rho_a
    return M


def eigenstructure_residual(rho_p, u_p, a, rho_a):
    """max over the listed eigenpairs of ||M r - lambda r||_inf.

    The r_+/- vectors are skipped (and reported) when their denominator
    rho^P u^P -+ a vanishes.
    """
    if not (rho_p > 0.0 and a > 0.0):
        raise ValueError("need rho_p > 0 and a > 0")
    M = relaxation_matrix(rho_p, u_p, a, rho_a)

    def unit(i):
        r = np.zeros(11)
        r[i] = 1.0
        return r

    pairs = [(0.0, unit(2)), (0.0, unit(4)), (0.0, unit(5)), (0.0, unit(6))]
    r02 = np.zeros(11)
    r02[1], r02[3] = -rho_p, 1.0
    pairs.append((0.0, r02))
    lam_u = 2.0 * u_p
    pairs.extend((lam_u, unit(i)) for i in (7, 8, 9, 10))

    skipped = []
    for sign, name in ((+1.0, "r_plus"), (-1.0, "r_minus")):
        den = rho_p * u_p - sign * a
        if den == 0.0:
            skipped.append(name)
            continue
        r = np.zeros(11)
        r[0], r[1], r[10] = 1.0, sign * a, -rho_a * rho_p / den
        pairs.append((sign * 2.0 * a / rho_p, r))

    res = max(float(np.max(np.abs(M @ r - lam * r))) for lam, r in pairs)
    return EigenReport(max_residual=res, n_checked=len(pairs), skipped=skipped)
