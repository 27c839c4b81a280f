"""Time steppers (FSLP, OSLP, HLLC; first order and MUSCL-Hancock) and dt formulas.

Sweeps are fully vectorized over interfaces: a directional sweep builds the star
states of every interface at once, then assembles fluxes and the interface
halves of the gravity source. The y direction reuses the x machinery with the
velocity components swapped.
"""

import time
import warnings
from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from . import kernels
from .errors import AdmissibilityError, CFLError, SubcharacteristicWarning
from .grid import EN, MX, MY, RHO, apply_boundaries

_DT_SAFETY = 1.0 - 1e-12  # keeps the CFL inequalities strict at the argmax cell

_SCHEMES = ("fslp", "oslp", "hllc")


@dataclass
class SchemeConfig:
    """Scheme selection plus the knobs shared by every run."""

    scheme: str = "fslp"
    order: int = 1
    c_cfl: float = None
    k_impedance: float = 1.1
    theta_policy: str = "all_regime"  # or "fixed"
    theta_value: float = 1.0
    limiter: str = "minmod"
    time_integrator: str = "hancock"  # or "ssp_rk2" (order 2 only)

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {self.order}")
        if self.scheme == "oslp" and self.order == 2:
            raise ValueError("OSLP has no second-order variant")
        if self.theta_policy not in ("all_regime", "fixed"):
            raise ValueError(f"unknown theta policy {self.theta_policy!r}")
        if self.limiter != "minmod":
            raise ValueError(f"unknown limiter {self.limiter!r}")
        if self.time_integrator not in ("hancock", "ssp_rk2"):
            raise ValueError(f"unknown time integrator {self.time_integrator!r}")
        if not self.k_impedance > 1.0:
            raise ValueError("impedance multiplier K must exceed 1")

    @property
    def cfl(self):
        if self.c_cfl is not None:
            return self.c_cfl
        return 1.0 if self.order == 1 else 0.5

    @property
    def n_ghost(self):
        return 1 if self.order == 1 else 2

    @property
    def n_field_buffers(self):
        # two time levels, plus the intermediate acoustic state for OSLP
        return 3 if self.scheme == "oslp" else 2


@dataclass
class StepReport:
    dt: float
    subchar_warnings: int = 0
    entropy_residual_min: float = None
    wall_time: float = 0.0


# -- primitive slabs and star sweeps ----------------------------------------


def _prims_full(grid, gas):
    """(rho, u, v, p) over the whole padded array, no admissibility checks."""
    rho = grid.U[RHO]
    u = grid.U[MX] / rho
    v = grid.U[MY] / rho
    p = (gas.gamma - 1.0) * (grid.U[EN] - 0.5 * (grid.U[MX] * u + grid.U[MY] * v))
    return rho, u, v, p


def _star_core(rhoL, unL, pL, phiL, rhoR, unR, pR, phiR, gas, config):
    """Vectorized interface solve; un is the velocity normal to the interface."""
    rcL = np.sqrt(gas.gamma * pL * rhoL)
    rcR = np.sqrt(gas.gamma * pR * rhoR)
    a = config.k_impedance * np.maximum(rcL, rcR)
    if config.theta_policy == "fixed":
        theta = min(max(config.theta_value, 0.0), 1.0)
    else:
        theta = np.minimum(1.0, np.maximum(np.abs(unL) * rhoL / rcL, np.abs(unR) * rhoR / rcR))
    m = 0.5 * (rhoL + rhoR) * (phiR - phiL)
    du = unR - unL
    u_star = 0.5 * (unL + unR) - (pR - pL + m) / (2.0 * a)
    pi_theta = 0.5 * (pL + pR) - theta * 0.5 * a * du
    aor = a * np.maximum(1.0 / rhoL, 1.0 / rhoR)
    # tau*_k > 0 is equivalent to u_L - a/rho_L < u* < u_R + a/rho_R
    bad = np.count_nonzero((u_star <= unL - a / rhoL) | (u_star >= unR + a / rhoR))
    return SimpleNamespace(
        a=a, theta=theta, u_star=u_star, pi_theta=pi_theta, m=m, aor=aor, n_subchar_bad=int(bad)
    )


def _axis_slabs(grid, axis):
    """(left, right) index tuples selecting the cells on both sides of every
    interface normal to `axis`, interior rows/columns only."""
    ng = grid.ng
    if axis == 1:
        rows = np.s_[ng:ng + grid.ny]
        return (np.s_[rows, ng - 1:ng + grid.nx], np.s_[rows, ng:ng + grid.nx + 1])
    cols = np.s_[ng:ng + grid.nx]
    return (np.s_[ng - 1:ng + grid.ny, cols], np.s_[ng:ng + grid.ny + 1, cols])


def _stars_axis(grid, gas, config, axis, prims):
    rho, u, v, p = prims
    L, R = _axis_slabs(grid, axis)
    un = u if axis == 1 else v
    if kernels.HAVE_NUMBA:
        fixed = config.theta_policy == "fixed"
        tv = min(max(config.theta_value, 0.0), 1.0) if fixed else 1.0
        a, us, pit, m, aor, nbad = kernels.star_sweep(
            rho, un, p, grid.phi, grid.ng, axis, config.k_impedance, gas.gamma,
            fixed, tv, grid.ny, grid.nx,
        )
        stars = SimpleNamespace(
            a=a, theta=None, u_star=us, pi_theta=pit, m=m, aor=aor, n_subchar_bad=int(nbad)
        )
        return stars, (L, R)
    return (
        _star_core(
            rho[L], un[L], p[L], grid.phi[L], rho[R], un[R], p[R], grid.phi[R], gas, config
        ),
        (L, R),
    )


def _upwind_slab(u_star, QL, QR):
    # QL/QR have a leading component axis; broadcast the interface mask over it
    return np.where(u_star > 0.0, QL, QR)


def _fslp_direction_flux(grid, stars, L, R, axis):
    """FSLP flux (4, ...) on every interface; the normal momentum component is
    MX for axis=1 and MY for axis=0."""
    mn = MX if axis == 1 else MY
    if kernels.HAVE_NUMBA:
        return kernels.upwind_flux(grid.U, stars.u_star, stars.pi_theta, grid.ng, axis, mn)
    UL = grid.U[(slice(None),) + L]
    UR = grid.U[(slice(None),) + R]
    F = stars.u_star * _upwind_slab(stars.u_star, UL, UR)
    F[mn] += stars.pi_theta
    F[EN] += stars.pi_theta * stars.u_star
    return F


def _source_terms(stars, d, axis_is_x):
    """Per-cell momentum/energy sources from the interface halves along one axis."""
    m_over_d = stars.m / d
    src_mom = -0.5 * (_right(m_over_d, axis_is_x) + _left(m_over_d, axis_is_x))
    uem = stars.u_star * m_over_d
    src_en = -0.5 * (_right(uem, axis_is_x) + _left(uem, axis_is_x))
    return src_mom, src_en


def _left(q, axis_is_x):
    return q[:, :-1] if axis_is_x else q[:-1, :]


def _right(q, axis_is_x):
    return q[:, 1:] if axis_is_x else q[1:, :]


def _check_post_step(grid, dt):
    rho = grid.U[RHO][grid.interior]
    mx = grid.U[MX][grid.interior]
    my = grid.U[MY][grid.interior]
    en = grid.U[EN][grid.interior]
    rho_e = en - 0.5 * (mx * mx + my * my) / rho
    bad = ~((rho > 0.0) & (rho_e > 0.0))
    if bad.any():
        cell = tuple(np.argwhere(bad)[0])
        raise AdmissibilityError(
            f"state left the admissible set at interior cell {cell} after a step with dt={dt:g}"
        )


def _warn_subchar(count):
    if count:
        warnings.warn(
            f"{count} interface(s) violate the subcharacteristic condition (a too small)",
            SubcharacteristicWarning,
            stacklevel=3,
        )


# -- time step formulas ------------------------------------------------------


def _axis_speed(stars, axis_is_x, combine):
    """max_j [ 2 max((a/rho)_{j-1/2}, (a/rho)_{j+1/2})  <combine>  ((u*_{j-1/2})^+ - (u*_{j+1/2})^-) ]"""
    acoustic = 2.0 * np.maximum(_left(stars.aor, axis_is_x), _right(stars.aor, axis_is_x))
    transport = np.maximum(_left(stars.u_star, axis_is_x), 0.0) - np.minimum(
        _right(stars.u_star, axis_is_x), 0.0
    )
    per_cell = acoustic + transport if combine == "sum" else np.maximum(acoustic, transport)
    return float(per_cell.max())


def _compute_lp_stars(grid, gas, config):
    """Star states of every direction, shared between dt and the update."""
    prims = _prims_full(grid, gas)
    sx = _stars_axis(grid, gas, config, 1, prims)
    sy = None if grid.is_1d else _stars_axis(grid, gas, config, 0, prims)
    return sx, sy


def _dt_from_stars(grid, config, stars, combine):
    (sx, _), sy_pack = stars
    inv_dt = _axis_speed(sx, True, combine) / grid.dx
    if sy_pack is not None:
        inv_dt += _axis_speed(sy_pack[0], False, combine) / grid.dy
    dt = config.cfl * _DT_SAFETY / inv_dt
    if not np.isfinite(dt) or dt <= 0.0:
        raise CFLError(f"non-finite time step (1/dt = {inv_dt})")
    return dt


def dt_fslp(grid, gas, config, _stars=None):
    """FSLP time step: acoustic and transport speeds summed, directions summed."""
    stars = _compute_lp_stars(grid, gas, config) if _stars is None else _stars
    return _dt_from_stars(grid, config, stars, "sum")


def dt_oslp(grid, gas, config, _stars=None):
    """OSLP time step: max of acoustic and transport speeds instead of their sum."""
    stars = _compute_lp_stars(grid, gas, config) if _stars is None else _stars
    return _dt_from_stars(grid, config, stars, "max")


def dt_hllc(grid, gas, config):
    """Standard |u|+c CFL estimate, directions combined like the other schemes."""
    rho, u, v, p = _prims_full(grid, gas)
    iy, ix = grid.interior
    c = np.sqrt(gas.gamma * p[iy, ix] / rho[iy, ix])
    inv_dt = float((np.abs(u[iy, ix]) + c).max()) / grid.dx
    if not grid.is_1d:
        inv_dt += float((np.abs(v[iy, ix]) + c).max()) / grid.dy
    dt = config.cfl * _DT_SAFETY / inv_dt
    if not np.isfinite(dt) or dt <= 0.0:
        raise CFLError(f"non-finite time step (1/dt = {inv_dt})")
    return dt


def compute_dt(grid, gas, config):
    if config.scheme == "fslp":
        return dt_fslp(grid, gas, config)
    if config.scheme == "oslp":
        return dt_oslp(grid, gas, config)
    return dt_hllc(grid, gas, config)


# -- first-order steppers ----------------------------------------------------


def _apply_lp_axis(newU, src_grid, stars_pack, axis, dt, d, ng):
    """Add one direction of the split-flux update (fluxes + source halves);
    src_grid supplies the upwinded states (time n for FSLP, acoustic state for
    the OSLP transport step)."""
    stars, (L, R) = stars_pack
    if kernels.HAVE_NUMBA:
        kernels.lp_update(newU, src_grid.U, stars.u_star, stars.pi_theta, stars.m,
                          ng, axis, dt / d)
        return
    iy = np.s_[ng:newU.shape[1] - ng]
    ix = np.s_[ng:newU.shape[2] - ng]
    F = _fslp_direction_flux(src_grid, stars, L, R, axis)
    axis_is_x = axis == 1
    if axis_is_x:
        newU[:, iy, ix] -= (dt / d) * (F[:, :, 1:] - F[:, :, :-1])
    else:
        newU[:, iy, ix] -= (dt / d) * (F[:, 1:, :] - F[:, :-1, :])
    src_mom, src_en = _source_terms(stars, d, axis_is_x)
    newU[MX if axis_is_x else MY, iy, ix] += dt * src_mom
    newU[EN, iy, ix] += dt * src_en


def step_fslp(grid, gas, config, dt, _stars=None):
    """One conservative FSLP update; ghost cells must already be filled."""
    t0 = time.perf_counter()
    sx_pack, sy_pack = _compute_lp_stars(grid, gas, config) if _stars is None else _stars
    n_bad = sx_pack[0].n_subchar_bad + (0 if sy_pack is None else sy_pack[0].n_subchar_bad)

    newU = grid.U.copy()
    _apply_lp_axis(newU, grid, sx_pack, 1, dt, grid.dx, grid.ng)
    if sy_pack is not None:
        _apply_lp_axis(newU, grid, sy_pack, 0, dt, grid.dy, grid.ng)

    out = grid.with_U(newU)
    _check_post_step(out, dt)
    _warn_subchar(n_bad)
    return out, StepReport(dt=dt, subchar_warnings=n_bad, wall_time=time.perf_counter() - t0)


def step_hllc(grid, gas, config, dt):
    """One conservative HLLC update with the same centred gravity source as FSLP."""
    t0 = time.perf_counter()
    newU = grid.U.copy()
    iy, ix = grid.interior

    for axis, d, mcomp in ((1, grid.dx, MX), (0, grid.dy, MY)):
        if axis == 0 and grid.is_1d:
            continue
        axis_is_x = axis == 1
        L, R = _axis_slabs(grid, axis)
        F, s_star, m = _hllc_direction(grid, gas, L, R, axis)
        if axis_is_x:
            newU[:, iy, ix] -= (dt / d) * (F[:, :, 1:] - F[:, :, :-1])
        else:
            newU[:, iy, ix] -= (dt / d) * (F[:, 1:, :] - F[:, :-1, :])
        m_over_d = m / d
        src_mom = -0.5 * (_right(m_over_d, axis_is_x) + _left(m_over_d, axis_is_x))
        sem = s_star * m_over_d
        src_en = -0.5 * (_right(sem, axis_is_x) + _left(sem, axis_is_x))
        newU[mcomp, iy, ix] += dt * src_mom
        newU[EN, iy, ix] += dt * src_en

    out = grid.with_U(newU)
    _check_post_step(out, dt)
    return out, StepReport(dt=dt, wall_time=time.perf_counter() - t0)


def _hllc_direction(grid, gas, L, R, axis):
    """HLLC flux arrays for one direction, swapping components so the normal
    velocity plays the x role; returns (flux, contact speed, gravity jump m)."""
    if kernels.HAVE_NUMBA:
        return kernels.hllc_sweep(grid.U, grid.phi, grid.U[RHO], grid.ng, axis, gas.gamma)
    UL = grid.U[(slice(None),) + L]
    UR = grid.U[(slice(None),) + R]
    if axis == 0:
        UL = UL[[RHO, MY, MX, EN]]
        UR = UR[[RHO, MY, MX, EN]]
    F, s_star = _hllc_core(UL, UR, gas)
    if axis == 0:
        F = F[[RHO, MY, MX, EN]]
    m = 0.5 * (grid.U[RHO][L] + grid.U[RHO][R]) * (grid.phi[R] - grid.phi[L])
    return F, s_star, m


def _hllc_core(UL, UR, gas):
    rhoL, rhoR = UL[RHO], UR[RHO]
    uL, uR = UL[MX] / rhoL, UR[MX] / rhoR
    vL, vR = UL[MY] / rhoL, UR[MY] / rhoR
    pL = (gas.gamma - 1.0) * (UL[EN] - 0.5 * rhoL * (uL * uL + vL * vL))
    pR = (gas.gamma - 1.0) * (UR[EN] - 0.5 * rhoR * (uR * uR + vR * vR))
    cL = np.sqrt(gas.gamma * pL / rhoL)
    cR = np.sqrt(gas.gamma * pR / rhoR)
    sL = np.minimum(uL - cL, uR - cR)
    sR = np.maximum(uL + cL, uR + cR)
    s_star = (pR - pL + rhoL * uL * (sL - uL) - rhoR * uR * (sR - uR)) / (
        rhoL * (sL - uL) - rhoR * (sR - uR)
    )

    def flux_of(U, u, p):
        return np.stack([U[RHO] * u, U[MX] * u + p, U[MY] * u, u * (U[EN] + p)])

    def star_of(U, rho, u, p, sK):
        coef = rho * (sK - u) / (sK - s_star)
        return np.stack(
            [
                coef,
                coef * s_star,
                coef * U[MY] / rho,
                coef * (U[EN] / rho + (s_star - u) * (s_star + p / (rho * (sK - u)))),
            ]
        )

    fL = flux_of(UL, uL, pL)
    fR = flux_of(UR, uR, pR)
    fsL = fL + sL * (star_of(UL, rhoL, uL, pL, sL) - UL)
    fsR = fR + sR * (star_of(UR, rhoR, uR, pR, sR) - UR)
    F = np.where(sL >= 0.0, fL, np.where(s_star >= 0.0, fsL, np.where(sR > 0.0, fsR, fR)))
    return F, s_star


def step_oslp(grid, gas, config, dt, bc, _stars=None):
    """One OSLP update: acoustic step, ghost refill of the intermediate state,
    then the transport step written in the conservative split-method form."""
    t0 = time.perf_counter()
    sx_pack, sy_pack = _compute_lp_stars(grid, gas, config) if _stars is None else _stars
    sx = sx_pack[0]
    sy = None if sy_pack is None else sy_pack[0]
    n_bad = sx.n_subchar_bad + (0 if sy is None else sy.n_subchar_bad)
    iy, ix = grid.interior

    # acoustic step into the intermediate state (the third buffer OSLP pays for)
    if kernels.HAVE_NUMBA:
        mid = grid.with_U(np.empty_like(grid.U))
        one = np.zeros((1, 1))
        lmin = kernels.oslp_acoustic(
            grid.U, mid.U, sx.u_star, sx.pi_theta, sx.m,
            sy.u_star if sy is not None else one,
            sy.pi_theta if sy is not None else one,
            sy.m if sy is not None else one,
            grid.ng, dt, grid.dx, grid.dy, sy is not None,
        )
        if lmin <= 0.0:
            raise CFLError(f"acoustic CFL violation (min L = {lmin:g}) with dt={dt:g}")
    else:
        Lfac = 1.0 + (dt / grid.dx) * (sx.u_star[:, 1:] - sx.u_star[:, :-1])
        if sy is not None:
            Lfac += (dt / grid.dy) * (sy.u_star[1:, :] - sy.u_star[:-1, :])
        if np.any(Lfac <= 0.0):
            raise CFLError(f"acoustic CFL violation (min L = {Lfac.min():g}) with dt={dt:g}")
        mid = grid.with_U(grid.U.copy())
        srcx_mom, srcx_en = _source_terms(sx, grid.dx, True)
        mx_new = grid.U[MX, iy, ix] - (dt / grid.dx) * (
            sx.pi_theta[:, 1:] - sx.pi_theta[:, :-1]
        ) + dt * srcx_mom
        en_new = grid.U[EN, iy, ix] - (dt / grid.dx) * (
            (sx.pi_theta * sx.u_star)[:, 1:] - (sx.pi_theta * sx.u_star)[:, :-1]
        ) + dt * srcx_en
        my_new = grid.U[MY, iy, ix].copy()
        if sy is not None:
            srcy_mom, srcy_en = _source_terms(sy, grid.dy, False)
            my_new += -(dt / grid.dy) * (sy.pi_theta[1:, :] - sy.pi_theta[:-1, :]) + dt * srcy_mom
            en_new += -(dt / grid.dy) * (
                (sy.pi_theta * sy.u_star)[1:, :] - (sy.pi_theta * sy.u_star)[:-1, :]
            ) + dt * srcy_en
        mid.U[RHO][iy, ix] = grid.U[RHO][iy, ix] / Lfac
        mid.U[MX][iy, ix] = mx_new / Lfac
        mid.U[MY][iy, ix] = my_new / Lfac
        mid.U[EN][iy, ix] = en_new / Lfac
    apply_boundaries(mid, bc, gas)

    # transport step on the acoustic state, in the conservative form
    newU = grid.U.copy()
    _apply_lp_axis(newU, mid, sx_pack, 1, dt, grid.dx, grid.ng)
    if sy_pack is not None:
        _apply_lp_axis(newU, mid, sy_pack, 0, dt, grid.dy, grid.ng)

    out = grid.with_U(newU)
    _check_post_step(out, dt)
    _warn_subchar(n_bad)
    return out, StepReport(dt=dt, subchar_warnings=n_bad, wall_time=time.perf_counter() - t0)


# -- MUSCL-Hancock second order ----------------------------------------------


def minmod(a, b):
    """Zero on sign disagreement, else the argument of smaller magnitude."""
    return np.where(np.asarray(a) * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def muscl_reconstruct(grid, gas):
    """Minmod-limited linear traces of the primitive variables at t^n.

    Returns a dict with, per direction, the (rho, u, v, p) traces on the left
    and right side of every interface adjacent to an interior cell.
    """
    if grid.ng < 2:
        raise ValueError("MUSCL reconstruction needs two ghost layers")
    prims = _prims_full(grid, gas)
    ext, slopes_x, slopes_y = _slopes(grid, prims)
    out = {}
    tr = _traces_from_slopes(grid, ext, slopes_x, slopes_y, None)
    out["x_left"], out["x_right"] = _interface_traces(tr, grid, axis=1)
    if not grid.is_1d:
        out["y_left"], out["y_right"] = _interface_traces(tr, grid, axis=0)
    return out


def _ext_slice(grid):
    ng = grid.ng
    return np.s_[ng - 1:ng + grid.ny + 1], np.s_[ng - 1:ng + grid.nx + 1]


def _slopes(grid, prims):
    """Limited slopes (per unit length) of (rho, u, v, p) on the interior plus
    one ghost ring."""
    ey, ex = _ext_slice(grid)
    ext = [q[ey, ex] for q in prims]
    sx, sy = [], []
    for q in prims:
        c = q[ey, ex]
        left = q[ey, ex.start - 1:ex.stop - 1]
        right = q[ey, ex.start + 1:ex.stop + 1]
        sx.append(minmod(c - left, right - c) / grid.dx)
        if grid.is_1d:
            sy.append(np.zeros_like(c))
        else:
            down = q[ey.start - 1:ey.stop - 1, ex]
            up = q[ey.start + 1:ey.stop + 1, ex]
            sy.append(minmod(c - down, up - c) / grid.dy)
    return ext, sx, sy


def _traces_from_slopes(grid, ext, sx, sy, vdot, dt=0.0):
    """Cell-centred values plus limited slopes -> the four face traces per cell.

    When vdot (primitive time derivative) is given, every trace of a cell is
    advanced by dt/2 * vdot (Hancock predictor); cells whose predicted traces
    would leave the admissible set fall back to their unreconstructed value.
    """
    rho, u, v, p = ext
    half_x, half_y = 0.5 * grid.dx, 0.5 * grid.dy
    center = [q + (0.5 * dt) * qd for q, qd in zip(ext, vdot)] if vdot else list(ext)

    tr = {}
    for name, q, qsx, qsy in zip(("rho", "u", "v", "p"), center, sx, sy):
        tr[name] = {
            "xm": q - half_x * qsx,
            "xp": q + half_x * qsx,
            "ym": q - half_y * qsy,
            "yp": q + half_y * qsy,
        }
    bad = np.zeros(rho.shape, dtype=bool)
    for name in ("rho", "p"):
        for face in ("xm", "xp", "ym", "yp"):
            bad |= ~(tr[name][face] > 0.0)
    if bad.any():
        for name, q in zip(("rho", "u", "v", "p"), ext):
            for face in ("xm", "xp", "ym", "yp"):
                tr[name][face] = np.where(bad, q, tr[name][face])
    return tr


def _interface_traces(tr, grid, axis):
    """Left/right (rho, u, v, p) tuples at the interfaces of the interior cells."""
    ny, nx = grid.ny, grid.nx
    if axis == 1:
        rows = np.s_[1:ny + 1]
        left = tuple(tr[n]["xp"][rows, 0:nx + 1] for n in ("rho", "u", "v", "p"))
        right = tuple(tr[n]["xm"][rows, 1:nx + 2] for n in ("rho", "u", "v", "p"))
    else:
        cols = np.s_[1:nx + 1]
        left = tuple(tr[n]["yp"][0:ny + 1, cols] for n in ("rho", "u", "v", "p"))
        right = tuple(tr[n]["ym"][1:ny + 2, cols] for n in ("rho", "u", "v", "p"))
    return left, right


def _primitive_time_derivative(grid, gas, ext, sx, sy):
    """d/dt of (rho, u, v, p) from the primitive-form equations with the limited
    slopes as space derivatives and centred phi differences as gravity."""
    rho, u, v, p = ext
    sx_rho, sx_u, sx_v, sx_p = sx
    sy_rho, sy_u, sy_v, sy_p = sy
    ey, ex = _ext_slice(grid)
    dphix = (grid.phi[ey, ex.start + 1:ex.stop + 1] - grid.phi[ey, ex.start - 1:ex.stop - 1]) / (
        2.0 * grid.dx
    )
    if grid.is_1d:
        dphiy = 0.0
    else:
        dphiy = (grid.phi[ey.start + 1:ey.stop + 1, ex] - grid.phi[ey.start - 1:ey.stop - 1, ex]) / (
            2.0 * grid.dy
        )
    g = gas.gamma
    rho_dot = -(u * sx_rho + rho * sx_u) - (v * sy_rho + rho * sy_v)
    u_dot = -(u * sx_u + sx_p / rho) - v * sy_u - dphix
    v_dot = -u * sx_v - (v * sy_v + sy_p / rho) - dphiy
    p_dot = -(u * sx_p + g * p * sx_u) - (v * sy_p + g * p * sy_v)
    return [rho_dot, u_dot, v_dot, p_dot]


def _muscl_residual(grid, gas, config, dt, hancock):
    """Second-order flux divergence and sources; returns the interior increment
    per unit dt is already folded in (full dt update array) plus warning count."""
    prims = _prims_full(grid, gas)
    ext, sx, sy = _slopes(grid, prims)
    vdot = _primitive_time_derivative(grid, gas, ext, sx, sy) if hancock else None
    tr = _traces_from_slopes(grid, ext, sx, sy, vdot, dt)

    iy, ix = grid.interior
    dU = np.zeros((4, grid.ny, grid.nx))
    n_bad = 0
    for axis in (1, 0):
        if axis == 0 and grid.is_1d:
            continue
        axis_is_x = axis == 1
        d = grid.dx if axis_is_x else grid.dy
        (rhoL, uL, vL, pL), (rhoR, uR, vR, pR) = _interface_traces(tr, grid, axis)
        L, R = _axis_slabs(grid, axis)
        phiL, phiR = grid.phi[L], grid.phi[R]
        unL, utL = (uL, vL) if axis_is_x else (vL, uL)
        unR, utR = (uR, vR) if axis_is_x else (vR, uR)
        if config.scheme == "hllc":
            F, s_star, m = _hllc_trace_flux(
                rhoL, unL, utL, pL, rhoR, unR, utR, pR, gas, axis, phiL, phiR
            )
            u_iface = s_star
        else:
            stars = _star_core(rhoL, unL, pL, phiL, rhoR, unR, pR, phiR, gas, config)
            n_bad += stars.n_subchar_bad
            F = _trace_fslp_flux(stars, rhoL, unL, utL, pL, rhoR, unR, utR, pR, gas, axis)
            m = stars.m
            u_iface = stars.u_star
        if axis_is_x:
            dU -= (dt / d) * (F[:, :, 1:] - F[:, :, :-1])
        else:
            dU -= (dt / d) * (F[:, 1:, :] - F[:, :-1, :])
        m_over_d = m / d
        mn = MX if axis_is_x else MY
        dU[mn] -= dt * 0.5 * (_right(m_over_d, axis_is_x) + _left(m_over_d, axis_is_x))
        uem = u_iface * m_over_d
        dU[EN] -= dt * 0.5 * (_right(uem, axis_is_x) + _left(uem, axis_is_x))
    return dU, n_bad


def _cons_from_trace(rho, un, ut, p, gas, axis):
    mx = rho * (un if axis == 1 else ut)
    my = rho * (ut if axis == 1 else un)
    en = p / (gas.gamma - 1.0) + 0.5 * rho * (un * un + ut * ut)
    return np.stack([rho, mx, my, en])


def _trace_fslp_flux(stars, rhoL, unL, utL, pL, rhoR, unR, utR, pR, gas, axis):
    UL = _cons_from_trace(rhoL, unL, utL, pL, gas, axis)
    UR = _cons_from_trace(rhoR, unR, utR, pR, gas, axis)
    F = stars.u_star * _upwind_slab(stars.u_star, UL, UR)
    mn = MX if axis == 1 else MY
    F[mn] += stars.pi_theta
    F[EN] += stars.pi_theta * stars.u_star
    return F


def _hllc_trace_flux(rhoL, unL, utL, pL, rhoR, unR, utR, pR, gas, axis, phiL, phiR):
    UL = _cons_from_trace(rhoL, unL, utL, pL, gas, 1)
    UR = _cons_from_trace(rhoR, unR, utR, pR, gas, 1)
    F, s_star = _hllc_core(UL, UR, gas)
    if axis == 0:
        F = F[[RHO, MY, MX, EN]]
    m = 0.5 * (rhoL + rhoR) * (phiR - phiL)
    return F, s_star, m


def _step_muscl(grid, gas, config, dt, bc):
    t0 = time.perf_counter()
    iy, ix = grid.interior
    if config.time_integrator == "hancock":
        dU, n_bad = _muscl_residual(grid, gas, config, dt, hancock=True)
        newU = grid.U.copy()
        newU[:, iy, ix] += dU
    else:
        if bc is None:
            raise ValueError("ssp_rk2 needs the boundary spec to refill the stage state")
        dU1, n_bad = _muscl_residual(grid, gas, config, dt, hancock=False)
        stage = grid.copy()
        stage.U[:, iy, ix] += dU1
        apply_boundaries(stage, bc, gas)
        dU2, n_bad2 = _muscl_residual(stage, gas, config, dt, hancock=False)
        n_bad += n_bad2
        newU = grid.U.copy()
        newU[:, iy, ix] = 0.5 * (grid.U[:, iy, ix] + stage.U[:, iy, ix] + dU2)
    out = grid.with_U(newU)
    _check_post_step(out, dt)
    _warn_subchar(n_bad)
    return out, StepReport(dt=dt, subchar_warnings=n_bad, wall_time=time.perf_counter() - t0)


def step_muscl_fslp(grid, gas, config, dt, bc=None):
    """MUSCL-Hancock (or SSP-RK2) second-order FSLP step."""
    if config.scheme != "fslp":
        raise ValueError("config.scheme must be 'fslp'")
    return _step_muscl(grid, gas, config, dt, bc)


def step_muscl_hllc(grid, gas, config, dt, bc=None):
    """MUSCL-Hancock (or SSP-RK2) second-order HLLC step."""
    if config.scheme != "hllc":
        raise ValueError("config.scheme must be 'hllc'")
    return _step_muscl(grid, gas, config, dt, bc)


def step(grid, gas, config, dt, bc=None, _stars=None):
    """Dispatch one step of the configured scheme; ghosts must be filled."""
    if config.order == 2:
        return _step_muscl(grid, gas, config, dt, bc)
    if config.scheme == "fslp":
        return step_fslp(grid, gas, config, dt, _stars=_stars)
    if config.scheme == "oslp":
        if bc is None:
            raise ValueError("OSLP needs the boundary spec for its intermediate state")
        return step_oslp(grid, gas, config, dt, bc, _stars=_stars)
    return step_hllc(grid, gas, config, dt)


def advance(grid, gas, config, bc, dt_cap=np.inf):
    """Fill ghosts, compute dt (capped by dt_cap) and take one step.

    The Lagrange-projection schemes reuse the star states between the dt
    formula and the update, which halves the interface work per step.
    """
    apply_boundaries(grid, bc, gas)
    stars = None
    if config.order == 1 and config.scheme in ("fslp", "oslp"):
        stars = _compute_lp_stars(grid, gas, config)
        dt = _dt_from_stars(grid, config, stars, "sum" if config.scheme == "fslp" else "max")
    else:
        dt = compute_dt(grid, gas, config)
    dt = min(dt, dt_cap)
    new_grid, report = step(grid, gas, config, dt, bc=bc, _stars=stars)
    return new_grid, report, dt


# -- entropy diagnostic -------------------------------------------------------


def entropy_residual(grid_old, grid_new, gas, config, dt):
    """Per-cell residual of the discrete entropy inequality for one FSLP step.

    residual = (rho s)^{n+1} - (rho s)^n + dt/dx (Q_{j+1/2} - Q_{j-1/2}) [+ y part]
    with Q = u* (rho s)^n upwinded; the pressure part contributes no interface
    entropy flux because the pressure subsystem moves no mass. Non-negative up
    to round-off for theta = 1; reported (possibly negative) for theta < 1.
    """
    prims_old = _prims_full(grid_old, gas)
    rho_o, u_o, v_o, p_o = prims_old
    rs_old = rho_o * gas.cv * (np.log(p_o) - gas.gamma * np.log(rho_o))
    rho_n, u_n, v_n, p_n = _prims_full(grid_new, gas)
    rs_new = rho_n * gas.cv * (np.log(p_n) - gas.gamma * np.log(rho_n))

    iy, ix = grid_old.interior
    res = rs_new[iy, ix] - rs_old[iy, ix]
    sx, (Lx, Rx) = _stars_axis(grid_old, gas, config, 1, prims_old)
    Qx = sx.u_star * np.where(sx.u_star > 0.0, rs_old[Lx], rs_old[Rx])
    res += (dt / grid_old.dx) * (Qx[:, 1:] - Qx[:, :-1])
    if not grid_old.is_1d:
        sy, (Ly, Ry) = _stars_axis(grid_old, gas, config, 0, prims_old)
        Qy = sy.u_star * np.where(sy.u_star > 0.0, rs_old[Ly], rs_old[Ry])
        res += (dt / grid_old.dy) * (Qy[1:, :] - Qy[:-1, :])
    return res
