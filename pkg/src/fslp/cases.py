"""Benchmark cases, the run driver and the diagnostics behind the result tables.

Initial conditions are evaluated pointwise at cell centers. Each case carries
its gas, domain, boundary conditions, potential and default resolution; the
registry is addressable by name from the CLI.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .eos import GasParams
from .errors import AdmissibilityError
from .grid import EN, MX, MY, RHO, BoundarySpec, Grid, apply_boundaries
from .schemes import advance, entropy_residual


@dataclass
class CaseSpec:
    name: str
    gas: GasParams
    xlim: tuple
    ylim: tuple = None  # None -> 1D
    default_nx: int = 100
    bc: BoundarySpec = field(default_factory=BoundarySpec)
    t_end: float = 1.0
    ic: callable = None          # ic(X, Y) -> (rho, u, v, p)
    phi: callable = None         # phi(X, Y), None -> flat
    params: dict = field(default_factory=dict)
    builder: callable = None     # replaces the pointwise ic (hydrostatic)

    @property
    def aspect(self):
        if self.ylim is None:
            return None
        return (self.ylim[1] - self.ylim[0]) / (self.xlim[1] - self.xlim[0])


@dataclass
class DiagnosticsReport:
    l1_density: float
    linf_density: float
    ekin_ratio: float
    max_abs_velocity: float
    entropy_residual_min: float
    step_count: int
    wall_time: float
    subchar_warnings: int = 0


def init_case(case, resolution=None, ng=1):
    """Build the initial grid of a case at the given resolution (nx or (nx, ny))."""
    if case.builder is not None:
        return case.builder(case, resolution, ng)
    nx, ny = _resolve_resolution(case, resolution)
    grid = _make_grid(case, nx, ny, ng)
    X, Y = grid.center_mesh()
    rho, u, v, p = case.ic(X, Y)
    if np.any(~(np.asarray(rho) > 0.0)) or np.any(~(np.asarray(p) > 0.0)):
        raise AdmissibilityError(f"case {case.name}: inadmissible initial condition")
    grid.set_primitives(case.gas, rho, u, v, p)
    apply_boundaries(grid, case.bc, case.gas)
    return grid


def _resolve_resolution(case, resolution):
    if resolution is None:
        nx = case.default_nx
    elif isinstance(resolution, tuple):
        return resolution
    else:
        nx = int(resolution)
    if case.ylim is None:
        return nx, 1
    return nx, max(1, round(nx * case.aspect))


def _make_grid(case, nx, ny, ng):
    x0, x1 = case.xlim
    dx = (x1 - x0) / nx
    if case.ylim is None:
        y0, dy = 0.0, dx
    else:
        y0, y1 = case.ylim
        dy = (y1 - y0) / ny
    grid = Grid(nx=nx, ny=ny, dx=dx, dy=dy, x0=x0, y0=y0, ng=ng)
    if case.phi is not None:
        grid.set_phi(case.phi)
    return grid


# -- individual cases ---------------------------------------------------------


def _sod_ic(X, Y):
    left = X < 0.5
    rho = np.where(left, 1.0, 0.125)
    p = np.where(left, 1.0, 0.1)
    return rho, np.zeros_like(rho), np.zeros_like(rho), p


def _einfeldt_ic(X, Y):
    left = X < 0.5
    rho = np.ones_like(X)
    u = np.where(left, -2.0, 2.0)
    p = np.full_like(X, 0.4)
    return rho, u, np.zeros_like(rho), p


def _vortex_ic(gamma, beta=5.0, xc=10.0, yc=10.0):
    def ic(X, Y):
        r2 = (X - xc) ** 2 + (Y - yc) ** 2
        gauss = np.exp(0.5 * (1.0 - r2))
        rho = (1.0 - (gamma - 1.0) * beta**2 / (8.0 * gamma * np.pi**2) * np.exp(1.0 - r2)) ** (
            1.0 / (gamma - 1.0)
        )
        u = 1.0 - beta / (2.0 * np.pi) * gauss * (Y - yc)
        v = 1.0 + beta / (2.0 * np.pi) * gauss * (X - xc)
        return rho, u, v, rho**gamma
    return ic


def gresho_state(r, mach, gamma=1.4):
    """Radial Gresho profile: (u_theta, p) at radius r for a peak Mach number."""
    scalar = np.isscalar(r) or np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    p0 = 1.0 / (gamma * mach**2)
    inner, mid = r < 0.2, (r >= 0.2) & (r < 0.4)
    u_theta = np.where(inner, 5.0 * r, np.where(mid, 2.0 - 5.0 * r, 0.0))
    p = np.full_like(r, p0 - 2.0 + 4.0 * np.log(2.0))
    p[inner] = p0 + 12.5 * r[inner] ** 2
    p[mid] = p0 + 12.5 * r[mid] ** 2 + 4.0 - 20.0 * r[mid] + 4.0 * np.log(5.0 * r[mid])
    if scalar:
        return float(u_theta[0]), float(p[0])
    return u_theta, p


def _gresho_ic(mach, gamma=1.4, xc=0.5, yc=0.5):
    def ic(X, Y):
        r = np.hypot(X - xc, Y - yc)
        u_theta, p = gresho_state(r, mach, gamma)
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where(r > 0.0, -u_theta * (Y - yc) / r, 0.0)
            v = np.where(r > 0.0, u_theta * (X - xc) / r, 0.0)
        return np.ones_like(r), u, v, p
    return ic


def _riemann2d_ic(X, Y):
    # Configuration 3 quadrant states around the corner (0.8, 0.8)
    quads = [
        ((X < 0.8) & (Y < 0.8), (0.138, 1.206, 1.206, 0.029)),
        ((X >= 0.8) & (Y < 0.8), (0.5323, 0.0, 1.206, 0.3)),
        ((X < 0.8) & (Y >= 0.8), (0.5323, 1.206, 0.0, 0.3)),
        ((X >= 0.8) & (Y >= 0.8), (1.5, 0.0, 0.0, 1.5)),
    ]
    rho = np.empty_like(X)
    u = np.empty_like(X)
    v = np.empty_like(X)
    p = np.empty_like(X)
    for mask, (r_, u_, v_, p_) in quads:
        rho[mask], u[mask], v[mask], p[mask] = r_, u_, v_, p_
    return rho, u, v, p


HYDRO_T_SURFACE = 3.78565
HYDRO_GRAD_T = -1.2
HYDRO_G = 1.0


def build_hydrostatic_profile(case, resolution=None, ng=1):
    """Column in discrete hydrostatic balance: linear T, bottom cell at the
    surface values, and p solved cell by cell from
    p_{j+1} - p_j = -(rho_j + rho_{j+1})/2 * (phi_{j+1} - phi_j)
    with rho = p/((gamma-1) cv T), so the balance holds to round-off."""
    nx, ny = _resolve_resolution(case, resolution)
    grid = _make_grid(case, nx, ny, ng)
    gas = case.gas
    gm1cv = (gas.gamma - 1.0) * gas.cv
    g = case.params.get("g", HYDRO_G)
    grad_t = case.params.get("grad_t", HYDRO_GRAD_T)
    t_surface = case.params.get("t_surface", HYDRO_T_SURFACE)

    y = grid.y_centers()
    T = t_surface + grad_t * (y - y[0])
    if np.any(T <= 0.0):
        raise AdmissibilityError("temperature profile crosses zero inside the domain")
    p = np.empty(ny)
    p[0] = gm1cv * 1.0 * T[0]
    dphi = g * grid.dy
    for j in range(ny - 1):
        rho_j = p[j] / (gm1cv * T[j])
        p[j + 1] = (p[j] - 0.5 * dphi * rho_j) / (1.0 + 0.5 * dphi / (gm1cv * T[j + 1]))
        if p[j + 1] <= 0.0:
            raise AdmissibilityError("hydrostatic recurrence produced a non-positive pressure")
    rho = p / (gm1cv * T)

    zeros = np.zeros((ny, nx))
    grid.set_primitives(gas, rho[:, None] * np.ones(nx), zeros, zeros, p[:, None] * np.ones(nx))
    apply_boundaries(grid, case.bc, gas)
    return grid


def _rt_ic(g=0.1, amp=0.01):
    def ic(X, Y):
        rho = np.where(Y < 0.0, 1.0, 2.0)
        p = np.where(Y < 0.0, 1.0 - g * Y, 1.0 - 2.0 * g * Y)
        v = 0.25 * amp * (1.0 + np.cos(4.0 * np.pi * X)) * (1.0 + np.cos(3.0 * np.pi * Y))
        return rho, np.zeros_like(rho), v, p
    return ic


VORTEX_GRAVITY_RC = 0.5
VORTEX_GRAVITY_UR = 0.4 * np.pi


def vortex_gravity_potential(r):
    """Piecewise radial potential of the stationary-vortex-in-gravity case."""
    scalar = np.isscalar(r) or np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    rc = VORTEX_GRAVITY_RC
    s = rc / (rc - 0.4)
    out = np.full_like(r, np.log(2.0) - 0.5 * s + 1.25 * rc**2 / (rc - 0.4))
    m1 = r <= 0.2
    m2 = (r > 0.2) & (r <= 0.4)
    m3 = (r > 0.4) & (r <= rc)
    out[m1] = 12.5 * r[m1] ** 2
    with np.errstate(divide="ignore"):
        out[m2] = 0.5 - np.log(0.2) + np.log(r[m2])
    out[m3] = np.log(2.0) - 0.5 * s + 2.5 * s * r[m3] - 1.25 / (rc - 0.4) * r[m3] ** 2
    return out[0] if scalar else out


def vortex_gravity_p2(r, mach):
    """Centrifugal pressure correction p2(r) = integral of rho u_theta^2 / s.

    Closed form of the integral with the Gresho-type velocity profile scaled by
    1/(0.4 pi) and rho = exp(-Ma^2 Phi); written with expm1 so the low-Mach
    limit keeps full precision.
    """
    scalar = np.isscalar(r) or np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    m = mach**2
    ur2 = VORTEX_GRAVITY_UR**2
    # integral up to min(r, 0.2) through the solid-rotation core
    out = -np.expm1(-12.5 * m * np.minimum(r, 0.2) ** 2) / (m * ur2)
    mask = r > 0.2
    if np.any(mask):
        rr = np.minimum(r[mask], 0.4)
        c0 = np.exp((-0.5 + np.log(0.2)) * m)
        t1 = -(4.0 / m) * 0.2 ** (-m) * np.expm1(-m * np.log(rr / 0.2))
        t2 = -20.0 * (rr ** (1.0 - m) - 0.2 ** (1.0 - m)) / (1.0 - m)
        t3 = 25.0 * (rr ** (2.0 - m) - 0.2 ** (2.0 - m)) / (2.0 - m)
        out[mask] += c0 * (t1 + t2 + t3) / ur2
    return out[0] if scalar else out


def _vortex_gravity_ic(mach, xc=0.5, yc=0.5):
    def ic(X, Y):
        r = np.hypot(X - xc, Y - yc)
        rho = np.exp(-(mach**2) * vortex_gravity_potential(r))
        p = rho / mach**2 + vortex_gravity_p2(r, mach)
        inner, mid = r <= 0.2, (r > 0.2) & (r <= 0.4)
        u_theta = np.where(inner, 5.0 * r, np.where(mid, 2.0 - 5.0 * r, 0.0)) / VORTEX_GRAVITY_UR
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where(r > 0.0, -u_theta * (Y - yc) / r, 0.0)
            v = np.where(r > 0.0, u_theta * (X - xc) / r, 0.0)
        return rho, u, v, p
    return ic


def _uniform_ic(X, Y):
    rho = np.ones_like(X)
    return rho, 0.5 * rho, 0.25 * rho, rho


def get_case(name, mach=None):
    """Look up a case by name; mach overrides the default Mach parameter of the
    low-Mach cases."""
    if name not in _CASE_FACTORIES:
        raise KeyError(f"unknown case {name!r}; known: {', '.join(sorted(_CASE_FACTORIES))}")
    return _CASE_FACTORIES[name](mach)


def list_cases():
    return sorted(_CASE_FACTORIES)


def _make_sod(mach):
    return CaseSpec(
        name="sod", gas=GasParams(1.4), xlim=(0.0, 1.0), default_nx=100, t_end=0.2,
        ic=_sod_ic,
    )


def _make_einfeldt(mach):
    return CaseSpec(
        name="einfeldt", gas=GasParams(1.4), xlim=(0.0, 1.0), default_nx=100, t_end=0.1,
        ic=_einfeldt_ic,
    )


def _make_vortex(mach):
    gamma = 1.4
    return CaseSpec(
        name="isentropic_vortex", gas=GasParams(gamma), xlim=(0.0, 20.0), ylim=(0.0, 20.0),
        default_nx=64, t_end=20.0, ic=_vortex_ic(gamma),
        bc=BoundarySpec("periodic", "periodic", "periodic", "periodic"),
    )


def _make_gresho(mach):
    mach = 1e-1 if mach is None else mach
    return CaseSpec(
        name="gresho", gas=GasParams(1.4), xlim=(0.0, 1.0), ylim=(0.0, 1.0),
        default_nx=128, t_end=1e-2, ic=_gresho_ic(mach),
        bc=BoundarySpec("periodic", "periodic", "periodic", "periodic"),
        params={"mach": mach},
    )


def _make_riemann2d(mach):
    return CaseSpec(
        name="riemann_2d", gas=GasParams(1.4), xlim=(0.0, 1.0), ylim=(0.0, 1.0),
        default_nx=128, t_end=0.8, ic=_riemann2d_ic,
    )


def _make_hydrostatic(mach):
    return CaseSpec(
        name="hydrostatic", gas=GasParams(5.0 / 3.0, cv=1.0), xlim=(0.0, 2.0), ylim=(0.0, 1.0),
        default_nx=100, t_end=100.0,
        bc=BoundarySpec("periodic", "periodic", "wall", "wall"),
        phi=lambda X, Y: HYDRO_G * Y,
        params={"g": HYDRO_G, "grad_t": HYDRO_GRAD_T, "t_surface": HYDRO_T_SURFACE},
        builder=build_hydrostatic_profile,
    )


def _make_rt(mach):
    g = 0.1
    return CaseSpec(
        name="rayleigh_taylor", gas=GasParams(5.0 / 3.0, cv=1.0),
        xlim=(-0.25, 0.25), ylim=(-0.75, 0.75), default_nx=50, t_end=12.4,
        bc=BoundarySpec("periodic", "periodic", "wall", "wall"),
        phi=lambda X, Y: g * Y,
        ic=_rt_ic(g=g),
        params={"g": g},
    )


def _make_vortex_gravity(mach):
    mach = 1e-2 if mach is None else mach
    return CaseSpec(
        name="vortex_gravity", gas=GasParams(5.0 / 3.0, cv=1.0), xlim=(0.0, 1.0),
        ylim=(0.0, 1.0), default_nx=40, t_end=1.0,
        phi=lambda X, Y: vortex_gravity_potential(np.hypot(X - 0.5, Y - 0.5)),
        ic=_vortex_gravity_ic(mach),
        params={"mach": mach},
    )


def _make_uniform(mach):
    return CaseSpec(
        name="uniform", gas=GasParams(1.4), xlim=(0.0, 1.0), ylim=(0.0, 1.0),
        default_nx=16, t_end=0.1, ic=_uniform_ic,
        bc=BoundarySpec("periodic", "periodic", "periodic", "periodic"),
    )


_CASE_FACTORIES = {
    "sod": _make_sod,
    "einfeldt": _make_einfeldt,
    "isentropic_vortex": _make_vortex,
    "gresho": _make_gresho,
    "riemann_2d": _make_riemann2d,
    "hydrostatic": _make_hydrostatic,
    "rayleigh_taylor": _make_rt,
    "vortex_gravity": _make_vortex_gravity,
    "uniform": _make_uniform,
}


# -- run driver and diagnostics ----------------------------------------------


def kinetic_energy(grid):
    iy, ix = grid.interior
    rho = grid.U[RHO][iy, ix]
    ke = 0.5 * (grid.U[MX][iy, ix] ** 2 + grid.U[MY][iy, ix] ** 2) / rho
    return float(ke.sum() * grid.dx * grid.dy)


def max_velocity(grid):
    iy, ix = grid.interior
    rho = grid.U[RHO][iy, ix]
    speed2 = (grid.U[MX][iy, ix] ** 2 + grid.U[MY][iy, ix] ** 2) / rho**2
    return float(np.sqrt(speed2.max()))


def run_case(case, config, resolution=None, t_end=None, snapshot_times=(),
             diagnostics=False, on_step=None):
    """Advance a case to its end time; returns (grid, DiagnosticsReport, snapshots).

    dt is recomputed every step and capped so snapshot times and the end time
    are hit exactly. Snapshots are (time, Grid) copies. on_step, when given, is
    called as on_step(t, grid, report) after every step.
    """
    t_end = case.t_end if t_end is None else t_end
    grid = init_case(case, resolution, ng=config.n_ghost)
    gas = case.gas
    rho0 = grid.U[RHO][grid.interior].copy()
    ekin0 = kinetic_energy(grid)

    stops = sorted(set(float(s) for s in snapshot_times if 0.0 < s <= t_end))
    snapshots = []
    t, steps, warn_total = 0.0, 0, 0
    res_min = np.inf
    wall0 = time.perf_counter()
    eps = 1e-12 * t_end
    while t < t_end - eps:
        next_stop = stops[0] if stops else t_end
        new_grid, report, dt = advance(grid, gas, config, case.bc, dt_cap=next_stop - t)
        if diagnostics and config.scheme == "fslp" and config.order == 1:
            res = entropy_residual(grid, new_grid, gas, config, dt)
            res_min = min(res_min, float(res.min()))
        grid = new_grid
        t += dt
        steps += 1
        warn_total += report.subchar_warnings
        if stops and t >= stops[0] - eps:
            stops.pop(0)
            snapshots.append((t, grid.copy()))
        if on_step is not None:
            on_step(t, grid, report)

    iy, ix = grid.interior
    drho = np.abs(grid.U[RHO][iy, ix] - rho0)
    ekin = kinetic_energy(grid)
    report = DiagnosticsReport(
        l1_density=float(drho.sum() * grid.dx * grid.dy),
        linf_density=float(drho.max()),
        ekin_ratio=ekin / ekin0 if ekin0 > 0.0 else np.nan,
        max_abs_velocity=max_velocity(grid),
        entropy_residual_min=None if not diagnostics else res_min,
        step_count=steps,
        wall_time=time.perf_counter() - wall0,
        subchar_warnings=warn_total,
    )
    return grid, report, snapshots


def convergence_study(case, config, resolutions, t_end=None):
    """L1/Linf density errors against the initial condition per resolution plus
    the least-squares order of convergence."""
    if len(resolutions) < 2:
        raise ValueError("need at least two resolutions")
    l1, linf = [], []
    for n in resolutions:
        _, rep, _ = run_case(case, config, resolution=n, t_end=t_end)
        l1.append(rep.l1_density)
        linf.append(rep.linf_density)
    logn = np.log(np.asarray(resolutions, dtype=float))
    slope = 0.0
    if max(l1) > 0.0:
        slope = -np.polyfit(logn, np.log(np.maximum(l1, 1e-300)), 1)[0]
    return {
        "resolutions": list(resolutions),
        "l1": l1,
        "linf": linf,
        "slope": float(slope),
    }
