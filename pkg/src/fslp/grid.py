"""Structured 1D/2D grid with ghost layers, state conversions and boundary fills.

Cell data live in a single (4, ny+2*ng, nx+2*ng) float64 buffer per time level,
row-major over (y, x), ghosts inlined. Component order: rho, mom_x, mom_y, rhoE.
The gravitational potential phi is stored per cell (ghosts included) and is never
touched by the boundary fill: it always comes from the case's closed form.
"""

from dataclasses import dataclass

import numpy as np

from .eos import GasParams
from .errors import AdmissibilityError

RHO, MX, MY, EN = 0, 1, 2, 3

_BC_KINDS = ("periodic", "neumann", "wall")


@dataclass
class ConservativeState:
    """(rho, rho*u, rho*v, rho*E); fields may be floats or broadcastable arrays."""

    rho: object
    mom_x: object
    mom_y: object
    rhoE: object


@dataclass
class PrimitiveState:
    """(rho, u, v, p); fields may be floats or broadcastable arrays."""

    rho: object
    u: object
    v: object
    p: object


def cons_to_prim(U, gas):
    """Convert a ConservativeState to primitives, checking membership in the admissible set."""
    rho = np.asarray(U.rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise AdmissibilityError(_offender_message("rho", rho))
    u = U.mom_x / rho
    v = U.mom_y / rho
    rho_e = U.rhoE - 0.5 * (U.mom_x * u + U.mom_y * v)
    if np.any(~(np.asarray(rho_e) > 0.0)):
        raise AdmissibilityError(_offender_message("rho*e", np.asarray(rho_e, dtype=float)))
    return PrimitiveState(rho=U.rho, u=u, v=v, p=(gas.gamma - 1.0) * rho_e)


def prim_to_cons(V, gas):
    """Inverse of cons_to_prim."""
    rho = np.asarray(V.rho, dtype=float)
    p = np.asarray(V.p, dtype=float)
    if np.any(~(rho > 0.0)):
        raise AdmissibilityError(_offender_message("rho", rho))
    if np.any(~(p > 0.0)):
        raise AdmissibilityError(_offender_message("p", p))
    rhoE = p / (gas.gamma - 1.0) + 0.5 * V.rho * (V.u * V.u + V.v * V.v)
    return ConservativeState(rho=V.rho, mom_x=V.rho * V.u, mom_y=V.rho * V.v, rhoE=rhoE)


def _offender_message(name, values):
    arr = np.atleast_1d(values)
    bad = np.argwhere(~(arr > 0.0))
    where = ""
    if bad.size and arr.size > 1:
        where = f" at cell index {tuple(int(i) for i in bad[0])}"
    return f"non-positive {name}{where} (min {arr.min()})"


@dataclass(frozen=True)
class BoundarySpec:
    """Per-side boundary condition: periodic, neumann (transmissive) or wall."""

    left: str = "neumann"
    right: str = "neumann"
    bottom: str = "neumann"
    top: str = "neumann"

    def __post_init__(self):
        for side in (self.left, self.right, self.bottom, self.top):
            if side not in _BC_KINDS:
                raise ValueError(f"unknown boundary condition {side!r}")
        if (self.left == "periodic") != (self.right == "periodic"):
            raise ValueError("periodic sides must come in matched pairs (left/right)")
        if (self.bottom == "periodic") != (self.top == "periodic"):
            raise ValueError("periodic sides must come in matched pairs (bottom/top)")


class Grid:
    """Uniform structured mesh; ny = 1 gives a 1D grid (y-sweeps are skipped)."""

    def __init__(self, nx, ny=1, dx=1.0, dy=1.0, x0=0.0, y0=0.0, ng=1):
        if nx < 1 or ny < 1:
            raise ValueError("nx and ny must be at least 1")
        if dx <= 0.0 or dy <= 0.0:
            raise ValueError("dx and dy must be positive")
        if ng < 1:
            raise ValueError("need at least one ghost layer")
        self.nx, self.ny = int(nx), int(ny)
        self.dx, self.dy = float(dx), float(dy)
        self.x0, self.y0 = float(x0), float(y0)
        self.ng = int(ng)
        shape = (self.ny + 2 * ng, self.nx + 2 * ng)
        self.U = np.zeros((4,) + shape)
        self.phi = np.zeros(shape)

    # -- geometry -----------------------------------------------------------

    @property
    def is_1d(self):
        return self.ny == 1

    def x_centers(self, with_ghosts=False):
        ng = self.ng if with_ghosts else 0
        j = np.arange(-ng, self.nx + ng)
        return self.x0 + (j + 0.5) * self.dx

    def y_centers(self, with_ghosts=False):
        ng = self.ng if with_ghosts else 0
        j = np.arange(-ng, self.ny + ng)
        return self.y0 + (j + 0.5) * self.dy

    def center_mesh(self, with_ghosts=False):
        """(X, Y) cell-center coordinate arrays, shaped like one field component."""
        x = self.x_centers(with_ghosts)
        y = self.y_centers(with_ghosts)
        return np.meshgrid(x, y)

    @property
    def interior(self):
        ng = self.ng
        return np.s_[ng:ng + self.ny, ng:ng + self.nx]

    def interior_fields(self):
        """Views of the interior conservative fields (rho, mom_x, mom_y, rhoE)."""
        iy, ix = self.interior
        return self.U[RHO, iy, ix], self.U[MX, iy, ix], self.U[MY, iy, ix], self.U[EN, iy, ix]

    # -- state access -------------------------------------------------------

    def set_primitives(self, gas, rho, u, v, p, include_ghosts=False):
        sl = np.s_[:, :] if include_ghosts else self.interior
        U = prim_to_cons(PrimitiveState(rho, u, v, p), gas)
        self.U[RHO][sl] = U.rho
        self.U[MX][sl] = U.mom_x
        self.U[MY][sl] = U.mom_y
        self.U[EN][sl] = U.rhoE

    def primitives(self, gas, with_ghosts=True):
        """(rho, u, v, p) arrays; raises AdmissibilityError naming the first bad cell."""
        sl = np.s_[:, :] if with_ghosts else self.interior
        V = cons_to_prim(
            ConservativeState(self.U[RHO][sl], self.U[MX][sl], self.U[MY][sl], self.U[EN][sl]),
            gas,
        )
        return V.rho, V.u, V.v, V.p

    def set_phi(self, phi_fn):
        """Fill the potential at every cell center (ghosts included) from a closed form."""
        X, Y = self.center_mesh(with_ghosts=True)
        self.phi[:, :] = phi_fn(X, Y)
        if not np.all(np.isfinite(self.phi)):
            raise ValueError("potential must be finite everywhere")

    def copy(self):
        new = Grid(self.nx, self.ny, self.dx, self.dy, self.x0, self.y0, self.ng)
        new.U[...] = self.U
        new.phi[...] = self.phi
        return new

    def with_U(self, U):
        """Same geometry/potential, different field buffer (no copy of U)."""
        new = Grid.__new__(Grid)
        new.nx, new.ny, new.dx, new.dy = self.nx, self.ny, self.dx, self.dy
        new.x0, new.y0, new.ng = self.x0, self.y0, self.ng
        new.U = U
        new.phi = self.phi
        return new


@dataclass
class AdmissibilityReport:
    """Interior minima of rho and rho*e plus the offending cell list."""

    min_rho: float
    min_rho_e: float
    offenders: list

    @property
    def ok(self):
        return not self.offenders


def admissibility_scan(grid):
    """Exact interior minima; offenders are (iy, ix) zero-based interior indices."""
    iy, ix = grid.interior
    rho = grid.U[RHO, iy, ix]
    rho_e = grid.U[EN, iy, ix] - 0.5 * (
        grid.U[MX, iy, ix] ** 2 + grid.U[MY, iy, ix] ** 2
    ) / rho
    bad = ~((rho > 0.0) & (rho_e > 0.0))
    offenders = [tuple(idx) for idx in np.argwhere(bad)]
    return AdmissibilityReport(float(rho.min()), float(rho_e.min()), offenders)


def apply_boundaries(grid, spec, gas):
    """Fill every ghost layer in place and return the grid.

    periodic copies the opposite interior cells; neumann copies the nearest
    interior cell; wall mirrors the normal velocity and copies the tangential
    one, extrapolates the temperature profile linearly past the wall and then
    solves the ghost pressure from the discrete hydrostatic relation
    p_g - p_i = -(rho_g+rho_i)/2 * (phi_g - phi_i) with rho = p/((gamma-1)*cv*T),
    so a discretely balanced column stays balanced at the wall.
    """
    _fill_axis(grid, spec.left, spec.right, gas, axis=1)
    _fill_axis(grid, spec.bottom, spec.top, gas, axis=0)
    return grid


def _fill_axis(grid, lo_kind, hi_kind, gas, axis):
    # The x pass touches interior rows only; the y pass then covers the full x
    # extent, so corner ghosts are always derived from freshly filled columns.
    ng, U = grid.ng, grid.U
    n = grid.nx if axis == 1 else grid.ny
    tang = np.s_[ng:ng + grid.ny] if axis == 1 else np.s_[:]

    def sl(idx):
        return (slice(None), tang, idx) if axis == 1 else (slice(None), idx, tang)

    if lo_kind == "periodic":
        for k in range(ng):
            U[sl(k)] = U[sl(n + k)]
            U[sl(n + ng + k)] = U[sl(ng + k)]
        return
    for kind, ghost_of, mirror_of, step in (
        (lo_kind, lambda k: ng - k, lambda k: ng + k - 1, -1),
        (hi_kind, lambda k: n + ng + k - 1, lambda k: n + ng - k, +1),
    ):
        if kind == "neumann":
            edge = sl(ng) if step == -1 else sl(n + ng - 1)
            for k in range(1, ng + 1):
                U[sl(ghost_of(k))] = U[edge]
        elif kind == "wall":
            _fill_wall(grid, gas, axis, tang, ghost_of, mirror_of, step)


def _fill_wall(grid, gas, axis, tang, ghost_of, mirror_of, step):
    ng, U, phi = grid.ng, grid.U, grid.phi
    mn = MX if axis == 1 else MY  # normal momentum component
    mt = MY if axis == 1 else MX
    gm1cv = (gas.gamma - 1.0) * gas.cv

    def cell(idx):
        return (idx, tang) if axis == 0 else (tang, idx)

    def internal_energy(idx):
        rho = U[RHO][cell(idx)]
        return (
            U[EN][cell(idx)] - 0.5 * (U[MX][cell(idx)] ** 2 + U[MY][cell(idx)] ** 2) / rho
        ) / rho

    # first two interior cells define the linear temperature profile
    i1 = mirror_of(1)
    i2 = i1 - step  # one cell further into the interior
    T1 = internal_energy(i1) / gas.cv
    T2 = internal_energy(i2) / gas.cv
    dT = T1 - T2  # continue the interior gradient past the wall

    prev = i1
    for k in range(1, ng + 1):
        g = ghost_of(k)
        m = mirror_of(k)
        rho_prev = U[RHO][cell(prev)]
        p_prev = (gas.gamma - 1.0) * rho_prev * internal_energy(prev)
        T_g = T1 + k * dT
        if np.any(~(T_g > 0.0)):
            raise AdmissibilityError("wall extrapolation produced a non-positive temperature")
        dphi = phi[cell(g)] - phi[cell(prev)]
        p_g = (p_prev - 0.5 * dphi * rho_prev) / (1.0 + 0.5 * dphi / (gm1cv * T_g))
        if np.any(~(p_g > 0.0)):
            raise AdmissibilityError("wall fill produced a non-positive ghost pressure")
        rho_g = p_g / (gm1cv * T_g)
        rho_m = U[RHO][cell(m)]
        un = U[mn][cell(m)] / rho_m
        ut = U[mt][cell(m)] / rho_m
        U[RHO][cell(g)] = rho_g
        U[mn][cell(g)] = -un * rho_g
        U[mt][cell(g)] = ut * rho_g
        U[EN][cell(g)] = p_g / (gas.gamma - 1.0) + 0.5 * rho_g * (un * un + ut * ut)
        prev = g
