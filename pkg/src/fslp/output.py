"""Field output: csv (full double precision) and legacy VTK structured points."""

import numpy as np

from .errors import SolverError
from .grid import EN, MX, MY, RHO

CSV_HEADER = "x,y,rho,u,v,p,e,mach"


def _field_rows(grid, gas):
    iy, ix = grid.interior
    rho = grid.U[RHO][iy, ix]
    u = grid.U[MX][iy, ix] / rho
    v = grid.U[MY][iy, ix] / rho
    e = grid.U[EN][iy, ix] / rho - 0.5 * (u * u + v * v)
    p = (gas.gamma - 1.0) * rho * e
    c = np.sqrt(gas.gamma * p / rho)
    mach = np.sqrt(u * u + v * v) / c
    X, Y = grid.center_mesh()
    return [a.ravel() for a in (X, Y, rho, u, v, p, e, mach)]


def write_fields(grid, gas, fmt, path):
    """Write the interior cells row-major; fmt is 'csv' or 'vtk-legacy'."""
    try:
        if fmt == "csv":
            _write_csv(grid, gas, path)
        elif fmt == "vtk-legacy":
            _write_vtk(grid, gas, path)
        else:
            raise ValueError(f"unknown output format {fmt!r}")
    except OSError as exc:
        raise SolverError(f"failed to write {path}: {exc}") from exc
    return path


def _write_csv(grid, gas, path):
    cols = _field_rows(grid, gas)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in zip(*cols):
            fh.write(",".join("%.17g" % val for val in row) + "\n")


def _write_vtk(grid, gas, path):
    cols = _field_rows(grid, gas)
    names = ("rho", "u", "v", "p", "e", "mach")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write("fslp fields\n")
        fh.write("ASCII\n")
        fh.write("DATASET STRUCTURED_POINTS\n")
        fh.write(f"DIMENSIONS {grid.nx} {grid.ny} 1\n")
        fh.write(f"ORIGIN {grid.x0 + 0.5 * grid.dx:.17g} {grid.y0 + 0.5 * grid.dy:.17g} 0\n")
        fh.write(f"SPACING {grid.dx:.17g} {grid.dy:.17g} 1\n")
        fh.write(f"POINT_DATA {grid.nx * grid.ny}\n")
        for name, col in zip(names, cols[2:]):
            fh.write(f"SCALARS {name} double\nLOOKUP_TABLE default\n")
            fh.write("\n".join("%.17g" % v for v in col) + "\n")


def read_csv(path):
    """Read back a csv written by write_fields; returns a dict of 1D arrays."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}
