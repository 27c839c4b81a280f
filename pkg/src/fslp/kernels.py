"""Hot interface sweeps, jitted with numba when it is available.

Each kernel mirrors the numpy fallback in schemes.py operation for operation,
so the two backends agree to the last bit; tests assert this. Set the
FSLP_NUM_WORKERS environment variable (>1) to let numba parallelize the sweeps
over rows; results are identical either way because every write is disjoint.
"""

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def configure_threads():
    if not HAVE_NUMBA:
        return 1
    workers = max(1, int(os.environ.get("FSLP_NUM_WORKERS", "1")))
    numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    return workers


if HAVE_NUMBA:
    _PARALLEL = max(1, int(os.environ.get("FSLP_NUM_WORKERS", "1"))) > 1

    @numba.njit(cache=True, parallel=_PARALLEL)
    def star_sweep(rho, un, p, phi, ng, axis, k_imp, gamma, theta_fixed, theta_value, ny, nx):
        """Acoustic star states for every interface normal to `axis`.

        Returns (a, u*, Pi*theta, m, a/rho, n_subchar_bad); un must be the
        velocity component normal to the interface.
        """
        if axis == 1:
            nj, ni = ny, nx + 1
        else:
            nj, ni = ny + 1, nx
        a = np.empty((nj, ni))
        us = np.empty((nj, ni))
        pit = np.empty((nj, ni))
        m = np.empty((nj, ni))
        aor = np.empty((nj, ni))
        nbad = 0
        for j in numba.prange(nj):
            for i in range(ni):
                if axis == 1:
                    jl, il, jr, ir = j + ng, i + ng - 1, j + ng, i + ng
                else:
                    jl, il, jr, ir = j + ng - 1, i + ng, j + ng, i + ng
                rl, rr = rho[jl, il], rho[jr, ir]
                pl, pr = p[jl, il], p[jr, ir]
                ul, ur = un[jl, il], un[jr, ir]
                rcl = np.sqrt(gamma * pl * rl)
                rcr = np.sqrt(gamma * pr * rr)
                aa = k_imp * max(rcl, rcr)
                if theta_fixed:
                    th = theta_value
                else:
                    th = min(1.0, max(abs(ul) * rl / rcl, abs(ur) * rr / rcr))
                mm = 0.5 * (rl + rr) * (phi[jr, ir] - phi[jl, il])
                uu = 0.5 * (ul + ur) - (pr - pl + mm) / (2.0 * aa)
                a[j, i] = aa
                us[j, i] = uu
                pit[j, i] = 0.5 * (pl + pr) - th * 0.5 * aa * (ur - ul)
                m[j, i] = mm
                aor[j, i] = aa * max(1.0 / rl, 1.0 / rr)
                if uu <= ul - aa / rl or uu >= ur + aa / rr:
                    nbad += 1
        return a, us, pit, m, aor, nbad

    @numba.njit(cache=True, parallel=_PARALLEL)
    def upwind_flux(U, us, pit, ng, axis, mn):
        """FSLP-type flux on every interface: u* times the upwinded conserved
        state, plus Pi*theta in the normal momentum and Pi*theta u* in energy."""
        nj, ni = us.shape
        F = np.empty((4, nj, ni))
        for j in numba.prange(nj):
            for i in range(ni):
                if axis == 1:
                    jl, il, jr, ir = j + ng, i + ng - 1, j + ng, i + ng
                else:
                    jl, il, jr, ir = j + ng - 1, i + ng, j + ng, i + ng
                uu = us[j, i]
                if uu > 0.0:
                    jj, ii = jl, il
                else:
                    jj, ii = jr, ir
                for c in range(4):
                    F[c, j, i] = uu * U[c, jj, ii]
                F[mn, j, i] += pit[j, i]
                F[3, j, i] += pit[j, i] * uu
        return F

    @numba.njit(cache=True, parallel=_PARALLEL)
    def lp_update(newU, U, us, pit, m, ng, axis, dt_over_d):
        """Accumulate one direction of the flux-splitting update into newU.

        Flux per interface: u* times the upwinded state of U plus the Pi*theta
        terms; the gravity source halves (m = rho-bar * dphi) are folded in with
        the 1/d already contained in dt_over_d. Evaluating the interface flux
        once per adjacent cell repeats a little arithmetic but keeps the whole
        update in one memory pass.
        """
        ny = newU.shape[1] - 2 * ng
        nx = newU.shape[2] - 2 * ng
        mn = 1 if axis == 1 else 2
        for j in numba.prange(ny):
            for i in range(nx):
                jj, ii = j + ng, i + ng
                if axis == 1:
                    lj, li, rj, ri = j, i, j, i + 1
                else:
                    lj, li, rj, ri = j, i, j + 1, i
                ul, ur = us[lj, li], us[rj, ri]
                # upwind cell indices for the two interfaces
                luj, lui = jj, ii
                ruj, rui = jj, ii
                if axis == 1:
                    if ul > 0.0:
                        lui = ii - 1
                    if ur <= 0.0:
                        rui = ii + 1
                else:
                    if ul > 0.0:
                        luj = jj - 1
                    if ur <= 0.0:
                        ruj = jj + 1
                for c in range(4):
                    fl = ul * U[c, luj, lui]
                    fr = ur * U[c, ruj, rui]
                    newU[c, jj, ii] -= dt_over_d * (fr - fl)
                newU[mn, jj, ii] -= dt_over_d * (pit[rj, ri] - pit[lj, li])
                newU[3, jj, ii] -= dt_over_d * (pit[rj, ri] * ur - pit[lj, li] * ul)
                newU[mn, jj, ii] -= 0.5 * dt_over_d * (m[rj, ri] + m[lj, li])
                newU[3, jj, ii] -= 0.5 * dt_over_d * (m[rj, ri] * ur + m[lj, li] * ul)
        return

    @numba.njit(cache=True, parallel=_PARALLEL)
    def oslp_acoustic(U, midU, usx, pitx, mx_, usy, pity, my_, ng, dt, dx, dy, two_d):
        """Acoustic (Lagrangian) update of the interior into midU; returns the
        smallest volume factor L so the caller can reject dt if L <= 0."""
        ny = U.shape[1] - 2 * ng
        nx = U.shape[2] - 2 * ng
        lmin = 1e300
        for j in numba.prange(ny):
            for i in range(nx):
                jj, ii = j + ng, i + ng
                lf = 1.0 + (dt / dx) * (usx[j, i + 1] - usx[j, i])
                mx_new = U[1, jj, ii] - (dt / dx) * (pitx[j, i + 1] - pitx[j, i]) - dt * (
                    0.5 * (mx_[j, i + 1] + mx_[j, i]) / dx
                )
                en_new = U[3, jj, ii] - (dt / dx) * (
                    pitx[j, i + 1] * usx[j, i + 1] - pitx[j, i] * usx[j, i]
                ) - dt * 0.5 * (usx[j, i + 1] * mx_[j, i + 1] + usx[j, i] * mx_[j, i]) / dx
                my_new = U[2, jj, ii]
                if two_d:
                    lf += (dt / dy) * (usy[j + 1, i] - usy[j, i])
                    my_new -= (dt / dy) * (pity[j + 1, i] - pity[j, i]) + dt * (
                        0.5 * (my_[j + 1, i] + my_[j, i]) / dy
                    )
                    en_new -= (dt / dy) * (
                        pity[j + 1, i] * usy[j + 1, i] - pity[j, i] * usy[j, i]
                    ) + dt * 0.5 * (usy[j + 1, i] * my_[j + 1, i] + usy[j, i] * my_[j, i]) / dy
                lmin = min(lmin, lf)
                midU[0, jj, ii] = U[0, jj, ii] / lf
                midU[1, jj, ii] = mx_new / lf
                midU[2, jj, ii] = my_new / lf
                midU[3, jj, ii] = en_new / lf
        return lmin

    @numba.njit(cache=True, parallel=_PARALLEL)
    def hllc_sweep(U, phi, rho_arr, ng, axis, gamma):
        """HLLC flux with Davis bounds on every interface normal to `axis`;
        also returns the contact speed and the gravity jump m."""
        if axis == 1:
            nj, ni = U.shape[1] - 2 * ng, U.shape[2] - 2 * ng + 1
            mn, mt = 1, 2
        else:
            nj, ni = U.shape[1] - 2 * ng + 1, U.shape[2] - 2 * ng
            mn, mt = 2, 1
        F = np.empty((4, nj, ni))
        s_star_out = np.empty((nj, ni))
        m_out = np.empty((nj, ni))
        for j in numba.prange(nj):
            for i in range(ni):
                if axis == 1:
                    jl, il, jr, ir = j + ng, i + ng - 1, j + ng, i + ng
                else:
                    jl, il, jr, ir = j + ng - 1, i + ng, j + ng, i + ng
                rl, rr = U[0, jl, il], U[0, jr, ir]
                ul, ur = U[mn, jl, il] / rl, U[mn, jr, ir] / rr
                wl, wr = U[mt, jl, il] / rl, U[mt, jr, ir] / rr
                El, Er = U[3, jl, il], U[3, jr, ir]
                pl = (gamma - 1.0) * (El - 0.5 * rl * (ul * ul + wl * wl))
                pr = (gamma - 1.0) * (Er - 0.5 * rr * (ur * ur + wr * wr))
                cl = np.sqrt(gamma * pl / rl)
                cr = np.sqrt(gamma * pr / rr)
                sl = min(ul - cl, ur - cr)
                sr = max(ul + cl, ur + cr)
                ss = (pr - pl + rl * ul * (sl - ul) - rr * ur * (sr - ur)) / (
                    rl * (sl - ul) - rr * (sr - ur)
                )
                if sl >= 0.0:
                    f0, fn, ft, fe = rl * ul, rl * ul * ul + pl, rl * ul * wl, ul * (El + pl)
                elif ss >= 0.0:
                    coef = rl * (sl - ul) / (sl - ss)
                    f0 = rl * ul + sl * (coef - rl)
                    fn = rl * ul * ul + pl + sl * (coef * ss - rl * ul)
                    ft = rl * ul * wl + sl * (coef * wl - rl * wl)
                    estar = coef * (El / rl + (ss - ul) * (ss + pl / (rl * (sl - ul))))
                    fe = ul * (El + pl) + sl * (estar - El)
                elif sr > 0.0:
                    coef = rr * (sr - ur) / (sr - ss)
                    f0 = rr * ur + sr * (coef - rr)
                    fn = rr * ur * ur + pr + sr * (coef * ss - rr * ur)
                    ft = rr * ur * wr + sr * (coef * wr - rr * wr)
                    estar = coef * (Er / rr + (ss - ur) * (ss + pr / (rr * (sr - ur))))
                    fe = ur * (Er + pr) + sr * (estar - Er)
                else:
                    f0, fn, ft, fe = rr * ur, rr * ur * ur + pr, rr * ur * wr, ur * (Er + pr)
                F[0, j, i] = f0
                F[mn, j, i] = fn
                F[mt, j, i] = ft
                F[3, j, i] = fe
                s_star_out[j, i] = ss
                m_out[j, i] = 0.5 * (rl + rr) * (phi[jr, ir] - phi[jl, il])
        return F, s_star_out, m_out
