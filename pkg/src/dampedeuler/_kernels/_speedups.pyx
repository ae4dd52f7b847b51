# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot per-node kernels; see pure.py for reference."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, pow, sqrt

from dampedeuler.errors import NonPositiveDensity

cnp.import_array()


cdef void _diff1_into(const double* f, double* d, Py_ssize_t n, double inv) noexcept nogil:
    cdef Py_ssize_t i
    d[0] = (-25.0 * (f[0] - f[1]) + 23.0 * (f[1] - f[2])
            - 13.0 * (f[2] - f[3]) + 3.0 * (f[3] - f[4])) * inv
    d[1] = (-3.0 * (f[0] - f[1]) - 13.0 * (f[1] - f[2])
            + 5.0 * (f[2] - f[3]) - (f[3] - f[4])) * inv
    for i in range(2, n - 2):
        d[i] = ((f[i - 2] - f[i + 2]) + 8.0 * (f[i + 1] - f[i - 1])) * inv
    d[n - 2] = (3.0 * (f[n - 1] - f[n - 2]) + 13.0 * (f[n - 2] - f[n - 3])
                - 5.0 * (f[n - 3] - f[n - 4]) + (f[n - 4] - f[n - 5])) * inv
    d[n - 1] = (25.0 * (f[n - 1] - f[n - 2]) - 23.0 * (f[n - 2] - f[n - 3])
                + 13.0 * (f[n - 3] - f[n - 4]) - 3.0 * (f[n - 4] - f[n - 5])) * inv


def diff1(f, double dx):
    cdef double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = fv.shape[0]
    if n < 5:
        raise ValueError("diff1 needs at least 5 nodes")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] d = out
    _diff1_into(&fv[0], &d[0], n, 1.0 / (12.0 * dx))
    return out


cdef void _diff1_ghost_into(const double* f, double* d, Py_ssize_t n, double inv) noexcept nogil:
    cdef Py_ssize_t i
    cdef double fm2, fm1, fp1, fp2
    for i in range(n):
        fm2 = f[i - 2] if i >= 2 else f[0]
        fm1 = f[i - 1] if i >= 1 else f[0]
        fp1 = f[i + 1] if i + 1 < n else f[n - 1]
        fp2 = f[i + 2] if i + 2 < n else f[n - 1]
        d[i] = ((fm2 - fp2) + 8.0 * (fp1 - fm1)) * inv


def diff1_ghost(f, double dx):
    cdef double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = fv.shape[0]
    if n < 3:
        raise ValueError("diff1_ghost needs at least 3 nodes")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] d = out
    _diff1_ghost_into(&fv[0], &d[0], n, 1.0 / (12.0 * dx))
    return out


def sym_rhs(v, u, double sigma, double half_a, double s_t, double dx, bint linearized=False):
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0]
    if n < 3:
        raise ValueError("diff1_ghost needs at least 3 nodes")
    vx_arr = np.empty(n, dtype=np.float64)
    ux_arr = np.empty(n, dtype=np.float64)
    dv_arr = np.empty(n, dtype=np.float64)
    du_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] vx = vx_arr
    cdef double[::1] ux = ux_arr
    cdef double[::1] dv = dv_arr
    cdef double[::1] du = du_arr
    cdef double inv = 1.0 / (12.0 * dx)
    cdef Py_ssize_t i
    with nogil:
        _diff1_ghost_into(&vv[0], &vx[0], n, inv)
        _diff1_ghost_into(&uv[0], &ux[0], n, inv)
        if linearized:
            for i in range(n):
                dv[i] = -sigma * ux[i]
                du[i] = -sigma * vx[i] - s_t * uv[i]
        else:
            for i in range(n):
                dv[i] = -sigma * ux[i] - (uv[i] * vx[i] + half_a * vv[i] * ux[i])
                du[i] = -sigma * vx[i] - s_t * uv[i] - (uv[i] * ux[i] + half_a * vv[i] * vx[i])
    return dv_arr, du_arr


def smooth_filter(f, double gamma):
    cdef double[::1] fv = np.ascontiguousarray(f, dtype=np.float64)
    cdef Py_ssize_t n = fv.shape[0]
    out = np.asarray(fv).copy()
    if n < 9 or gamma == 0.0:
        return out
    cdef double[::1] o = out
    cdef double c = gamma / 256.0
    cdef Py_ssize_t i
    with nogil:
        for i in range(4, n - 4):
            o[i] = fv[i] - c * (fv[i - 4] - 8.0 * fv[i - 3] + 28.0 * fv[i - 2]
                                - 56.0 * fv[i - 1] + 70.0 * fv[i]
                                - 56.0 * fv[i + 1] + 28.0 * fv[i + 2]
                                - 8.0 * fv[i + 3] + fv[i + 4])
    return out


def minmod(a, b):
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(n):
        if av[i] > 0.0 and bv[i] > 0.0:
            o[i] = av[i] if av[i] < bv[i] else bv[i]
        elif av[i] < 0.0 and bv[i] < 0.0:
            o[i] = av[i] if av[i] > bv[i] else bv[i]
    return out


cdef inline double _minmod1(double a, double b) noexcept nogil:
    if a > 0.0 and b > 0.0:
        return a if a < b else b
    if a < 0.0 and b < 0.0:
        return a if a > b else b
    return 0.0


cdef inline double _pressure1(double rho, double a_exp, double k1, double k_off) noexcept nogil:
    if a_exp == -1.0:
        return k1 * log(rho) + k_off
    return k1 / (a_exp + 1.0) * pow(rho, a_exp + 1.0) + k_off


def cons_rhs(rho, m, double a_exp, double k1, double k_off, double s_t, double dx,
             bint use_minmod=True):
    cdef double[::1] r = np.ascontiguousarray(rho, dtype=np.float64)
    cdef double[::1] q = np.ascontiguousarray(m, dtype=np.float64)
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t np2 = n + 2

    rp_arr = np.empty(np2, dtype=np.float64)
    mp_arr = np.empty(np2, dtype=np.float64)
    sr_arr = np.zeros(np2, dtype=np.float64)
    sm_arr = np.zeros(np2, dtype=np.float64)
    f1_arr = np.empty(n + 1, dtype=np.float64)
    f2_arr = np.empty(n + 1, dtype=np.float64)
    drho_arr = np.empty(n, dtype=np.float64)
    dm_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] rp = rp_arr
    cdef double[::1] mp = mp_arr
    cdef double[::1] sr = sr_arr
    cdef double[::1] sm = sm_arr
    cdef double[::1] f1 = f1_arr
    cdef double[::1] f2 = f2_arr
    cdef double[::1] drho = drho_arr
    cdef double[::1] dm = dm_arr

    cdef Py_ssize_t i, bad = -1
    cdef double rl, rr, ml, mr, ul, ur, cl, cr, pl, pr, a
    cdef double sq = sqrt(k1)

    with nogil:
        rp[0] = r[0]
        mp[0] = q[0]
        for i in range(n):
            rp[i + 1] = r[i]
            mp[i + 1] = q[i]
        rp[n + 1] = r[n - 1]
        mp[n + 1] = q[n - 1]
        if use_minmod:
            for i in range(1, np2 - 1):
                sr[i] = _minmod1(rp[i] - rp[i - 1], rp[i + 1] - rp[i])
                sm[i] = _minmod1(mp[i] - mp[i - 1], mp[i + 1] - mp[i])
        else:
            for i in range(1, np2 - 1):
                sr[i] = 0.5 * (rp[i + 1] - rp[i - 1])
                sm[i] = 0.5 * (mp[i + 1] - mp[i - 1])
        for i in range(n + 1):
            rl = rp[i] + 0.5 * sr[i]
            rr = rp[i + 1] - 0.5 * sr[i + 1]
            if rl <= 0.0 or rr <= 0.0:
                bad = i
                break
            ml = mp[i] + 0.5 * sm[i]
            mr = mp[i + 1] - 0.5 * sm[i + 1]
            ul = ml / rl
            ur = mr / rr
            cl = sq * pow(rl, 0.5 * a_exp)
            cr = sq * pow(rr, 0.5 * a_exp)
            pl = _pressure1(rl, a_exp, k1, k_off)
            pr = _pressure1(rr, a_exp, k1, k_off)
            a = fabs(ul) + cl
            if fabs(ur) + cr > a:
                a = fabs(ur) + cr
            f1[i] = 0.5 * (ml + mr) - 0.5 * a * (rr - rl)
            f2[i] = 0.5 * (ml * ul + pl + mr * ur + pr) - 0.5 * a * (mr - ml)
        if bad < 0:
            for i in range(n):
                drho[i] = -(f1[i + 1] - f1[i]) / dx
                dm[i] = -(f2[i + 1] - f2[i]) / dx - s_t * q[i]
    if bad >= 0:
        raise NonPositiveDensity(f"reconstructed density <= 0 near cell {bad}")
    return drho_arr, dm_arr
