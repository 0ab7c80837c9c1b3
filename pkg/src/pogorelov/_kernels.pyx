# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels.

Arithmetic mirror of pogorelov._kernels_py: every expression replays the same
operation order as the numpy backend (and the build disables FP contraction),
so results are bit-identical. Inputs are 1-d contiguous float64 arrays; the
pogorelov.kernels front end handles shape normalization.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "compiled"


def profile_eval(double[::1] rho, double a, int k):
    cdef Py_ssize_t n = rho.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double r, u, v, u2, u3, v2, v3, s, q
    cdef double half_a = 0.5 * a
    if k < 0 or k > 3:
        raise ValueError(f"derivative order {k} not in 0..3")
    for i in range(n):
        r = rho[i]
        if half_a <= r < a:
            u = r - a
            v = r - 0.5 * a
            u2 = u * u
            u3 = u2 * u
            v2 = v * v
            v3 = v2 * v
            if k == 0:
                out[i] = r + (a * u3) * v3
            elif k == 1:
                s = 2.0 * r - 1.5 * a
                out[i] = 1.0 + (((3.0 * a) * u2) * v2) * s
            elif k == 2:
                q = (u2 + 3.0 * (u * v)) + v2
                out[i] = (((6.0 * a) * u) * v) * q
            else:
                s = ((v3 + (9.0 * u) * v2) + (9.0 * u2) * v) + u3
                out[i] = (6.0 * a) * s
        else:
            if k == 0:
                out[i] = r
            elif k == 1:
                out[i] = 1.0
            else:
                out[i] = 0.0
    return out_arr


def deviation_eval(double[::1] rho, double a):
    cdef Py_ssize_t n = rho.shape[0]
    d_arr = np.zeros(n, dtype=np.float64)
    d1_arr = np.zeros(n, dtype=np.float64)
    d2_arr = np.zeros(n, dtype=np.float64)
    d3_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] d = d_arr
    cdef double[::1] d1 = d1_arr
    cdef double[::1] d2 = d2_arr
    cdef double[::1] d3 = d3_arr
    cdef Py_ssize_t i
    cdef double r, u, v, u2, u3, v2, v3, s1, q2, s3
    cdef double half_a = 0.5 * a
    for i in range(n):
        r = rho[i]
        if half_a <= r < a:
            u = r - a
            v = r - 0.5 * a
            u2 = u * u
            u3 = u2 * u
            v2 = v * v
            v3 = v2 * v
            s1 = 2.0 * r - 1.5 * a
            q2 = (u2 + 3.0 * (u * v)) + v2
            s3 = ((v3 + (9.0 * u) * v2) + (9.0 * u2) * v) + u3
            d[i] = (a * u3) * v3
            d1[i] = (((3.0 * a) * u2) * v2) * s1
            d2[i] = (((6.0 * a) * u) * v) * q2
            d3[i] = (6.0 * a) * s3
    return d_arr, d1_arr, d2_arr, d3_arr


cdef inline void _scalars(double r, double a, double* res) nogil:
    """Coefficient chain (w-1, w', w'', m, m', m'') for a/2 <= r < a."""
    cdef double u, v, u2, u3, v2, v3, s1, q2
    cdef double d, d1, d2, N, N1, N2, r2, r3, r4, r5, r6
    u = r - a
    v = r - 0.5 * a
    u2 = u * u
    u3 = u2 * u
    v2 = v * v
    v3 = v2 * v
    s1 = 2.0 * r - 1.5 * a
    q2 = (u2 + 3.0 * (u * v)) + v2
    d = (a * u3) * v3
    d1 = (((3.0 * a) * u2) * v2) * s1
    d2 = (((6.0 * a) * u) * v) * q2
    N = d * d + (2.0 * r) * d
    N1 = (2.0 * (d * d1) + 2.0 * d) + 2.0 * (r * d1)
    N2 = ((2.0 * (d1 * d1) + 2.0 * (d * d2)) + 4.0 * d1) + 2.0 * (r * d2)
    r2 = r * r
    r3 = r2 * r
    r4 = r2 * r2
    r5 = r4 * r
    r6 = r4 * r2
    res[0] = N / r2
    res[1] = N1 / r2 - (2.0 * N) / r3
    res[2] = (N2 / r2 - (4.0 * N1) / r3) + (6.0 * N) / r4
    res[3] = -(N / r4)
    res[4] = -(N1 / r4) + (4.0 * N) / r5
    res[5] = (-(N2 / r4) + (8.0 * N1) / r5) - (20.0 * N) / r6


def metric_scalars(double[::1] rho, double a):
    cdef Py_ssize_t n = rho.shape[0]
    out_arr = np.zeros((6, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i
    cdef double r
    cdef double res[6]
    cdef double half_a = 0.5 * a
    for i in range(n):
        r = rho[i]
        if half_a <= r < a:
            _scalars(r, a, res)
            out[0, i] = res[0]
            out[1, i] = res[1]
            out[2, i] = res[2]
            out[3, i] = res[3]
            out[4, i] = res[4]
            out[5, i] = res[5]
    return (out_arr[0], out_arr[1], out_arr[2], out_arr[3], out_arr[4], out_arr[5])


def metric_tensors(double[::1] x, double[::1] y, double a):
    cdef Py_ssize_t n = x.shape[0]
    if y.shape[0] != n:
        raise ValueError("x and y must have equal length")
    H_arr = np.zeros((n, 3), dtype=np.float64)
    D1_arr = np.zeros((n, 6), dtype=np.float64)
    D2_arr = np.zeros((n, 9), dtype=np.float64)
    cdef double[:, ::1] H = H_arr
    cdef double[:, ::1] D1 = D1_arr
    cdef double[:, ::1] D2 = D2_arr
    cdef Py_ssize_t i
    cdef double xi, yi, rho, wm1, w1, w2, m, m1, m2
    cdef double ex, ey, xx, xy, yy, m1ex, m1ey
    cdef double exx, exy, eyy, Pxx, Pxy, Pyy, Wxx, Wxy, Wyy, Mxx, Mxy, Myy
    cdef double res[6]
    cdef double half_a = 0.5 * a
    for i in range(n):
        xi = x[i]
        yi = y[i]
        rho = sqrt(xi * xi + yi * yi)
        if not (half_a <= rho < a):
            continue
        _scalars(rho, a, res)
        wm1 = res[0]
        w1 = res[1]
        w2 = res[2]
        m = res[3]
        m1 = res[4]
        m2 = res[5]
        ex = xi / rho
        ey = yi / rho
        xx = xi * xi
        xy = xi * yi
        yy = yi * yi
        m1ex = m1 * ex
        m1ey = m1 * ey
        H[i, 0] = wm1 + m * xx
        H[i, 1] = m * xy
        H[i, 2] = wm1 + m * yy
        D1[i, 0] = (w1 * ex + m1ex * xx) + (2.0 * m) * xi
        D1[i, 1] = m1ex * xy + m * yi
        D1[i, 2] = w1 * ex + m1ex * yy
        D1[i, 3] = w1 * ey + m1ey * xx
        D1[i, 4] = m1ey * xy + m * xi
        D1[i, 5] = (w1 * ey + m1ey * yy) + (2.0 * m) * yi
        exx = ex * ex
        exy = ex * ey
        eyy = ey * ey
        Pxx = (1.0 - exx) / rho
        Pxy = -(exy / rho)
        Pyy = (1.0 - eyy) / rho
        Wxx = w2 * exx + w1 * Pxx
        Wxy = w2 * exy + w1 * Pxy
        Wyy = w2 * eyy + w1 * Pyy
        Mxx = m2 * exx + m1 * Pxx
        Mxy = m2 * exy + m1 * Pxy
        Myy = m2 * eyy + m1 * Pyy
        D2[i, 0] = ((Wxx + Mxx * xx) + (4.0 * m1ex) * xi) + 2.0 * m
        D2[i, 1] = Mxx * xy + (2.0 * m1ex) * yi
        D2[i, 2] = Wxx + Mxx * yy
        D2[i, 3] = (Wxy + Mxy * xx) + (2.0 * m1ey) * xi
        D2[i, 4] = ((Mxy * xy + m1ey * yi) + m1ex * xi) + m
        D2[i, 5] = (Wxy + Mxy * yy) + (2.0 * m1ex) * yi
        D2[i, 6] = Wyy + Myy * xx
        D2[i, 7] = Myy * xy + (2.0 * m1ey) * xi
        D2[i, 8] = ((Wyy + Myy * yy) + (4.0 * m1ey) * yi) + 2.0 * m
    return H_arr, D1_arr, D2_arr
