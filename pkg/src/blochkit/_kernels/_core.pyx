# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: scalar objective plus a per-start Nelder-Mead loop.

Mirrors the branch logic of the numpy fallback exactly; the only intended
difference is evaluation strategy (tight scalar loops here, lockstep batches
there).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef double _objective(Py_ssize_t n, const double complex* zr,
                       double complex lam, double complex z,
                       int f_kind, double barrier2) noexcept nogil:
    cdef double r2 = z.real * z.real + z.imag * z.imag
    if r2 >= barrier2:
        return -1.0
    cdef double complex prod = 1.0
    cdef double complex lsum = 0.0
    cdef double complex num, den, zj, zk, bp, term, w, u
    cdef double d2, aj2, min_d2 = 1e300
    cdef double fp, u2
    cdef Py_ssize_t j, k
    for j in range(n):
        zj = zr[j]
        num = z - zj
        den = 1.0 - zj.conjugate() * z
        prod = prod * (num / den)
        aj2 = zj.real * zj.real + zj.imag * zj.imag
        lsum = lsum + (1.0 - aj2) / (num * den)
        d2 = num.real * num.real + num.imag * num.imag
        if d2 < min_d2:
            min_d2 = d2
    if min_d2 > 1e-16:
        bp = prod * lsum
    else:
        bp = 0.0
        for j in range(n):
            zj = zr[j]
            den = 1.0 - zj.conjugate() * z
            aj2 = zj.real * zj.real + zj.imag * zj.imag
            term = (1.0 - aj2) / (den * den)
            for k in range(n):
                if k != j:
                    zk = zr[k]
                    term = term * ((z - zk) / (1.0 - zk.conjugate() * z))
            bp = bp + term
    if f_kind == 0:
        fp = 1.0
    elif f_kind == 1:
        w = lam * prod
        u = 1.0 - w
        u2 = u.real * u.real + u.imag * u.imag
        if u2 < 1e-250:
            u2 = 1e-250
        fp = 1.0 / u2
    else:
        w = lam * prod
        u = 1.0 + w
        fp = (u.real * u.real + u.imag * u.imag) ** 0.5
    return fp * abs(bp) * (1.0 - r2)


def pointwise_batch(zeros, lam, pts, f_kind, barrier_radius):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zarr = \
        np.ascontiguousarray(zeros, dtype=np.complex128)
    parr = np.asarray(pts, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] flat = \
        np.ascontiguousarray(parr.ravel(), dtype=np.complex128)
    cdef Py_ssize_t m = flat.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef double complex clam = lam
    cdef int kind = f_kind
    cdef double b2 = float(barrier_radius) * float(barrier_radius)
    cdef Py_ssize_t n = zarr.shape[0]
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = _objective(n, &zarr[0], clam, flat[i], kind, b2)
    return out.reshape(parr.shape)


cdef void _sort3(double complex* v, double* f) noexcept nogil:
    # descending by f
    cdef double complex tz
    cdef double tf
    if f[0] < f[1]:
        tf = f[0]; f[0] = f[1]; f[1] = tf
        tz = v[0]; v[0] = v[1]; v[1] = tz
    if f[1] < f[2]:
        tf = f[1]; f[1] = f[2]; f[2] = tf
        tz = v[1]; v[1] = v[2]; v[2] = tz
    if f[0] < f[1]:
        tf = f[0]; f[0] = f[1]; f[1] = tf
        tz = v[0]; v[0] = v[1]; v[1] = tz


cdef long _nm(Py_ssize_t n, const double complex* zr, double complex lam,
              int f_kind, double complex z0, double h, long max_iter,
              double ftol, double barrier2,
              double* best_f, double complex* best_z) noexcept nogil:
    cdef double complex v[3]
    cdef double f[3]
    cdef double complex c, xr, xe, xc
    cdef double fr, fe, fc
    cdef long it = 0
    cdef bint shrink

    v[0] = z0
    v[1] = z0 + h
    if v[1].real * v[1].real + v[1].imag * v[1].imag >= barrier2:
        v[1] = z0 - h
    v[2] = z0 + h * 1j
    if v[2].real * v[2].real + v[2].imag * v[2].imag >= barrier2:
        v[2] = z0 - h * 1j
    f[0] = _objective(n, zr, lam, v[0], f_kind, barrier2)
    f[1] = _objective(n, zr, lam, v[1], f_kind, barrier2)
    f[2] = _objective(n, zr, lam, v[2], f_kind, barrier2)

    while it < max_iter:
        _sort3(v, f)
        if f[0] - f[2] <= ftol:
            break
        it += 1
        c = 0.5 * (v[0] + v[1])
        xr = c + 1.0 * (c - v[2])
        fr = _objective(n, zr, lam, xr, f_kind, barrier2)
        shrink = False
        if fr > f[0]:
            xe = c + 2.0 * (xr - c)
            fe = _objective(n, zr, lam, xe, f_kind, barrier2)
            if fe > fr:
                v[2] = xe; f[2] = fe
            else:
                v[2] = xr; f[2] = fr
        elif fr > f[1]:
            v[2] = xr; f[2] = fr
        else:
            if fr > f[2]:
                xc = c + 0.5 * (xr - c)
                fc = _objective(n, zr, lam, xc, f_kind, barrier2)
                if fc >= fr:
                    v[2] = xc; f[2] = fc
                else:
                    shrink = True
            else:
                xc = c + 0.5 * (v[2] - c)
                fc = _objective(n, zr, lam, xc, f_kind, barrier2)
                if fc > f[2]:
                    v[2] = xc; f[2] = fc
                else:
                    shrink = True
        if shrink:
            v[1] = v[0] + 0.5 * (v[1] - v[0])
            v[2] = v[0] + 0.5 * (v[2] - v[0])
            f[1] = _objective(n, zr, lam, v[1], f_kind, barrier2)
            f[2] = _objective(n, zr, lam, v[2], f_kind, barrier2)

    _sort3(v, f)
    best_f[0] = f[0]
    best_z[0] = v[0]
    return it


def refine_starts(zeros, lam, starts, scales, f_kind, max_iter, ftol, barrier_radius):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zarr = \
        np.ascontiguousarray(zeros, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] sarr = \
        np.ascontiguousarray(np.asarray(starts).ravel(), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] harr = \
        np.ascontiguousarray(np.asarray(scales, dtype=np.float64).ravel())
    cdef Py_ssize_t k = sarr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals = np.empty(k, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pts = np.empty(k, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] iters = np.empty(k, dtype=np.int64)
    cdef double complex clam = lam
    cdef int kind = f_kind
    cdef long cap = max_iter
    cdef double tol = ftol
    cdef double b2 = float(barrier_radius) * float(barrier_radius)
    cdef Py_ssize_t n = zarr.shape[0]
    cdef Py_ssize_t i
    cdef double bf
    cdef double complex bz
    for i in range(k):
        iters[i] = _nm(n, &zarr[0], clam, kind, sarr[i], harr[i], cap, tol, b2,
                       &bf, &bz)
        vals[i] = bf
        pts[i] = bz
    return vals, pts, iters
