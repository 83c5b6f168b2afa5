# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-point kernels; signatures match ``_pycore``."""

import numpy as np

from libc.math cimport fmax, hypot, sqrt


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double _sym_norm_sq(double complex a, double complex b, double complex c) noexcept nogil:
    # discriminant as a sum of squares; see _pycore._sym_norm_sq
    cdef double aa = _abs2(a), bb = _abs2(b), cc = _abs2(c)
    cdef double complex q = a.conjugate() * c + c.conjugate() * b
    cdef double root = sqrt((aa - bb) * (aa - bb) + 4.0 * _abs2(q))
    if root < 1e-140:  # squared terms may have underflowed; see _pycore.TINY_ROOT
        root = hypot(aa - bb, 2.0 * hypot(q.real, q.imag))
    return 0.5 * (aa + bb + 2.0 * cc + root)


cdef inline double complex _csqrt(double complex w) noexcept nogil:
    cdef double r = hypot(w.real, w.imag)
    cdef double re = sqrt(fmax(0.5 * (r + w.real), 0.0))
    cdef double im = sqrt(fmax(0.5 * (r - w.real), 0.0))
    if w.imag < 0.0:
        im = -im
    return re + 1j * im


cdef inline double complex _scaled_inv(double scale, double complex d) noexcept nogil:
    # scale / d without the overflow-guarded complex division (|d| is O(1) here)
    return scale * d.conjugate() / _abs2(d)


def opnorm_sq_rows(const double complex[:, ::1] p):
    cdef Py_ssize_t i, n = p.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _sym_norm_sq(p[i, 0], p[i, 1], p[i, 2])
    return out


def tetra_norm_sq_rows(const double complex[:, ::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _sym_norm_sq(x[i, 0], x[i, 1], _csqrt(x[i, 0] * x[i, 1] - x[i, 2]))
    return out


cdef inline double complex _rii_det(double complex t0, double complex t1, double complex t2,
                                    double complex s0, double complex s1, double complex s2) noexcept nogil:
    s0 = s0.conjugate()
    s1 = s1.conjugate()
    s2 = s2.conjugate()
    return 1.0 - (t0 * s0 + 2.0 * t2 * s2 + t1 * s1) + (t0 * t1 - t2 * t2) * (s0 * s1 - s2 * s2)


def rii_det_rows(const double complex[:, ::1] t, const double complex[:, ::1] s):
    cdef Py_ssize_t i, n = t.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _rii_det(t[i, 0], t[i, 1], t[i, 2], s[i, 0], s[i, 1], s[i, 2])
    return out


def rii_kernel_rows(const double complex[:, ::1] t, const double complex[:, ::1] s, double inv_vol):
    cdef Py_ssize_t i, n = t.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double complex d
    with nogil:
        for i in range(n):
            d = _rii_det(t[i, 0], t[i, 1], t[i, 2], s[i, 0], s[i, 1], s[i, 2])
            o[i] = _scaled_inv(inv_vol, d * d * d)
    return out


def tetra_num_den_rows(const double complex[:, ::1] x, const double complex[:, ::1] y):
    cdef Py_ssize_t i, n = x.shape[0]
    num = np.empty(n, dtype=np.complex128)
    den = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] nu = num
    cdef double complex[::1] de = den
    cdef double complex a, q, p, y0, y1, y2
    with nogil:
        for i in range(n):
            y0 = y[i, 0].conjugate()
            y1 = y[i, 1].conjugate()
            y2 = y[i, 2].conjugate()
            a = 1.0 - x[i, 0] * y0 - x[i, 1] * y1 + x[i, 2] * y2
            q = (x[i, 0] * x[i, 1] - x[i, 2]) * (y0 * y1 - y2)
            p = a * a - 4.0 * q
            nu[i] = 4.0 * a * a - p
            de[i] = p
    return num, den


def tetra_kernel_rows(const double complex[:, ::1] x, const double complex[:, ::1] y, double inv_vol):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double complex a, q, p, y0, y1, y2
    with nogil:
        for i in range(n):
            y0 = y[i, 0].conjugate()
            y1 = y[i, 1].conjugate()
            y2 = y[i, 2].conjugate()
            a = 1.0 - x[i, 0] * y0 - x[i, 1] * y1 + x[i, 2] * y2
            q = (x[i, 0] * x[i, 1] - x[i, 2]) * (y0 * y1 - y2)
            p = a * a - 4.0 * q
            o[i] = (4.0 * a * a - p) * _scaled_inv(inv_vol, p * p * p)
    return out
