# cython: language_level=3
"""Compiled versions of the pair-rotation kernels in ``_kernels_py``.

Same signatures and results; the grid kernel fuses evolution and the field
trace so no (T, n_max) intermediates are allocated.
"""
import numpy as np

from libc.math cimport cos, sin, sqrt, fabs

cdef inline double complex conj(double complex z) noexcept nogil:
    return z.conjugate()


cdef inline void _pair(double detuning, double coupling, double sqrt_n, double t,
                       double complex *A, double *B) noexcept nogil:
    cdef double omega = sqrt(detuning * detuning + 4.0 * coupling * coupling * sqrt_n * sqrt_n)
    cdef double half = 0.5 * t
    cdef double s
    if fabs(omega * half) < 1e-8:
        s = half
    else:
        s = sin(omega * half) / omega
    A[0] = cos(omega * half) + 1j * detuning * s
    B[0] = 2.0 * coupling * sqrt_n * s


def evolve_pairs(c_g, c_e, double detuning, double coupling, double t):
    cdef const double complex[::1] g = np.ascontiguousarray(c_g, dtype=complex)
    cdef const double complex[::1] e = np.ascontiguousarray(c_e, dtype=complex)
    cdef Py_ssize_t n_max = g.shape[0] - 1
    g_out = np.empty(n_max + 1, dtype=complex)
    e_out = np.empty(n_max + 1, dtype=complex)
    cdef double complex[::1] go = g_out
    cdef double complex[::1] eo = e_out
    cdef Py_ssize_t n
    cdef double complex A
    cdef double B
    with nogil:
        go[0] = g[0] * (cos(0.5 * detuning * t) + 1j * sin(0.5 * detuning * t))
        eo[n_max] = e[n_max] * (cos(0.5 * detuning * t) - 1j * sin(0.5 * detuning * t))
        for n in range(1, n_max + 1):
            _pair(detuning, coupling, sqrt(<double>n), t, &A, &B)
            go[n] = g[n] * A + e[n - 1] * B
            eo[n - 1] = e[n - 1] * conj(A) - g[n] * B
    return g_out, e_out


def cross_reduced_grid(a, x, y, double detuning, double coupling, ts):
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=complex)
    cdef const double[::1] tv = np.ascontiguousarray(ts, dtype=float)
    cdef double complex xg = complex(x[0]), xe = complex(x[1])
    cdef double complex yg = complex(y[0]), ye = complex(y[1])
    cdef Py_ssize_t n_max = av.shape[0] - 1
    cdef Py_ssize_t T = tv.shape[0]
    out = np.empty((T, 2, 2), dtype=complex)
    scratch = np.empty((4, n_max + 1), dtype=complex)
    cdef double complex[:, :, ::1] o = out
    cdef double complex[:, ::1] w = scratch
    cdef double[::1] sqrt_n = np.sqrt(np.arange(n_max + 1, dtype=float))
    cdef Py_ssize_t k, n
    cdef double t, cp, sp
    cdef double complex A, sgg, sge, seg, see
    cdef double B
    with nogil:
        for k in range(T):
            t = tv[k]
            cp = cos(0.5 * detuning * t)
            sp = sin(0.5 * detuning * t)
            # rows: g_x, e_x, g_y, e_y
            w[0, 0] = xg * av[0] * (cp + 1j * sp)
            w[2, 0] = yg * av[0] * (cp + 1j * sp)
            w[1, n_max] = xe * av[n_max] * (cp - 1j * sp)
            w[3, n_max] = ye * av[n_max] * (cp - 1j * sp)
            for n in range(1, n_max + 1):
                _pair(detuning, coupling, sqrt_n[n], t, &A, &B)
                w[0, n] = xg * av[n] * A + xe * av[n - 1] * B
                w[1, n - 1] = xe * av[n - 1] * conj(A) - xg * av[n] * B
                w[2, n] = yg * av[n] * A + ye * av[n - 1] * B
                w[3, n - 1] = ye * av[n - 1] * conj(A) - yg * av[n] * B
            sgg = 0
            sge = 0
            seg = 0
            see = 0
            for n in range(n_max + 1):
                sgg = sgg + w[0, n] * conj(w[2, n])
                sge = sge + w[0, n] * conj(w[3, n])
                seg = seg + w[1, n] * conj(w[2, n])
                see = see + w[1, n] * conj(w[3, n])
            o[k, 0, 0] = sgg
            o[k, 0, 1] = sge
            o[k, 1, 0] = seg
            o[k, 1, 1] = see
    return out
