"""Pure-numpy kernels; the reference the compiled core must reproduce.

Both kernels apply the exact rotation of each invariant pair
``{|g,n>, |e,n-1>}`` (n = 1..n_max) at its Rabi frequency
``Omega(n) = sqrt(detuning^2 + 4 coupling^2 n)``. The unpaired ends of the
truncated space, ``|g,0>`` and ``|e,n_max>``, only acquire the phases
``exp(+i detuning t/2)`` and ``exp(-i detuning t/2)``.
"""
from __future__ import annotations

import numpy as np


def _pair_coefficients(n_max, detuning, coupling, t):
    """Rotation coefficients for pairs n=1..n_max at times ``t`` (broadcast on axis 0).

    Returns ``(A, B)`` with ``A = cos(Omega t/2) + i detuning sin(Omega t/2)/Omega``
    and ``B = 2 coupling sqrt(n) sin(Omega t/2)/Omega``.
    """
    n = np.arange(1, n_max + 1, dtype=float)
    omega = np.sqrt(detuning * detuning + 4.0 * coupling * coupling * n)
    t = np.asarray(t, dtype=float)[..., None]
    half = 0.5 * t
    # sin(omega t/2)/omega written via sinc so omega = 0 needs no special case
    s = half * np.sinc(omega * half / np.pi)
    A = np.cos(omega * half) + 1j * detuning * s
    B = 2.0 * coupling * np.sqrt(n) * s
    return A, B


def evolve_pairs(c_g, c_e, detuning, coupling, t):
    """Evolve truncated amplitudes for time ``t``; returns new ``(c_g, c_e)``."""
    c_g = np.asarray(c_g, dtype=complex)
    c_e = np.asarray(c_e, dtype=complex)
    n_max = c_g.size - 1
    A, B = _pair_coefficients(n_max, detuning, coupling, t)
    A, B = A[0] if A.ndim > 1 else A, B[0] if B.ndim > 1 else B
    g_new = np.empty_like(c_g)
    e_new = np.empty_like(c_e)
    g_new[0] = c_g[0] * np.exp(0.5j * detuning * t)
    e_new[n_max] = c_e[n_max] * np.exp(-0.5j * detuning * t)
    g_new[1:] = c_g[1:] * A + c_e[:-1] * B
    e_new[:-1] = c_e[:-1] * np.conj(A) - c_g[1:] * B
    return g_new, e_new


def _evolve_product_grid(a, x, detuning, coupling, ts):
    """Amplitude grids ``(T, n_max+1)`` for the product state ``x (x) a``."""
    n_max = a.size - 1
    A, B = _pair_coefficients(n_max, detuning, coupling, ts)
    T = ts.size
    g = np.empty((T, n_max + 1), dtype=complex)
    e = np.empty((T, n_max + 1), dtype=complex)
    xg, xe = x[0], x[1]
    g[:, 0] = xg * a[0] * np.exp(0.5j * detuning * ts)
    e[:, n_max] = xe * a[n_max] * np.exp(-0.5j * detuning * ts)
    g[:, 1:] = xg * a[1:] * A + xe * a[:-1] * B
    e[:, :-1] = xe * a[:-1] * np.conj(A) - xg * a[1:] * B
    return g, e


def cross_reduced_grid(a, x, y, detuning, coupling, ts):
    """Field-traced cross operator for two product preparations on a time grid.

    ``R[t, p, q] = sum_n psi_x(t)[p, n] * conj(psi_y(t)[q, n])`` where
    ``psi_x(0) = x (x) a`` and ``p, q`` index ``(g, e)``. With ``x == y`` this is
    the reduced atomic density matrix of the evolved preparation.
    """
    a = np.ascontiguousarray(a, dtype=complex)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    ts = np.ascontiguousarray(ts, dtype=float)
    gx, ex = _evolve_product_grid(a, x, detuning, coupling, ts)
    if np.array_equal(x, y):
        gy, ey = gx, ex
    else:
        gy, ey = _evolve_product_grid(a, y, detuning, coupling, ts)
    out = np.empty((ts.size, 2, 2), dtype=complex)
    out[:, 0, 0] = np.einsum("tn,tn->t", gx, gy.conj())
    out[:, 0, 1] = np.einsum("tn,tn->t", gx, ey.conj())
    out[:, 1, 0] = np.einsum("tn,tn->t", ex, gy.conj())
    out[:, 1, 1] = np.einsum("tn,tn->t", ex, ey.conj())
    return out
