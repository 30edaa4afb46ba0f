# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures and results."""
import numpy as np

cimport cython
from libc.math cimport cos, sin


def direct_moyal_affine(Xs, Yc, fy, Zc, gz, int N, double b0, beta, int chunk=128):
    cdef double[:, ::1] X = np.ascontiguousarray(Xs, dtype=np.float64)
    cdef double[:, ::1] Y = np.ascontiguousarray(Yc, dtype=np.float64)
    cdef double[:, ::1] Z = np.ascontiguousarray(Zc, dtype=np.float64)
    cdef double complex[::1] f = np.ascontiguousarray(fy, dtype=np.complex128)
    cdef double complex[::1] g = np.ascontiguousarray(gz, dtype=np.complex128)
    cdef double[::1] bt = np.zeros(2)
    if N == 2:
        bt = np.ascontiguousarray(beta, dtype=np.float64)
    cdef Py_ssize_t nx = X.shape[0], ny = Y.shape[0], nz = Z.shape[0]
    out = np.zeros(nx, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, j, k, a
    cdef double ph, cr, u0, u1, v0, v1, c0, c1, sr, si, ar, ai
    cdef double complex fj, w
    with nogil:
        for i in range(nx):
            sr = 0.0
            si = 0.0
            for j in range(ny):
                fj = f[j]
                if fj == 0:
                    continue
                for k in range(nz):
                    ph = 0.0
                    for a in range(N):
                        ph = ph - 2.0 * ((X[i, a] - Z[k, a]) * (X[i, N + a] - Y[j, N + a])
                                         - (X[i, a] - Y[j, a]) * (X[i, N + a] - Z[k, N + a]))
                    if N == 2:
                        u0 = Y[j, 0] - Z[k, 0]
                        u1 = Y[j, 1] - Z[k, 1]
                        v0 = Y[j, 0] - X[i, 0]
                        v1 = Y[j, 1] - X[i, 1]
                        cr = u0 * v1 - u1 * v0
                        c0 = (X[i, 0] + Y[j, 0] + Z[k, 0]) / 3.0
                        c1 = (X[i, 1] + Y[j, 1] + Z[k, 1]) / 3.0
                        ph = ph - 2.0 * cr * (b0 + c0 * bt[0] + c1 * bt[1])
                    w = fj * g[k]
                    ar = cos(ph)
                    ai = sin(ph)
                    sr = sr + ar * w.real - ai * w.imag
                    si = si + ar * w.imag + ai * w.real
            o[i] = sr + 1j * si
    return out


def crossed_product_dense(F, G, shape):
    shp = np.asarray(shape, dtype=np.int64)
    cdef Py_ssize_t P = int(np.prod(shp))
    idx = np.indices(tuple(shape)).reshape(len(shape), -1).T
    diff = (idx[:, None, :] - idx[None, :, :]) % shp
    cdef long[:, ::1] D = np.ascontiguousarray(
        np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), tuple(shape)), dtype=np.int_)
    cdef double complex[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.complex128)
    cdef double complex[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.complex128)
    out = np.zeros((P, P), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t x, y, z
    cdef double complex acc
    with nogil:
        for x in range(P):
            for y in range(P):
                acc = 0
                for z in range(P):
                    acc = acc + Fv[x, z] * Gv[D[x, z], D[y, z]]
                o[x, y] = acc
    return out
