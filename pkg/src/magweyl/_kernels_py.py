"""Pure-numpy reference implementations of the compiled kernels."""
import numpy as np


def direct_moyal_affine(Xs, Yc, fy, Zc, gz, N, b0, beta, chunk=128):
    """Unscaled double sum of the composition integral for ``B_12 = b0 + beta.x``.

    The triangle flux is ``2 cross(y-z, y-x) B_12((x+y+z)/3)``.
    """
    Xs = np.asarray(Xs, dtype=float)
    beta = np.asarray(beta, dtype=float)
    out = np.zeros(len(Xs), dtype=complex)
    for i, X in enumerate(Xs):
        x, xi = X[:N], X[N:]
        total = 0j
        for s in range(0, len(Yc), chunk):
            Y = Yc[s:s + chunk, None, :]
            Z = Zc[None, :, :]
            y, eta = Y[..., :N], Y[..., N:]
            z, zeta = Z[..., :N], Z[..., N:]
            phase = -2.0 * (np.sum((x - z) * (xi - eta), -1) - np.sum((x - y) * (xi - zeta), -1))
            if N == 2:
                u = y - z
                v = y - x
                cr = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
                c = (x + y + z) / 3.0
                phase = phase - 2.0 * cr * (b0 + c[..., 0] * beta[0] + c[..., 1] * beta[1])
            total += np.sum(np.exp(1j * phase) * fy[s:s + chunk, None] * gz[None, :])
        out[i] = total
    return out


def crossed_product_dense(F, G, shape):
    """``(F <> G)[X, Y] = sum_Z F[X, Z] G[X - Z, Y - Z]`` on a periodic lattice.

    ``F`` and ``G`` are ``(P, P)`` arrays over the flattened lattice of ``shape``;
    the result is unweighted (multiply by the cell weight outside).
    """
    P = int(np.prod(shape))
    idx = np.indices(shape).reshape(len(shape), -1).T
    shape_arr = np.asarray(shape)
    diff = (idx[:, None, :] - idx[None, :, :]) % shape_arr  # [A, B] -> A - B
    D = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), shape)
    out = np.zeros((P, P), dtype=complex)
    for X in range(P):
        # rows X - Z for every Z, columns Y - Z for every (Y, Z)
        Gsub = G[D[X][:, None], D.T]  # [Z, Y] -> G[X - Z, Y - Z]
        out[X] = F[X] @ Gsub
    return out
