"""Magnetic Weyl quantization, its inverse, Moyal products, Wigner transforms and translations.

Operators are dense complex matrices acting on flattened wave samples; the
position quadrature weight is folded in, so ``(T u)[q] = sum_p T[q, p] u[p]``
approximates ``int K(x_q, y) u(y) dy``.

The discrete quantization is ``Op^A(f) = (2 pi)^-N sum_X dX (Ff)(X) op^A(X)``
over on-grid ``X`` with shifts represented in ``[-L, L)``.  Row ``q`` of
``op^A(y, eta)`` carries ``exp(-i (x_q + y/2).eta) exp(-i G^A([x_q, x_p]))`` at the
periodic image ``x_p`` of ``x_q + y``; the momentum sum then performs the
trigonometric interpolation of ``f`` at the midpoint ``x_q + y/2``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import kernels
from .magfield import FieldSpec, PotentialSpec, circulation, flux_triangle
from .phasespace import (OffGridError, PhaseGrid, PhasePoint, pair_bilinear, plane_wave,
                         symplectic_fourier, translate)


@lru_cache(maxsize=16)
def _tables(grid: PhaseGrid):
    n, N = grid.n, grid.N
    # T[q, s, m] = exp(-i (x_q + y_s / 2) p_m), y_s = xs[s]
    T = np.exp(-1j * (grid.xs[:, None, None] + 0.5 * grid.xs[None, :, None]) * grid.ps[None, None, :])
    k = np.arange(n)
    col1 = (k[:, None] + k[None, :] - n // 2) % n  # [q, s] -> column index per axis
    if N == 1:
        cols = col1
    else:
        cols = (col1[:, None, :, None] * n + col1[None, :, None, :]).reshape(n * n, n * n)
    return T, cols


@lru_cache(maxsize=16)
def nyquist_phase(grid: PhaseGrid) -> np.ndarray:
    """Unit factors ``c_X`` attached to ``op(X)`` in the quantization.

    On the periodic grid ``op(rep(-X)) = eps_X op(X)^*`` with ``eps_X = -1`` on
    parts of the Nyquist lines.  Weighting those elements by ``i`` makes the
    quantization a *-map: ``Op(conj f) = Op(f)^*`` holds exactly.
    """
    n, N = grid.n, grid.N
    k = np.arange(n) - n // 2
    wrap = (k == -(n // 2)).astype(int)
    neg = np.where(wrap == 1, -(n // 2), -k)
    # per axis: parity of a * m' + b * s' over (position offset j, momentum offset l)
    par1 = wrap[:, None] * neg[None, :] + wrap[None, :] * neg[:, None]
    par = np.zeros(grid.symbol_shape, dtype=int)
    for a in range(N):
        shape = [1] * (2 * N)
        shape[a] = n
        shape[N + a] = n
        par = par + par1.reshape(shape)
    return np.where(par % 2 == 1, 1j, 1.0 + 0j)


def _prefactor(grid: PhaseGrid) -> float:
    return grid.xi_weight / (2 * np.pi) ** grid.N


def phase_matrix(A: PotentialSpec, grid: PhaseGrid) -> np.ndarray:
    """``exp(-i G^A([x_q, x_p]))`` over all pairs of position nodes."""
    P = grid.positions
    return np.exp(-1j * circulation(A, P[:, None, :], P[None, :, :]))


def _shift_samples(F: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    T, _ = _tables(grid)
    if grid.N == 1:
        return np.einsum("ac,iac->ia", F, T)
    S = np.einsum("abcd,iac,jbd->ijab", F, T, T, optimize=True)
    return S.reshape(grid.size, grid.size)


def op_weyl(A: PotentialSpec, f, grid: PhaseGrid, phase: np.ndarray | None = None) -> np.ndarray:
    """Magnetic Weyl quantization of a symbol as a dense operator matrix."""
    f = grid.check_symbol(f)
    _, cols = _tables(grid)
    S = _shift_samples(symplectic_fourier(f, grid) * nyquist_phase(grid), grid) * _prefactor(grid)
    M = np.zeros((grid.size, grid.size), dtype=complex)
    np.put_along_axis(M, cols, S, axis=1)
    if phase is None:
        phase = phase_matrix(A, grid)
    return M * phase


def symbol_of(A: PotentialSpec, M, grid: PhaseGrid, phase: np.ndarray | None = None) -> np.ndarray:
    """Inverse of :func:`op_weyl`: the unique grid symbol quantizing to ``M``."""
    M = np.asarray(M)
    if M.shape != (grid.size, grid.size):
        raise ValueError(f"operator shape {M.shape} does not match grid size {grid.size}")
    T, cols = _tables(grid)
    if phase is None:
        phase = phase_matrix(A, grid)
    S = np.take_along_axis(M * phase.conj(), cols, axis=1) / _prefactor(grid)
    n, N = grid.n, grid.N
    if N == 1:
        F = np.einsum("ia,iac->ac", S, T.conj()) / n
    else:
        S = S.reshape(n, n, n, n)
        F = np.einsum("ijab,iac,jbd->abcd", S, T.conj(), T.conj(), optimize=True) / n**2
    return symplectic_fourier(F / nyquist_phase(grid), grid)


def identity(grid: PhaseGrid) -> np.ndarray:
    return np.eye(grid.size, dtype=complex)


def multiplication(values) -> np.ndarray:
    """Operator of multiplication by a function sampled on the position grid."""
    return np.diag(np.asarray(values).ravel())


def apply(M, u, grid: PhaseGrid) -> np.ndarray:
    return (np.asarray(M) @ grid.check_wave(u).ravel()).reshape(grid.wave_shape)


def inner(u, v, grid: PhaseGrid) -> complex:
    """Sesquilinear ``<u, v>``, antilinear in ``u``."""
    return complex(np.vdot(u, v) * grid.x_weight)


def wave_norm(u, grid: PhaseGrid) -> float:
    return float(np.sqrt(np.sum(np.abs(u) ** 2) * grid.x_weight))


def rank_one(u, v, grid: PhaseGrid) -> np.ndarray:
    """Matrix of ``w -> u <v, w>``."""
    return np.outer(np.ravel(u), np.conj(np.ravel(v))) * grid.x_weight


def hs_norm(M) -> float:
    """Hilbert-Schmidt norm; the position weights cancel between kernel and measure."""
    return float(np.linalg.norm(M))


def _trig_shift_matrix(grid: PhaseGrid, y: np.ndarray) -> np.ndarray:
    """Matrix of ``u -> u(. + y)`` by trigonometric interpolation."""
    W = grid.dft
    mats = [W.T @ (np.exp(1j * grid.ps * y[a])[:, None] * W.conj()) / grid.n for a in range(grid.N)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def weyl_system(A: PotentialSpec, Y: PhasePoint, grid: PhaseGrid, interpolate: bool = False,
                phase: np.ndarray | None = None) -> np.ndarray:
    """``[op^A(y, eta) u](x) = exp(-i (x + y/2).eta) exp(-i G^A([x, x+y])) u(x+y)``.

    On-grid shifts act by periodic index shifts, with the circulation taken to
    the periodic image of ``x + y``.
    """
    xq = grid.positions
    ph = np.exp(-1j * ((xq + 0.5 * Y.x) @ Y.xi))
    try:
        k = grid.x_index(Y.x)
    except OffGridError:
        if not interpolate:
            raise
        gam = np.exp(-1j * circulation(A, xq, xq + Y.x))
        return (ph * gam)[:, None] * _trig_shift_matrix(grid, Y.x)
    idx = np.indices(grid.wave_shape).reshape(grid.N, -1).T
    tgt = np.ravel_multi_index(tuple(((idx + k) % grid.n).T), grid.wave_shape)
    rows = np.arange(grid.size)
    if phase is None:
        gam = np.exp(-1j * circulation(A, xq, xq[tgt]))
    else:
        gam = phase[rows, tgt]
    M = np.zeros((grid.size, grid.size), dtype=complex)
    M[rows, tgt] = ph * gam
    return M


def interior_rows(grid: PhaseGrid, *shifts) -> np.ndarray:
    """Rows ``x_q`` whose successive translates by ``shifts`` stay inside the box."""
    x = grid.positions.copy()
    ok = np.ones(grid.size, dtype=bool)
    for y in shifts:
        x = x + np.asarray(y, dtype=float)
        ok &= np.all((x >= -grid.L - 1e-12) & (x < grid.L - 1e-12), axis=1)
    return np.nonzero(ok)[0]


def product_rule_residual(A: PotentialSpec, X: PhasePoint, Y: PhasePoint, grid: PhaseGrid,
                          phase: np.ndarray | None = None) -> float:
    """``max |op(X) op(Y) - Omega^B(X, Y; Q) op(X + Y)|`` over rows that do not wrap.

    On wrapped rows the identity fails by the flux through the identified edges.
    """
    from .magfield import cocycle_function
    lhs = weyl_system(A, X, grid, phase=phase) @ weyl_system(A, Y, grid, phase=phase)
    rhs = cocycle_function(A.field, X, Y, grid.positions)[:, None] * weyl_system(A, X + Y, grid, phase=phase)
    rows = interior_rows(grid, X.x, Y.x)
    return float(np.abs(lhs[rows] - rhs[rows]).max()) if len(rows) else 0.0


class Quantizer:
    """Caches the circulation phases of one potential on one grid."""

    def __init__(self, A: PotentialSpec, grid: PhaseGrid):
        self.A = A
        self.grid = grid
        self.phase = phase_matrix(A, grid)

    def op(self, f) -> np.ndarray:
        return op_weyl(self.A, f, self.grid, phase=self.phase)

    def symbol(self, M) -> np.ndarray:
        return symbol_of(self.A, M, self.grid, phase=self.phase)

    def weyl(self, Y: PhasePoint) -> np.ndarray:
        return weyl_system(self.A, Y, self.grid, phase=self.phase)

    def product(self, f, g) -> np.ndarray:
        return self.symbol(self.op(f) @ self.op(g))

    def wigner(self, u, v) -> np.ndarray:
        return self.symbol(rank_one(u, v, self.grid))


def moyal_kernel_route(f, g, A: PotentialSpec, grid: PhaseGrid) -> np.ndarray:
    """``f #^B g`` through ``Op^A(f) Op^A(g)``; depends on ``A`` only through ``B = dA``."""
    return Quantizer(A, grid).product(f, g)


def pairing_trace_constant(A: PotentialSpec, f, g, grid: PhaseGrid) -> float:
    """``<f, g> / Tr(Op(f) Op(g))``."""
    q = Quantizer(A, grid)
    return (pair_bilinear(f, g, grid) / np.trace(q.op(f) @ q.op(g))).real


def hs_ratio(A: PotentialSpec, f, grid: PhaseGrid) -> float:
    """``||Op(f)||_HS / ||f||_L2``."""
    return hs_norm(op_weyl(A, f, grid)) / float(np.sqrt(np.sum(np.abs(f) ** 2) * grid.xi_weight))


def wigner(A: PotentialSpec, u, v, grid: PhaseGrid) -> np.ndarray:
    """Magnetic Wigner transform: the symbol whose quantization is ``|u><v|``."""
    return symbol_of(A, rank_one(grid.check_wave(u), grid.check_wave(v), grid), grid)


def wigner_integral(A: PotentialSpec, u, v, points, ny: int = 200, ymax: float = 12.0) -> np.ndarray:
    """Direct quadrature of ``int dy e^{-i y.zeta} e^{i G^A([z+y/2, z-y/2])} u(z+y/2) conj v(z-y/2)``.

    ``u`` and ``v`` are callables on position arrays ``(..., N)``; ``points`` is ``(P, 2N)``.
    Independent of the grid machinery (used as an oracle).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    N = pts.shape[1] // 2
    t = np.linspace(-ymax, ymax, ny, endpoint=False)
    dy = t[1] - t[0]
    ys = np.stack(np.meshgrid(*([t] * N), indexing="ij"), axis=-1).reshape(-1, N)
    out = np.empty(len(pts), dtype=complex)
    for i, P in enumerate(pts):
        z, zeta = P[:N], P[N:]
        a = z + 0.5 * ys
        b = z - 0.5 * ys
        integrand = np.exp(-1j * ys @ zeta) * np.exp(1j * circulation(A, a, b)) * u(a) * np.conj(v(b))
        out[i] = integrand.sum() * dy**N
    return out


def mag_translate(Z: PhasePoint, f, q: Quantizer, interpolate: bool = False) -> np.ndarray:
    """``e_{-Z} # f # e_Z`` through the kernel route."""
    if interpolate:
        U = weyl_system(q.A, Z, q.grid, interpolate=True)
        V = weyl_system(q.A, -Z, q.grid, interpolate=True)
        return q.symbol(V @ q.op(f) @ U)
    return q.symbol(q.weyl(-Z) @ q.op(f) @ q.weyl(Z))


def mag_translate_pair(Y: PhasePoint, Z: PhasePoint, f, q: Quantizer) -> np.ndarray:
    """``e_{-Y} # f # e_{Y-Z}``; reduces to :func:`mag_translate` for ``Z = 0``."""
    return q.symbol(q.weyl(-Y) @ q.op(f) @ q.weyl(Y - Z))


def mixed_product(F, g, grid: PhaseGrid) -> np.ndarray:
    """``(F * g)(x, xi) = int d eta F(x, xi - eta) g(x, eta)``: circular convolution in momentum."""
    F = grid.check_symbol(F)
    g = grid.check_symbol(g)
    N = grid.N
    axes = tuple(range(N, 2 * N))
    Fr = np.roll(F, tuple([-(grid.n // 2)] * N), axis=axes)  # index k <-> momentum k dp (mod n)
    out = np.fft.ifftn(np.fft.fftn(Fr, axes=axes) * np.fft.fftn(g, axes=axes), axes=axes)
    return out * grid.p_weight


def momentum_delta(grid: PhaseGrid) -> np.ndarray:
    """Unit of the mixed product: unit mass at zero momentum for every position."""
    d = np.zeros(grid.symbol_shape, dtype=complex)
    d[(slice(None),) * grid.N + (grid.n // 2,) * grid.N] = 1.0 / grid.p_weight
    return d


def mag_translate_explicit(Z: PhasePoint, f, B: FieldSpec, grid: PhaseGrid,
                           interpolate: bool = False) -> np.ndarray:
    """Magnetic translation as ``Omega~[z] * (ordinary translation of f)``.

    With ``e_{-Z} # f # e_Z`` the ordinary translation involved is ``f(X - Z)``
    and the parallelogram phase enters as ``exp(+i G^B[P(x; y, z)])``.
    """
    from .magfield import omega_tilde
    return mixed_product(omega_tilde(B, Z.x, grid, sign=1), translate(-Z, f, grid, interpolate=interpolate), grid)


# ---------------------------------------------------------------------------
# direct quadrature of the integral composition law


def _interp_matrix(t, omega, t_new) -> np.ndarray:
    """Trigonometric interpolation from uniform periodic nodes ``t`` to ``t_new``."""
    return np.exp(1j * np.subtract.outer(t_new, t)[:, :, None] * omega[None, None, :]).sum(-1) / len(t)


def refine_symbol(f, grid: PhaseGrid, r: int):
    """Trigonometric upsampling of a symbol by ``r`` per axis over the same box.

    Returns ``(values, xs, ps)`` with steps ``dx / r`` and ``dp / r``.
    """
    m = r * grid.n
    xs = (np.arange(m) - m // 2) * grid.dx / r
    ps = (np.arange(m) - m // 2) * grid.dp / r
    Ux = _interp_matrix(grid.xs, grid.ps, xs)
    Up = _interp_matrix(grid.ps, grid.xs, ps)
    out = np.asarray(f, dtype=complex)
    for a in range(grid.N):
        out = np.moveaxis(np.tensordot(Ux, out, axes=([1], [a])), 0, a)
        out = np.moveaxis(np.tensordot(Up, out, axes=([1], [grid.N + a])), 0, grid.N + a)
    return out, xs, ps


def _supports(f, rel: float):
    a = np.abs(f)
    m = a.max()
    return np.nonzero(a > rel * m) if m > 0 else (np.array([], dtype=int),) * f.ndim


def moyal_direct(f, g, B: FieldSpec, grid: PhaseGrid, points=None, engine: str = "auto",
                 refine: int | None = None, cutoff: float = 1e-15) -> np.ndarray:
    """Riemann-sum evaluation of the magnetic composition integral.

    ``(f # g)(X) = pi^-2N int dY dZ exp(-2i sigma(X-Y, X-Z)) exp(-i G^B(<x-y+z, y-z+x, z-x+y>)) f(Y) g(Z)``

    The output is taken at grid indices ``points`` (shape ``(P, 2N)``, ``None``
    for the whole grid).  The oscillatory factor doubles every frequency, so
    the integrands are first upsampled by ``refine`` per axis (trigonometric
    interpolation; default 2 for the separable engine and 1 otherwise).
    Samples below ``cutoff`` times the maximum are skipped by the pair-sum
    engines.  Engines: ``separable`` (zero or constant fields, tensor
    contraction), ``brute`` (affine fields, compiled kernel when available),
    ``quadrature`` (any field, flux by numerical quadrature), ``auto``.
    """
    f = grid.check_symbol(f)
    g = grid.check_symbol(g)
    if points is None:
        points = np.indices(grid.symbol_shape).reshape(2 * grid.N, -1).T
    points = np.atleast_2d(np.asarray(points, dtype=int))
    N = grid.N
    Xs = np.concatenate([grid.xs[points[:, :N]], grid.ps[points[:, N:]]], axis=1)
    if engine == "auto":
        if B.kind in ("zero", "constant"):
            engine = "separable"
        elif B.is_affine:
            engine = "brute"
        else:
            engine = "quadrature"
    if refine is None:
        refine = 2 if engine == "separable" else 1
    if refine > 1:
        fr, xs, ps = refine_symbol(f, grid, refine)
        gr, _, _ = refine_symbol(g, grid, refine)
    else:
        fr, gr, xs, ps = f.astype(complex), g.astype(complex), grid.xs, grid.ps
    weight = (grid.dx * grid.dp / refine**2) ** N
    scale = weight**2 / np.pi ** (2 * N)
    if engine == "separable":
        if B.kind not in ("zero", "constant"):
            raise ValueError("the separable engine needs a zero or constant field")
        b = 0.0 if B.kind == "zero" else float(B.b)
        return np.array([_direct_separable(fr, gr, X, b, xs, ps, N) for X in Xs]) * scale
    coords = np.stack(np.meshgrid(*([xs] * N + [ps] * N), indexing="ij"), axis=-1)
    iy = _supports(fr, cutoff)
    iz = _supports(gr, cutoff)
    Yc, Zc, fy, gz = coords[iy], coords[iz], fr[iy], gr[iz]
    if engine == "brute":
        if not B.is_affine:
            raise ValueError("the brute engine needs a zero, constant or linear field")
        b0 = 0.0 if B.kind == "zero" else float(B.b)
        beta = np.asarray(B.beta, dtype=float) if B.kind == "linear" else np.zeros(2)
        return kernels.direct_moyal_affine(Xs, Yc, fy, Zc, gz, N, b0, beta) * scale
    if engine == "quadrature":
        return np.array([_direct_quadrature(X, Yc, fy, Zc, gz, B, N) for X in Xs]) * scale
    raise ValueError(f"unknown engine {engine!r}")


def _direct_separable(f, g, X, b, xs, ps, N) -> complex:
    x, xi = X[:N], X[N:]
    mesh = np.meshgrid(*([xs] * N + [ps] * N), indexing="ij", sparse=True)
    ys, etas = mesh[:N], mesh[N:]
    # phase = Y-only + Z-only + bilinear couplings (constant field b)
    lin_y = sum(2 * x[a] * etas[a] - 2 * ys[a] * xi[a] for a in range(N))
    lin_z = sum(2 * ys[a] * xi[a] - 2 * x[a] * etas[a] for a in range(N))  # z.xi - x.zeta on the Z mesh
    if N == 2:
        lin_y = lin_y + 2 * b * (ys[0] * x[1] - ys[1] * x[0])
        lin_z = lin_z - 2 * b * (ys[0] * x[1] - ys[1] * x[0])
    ft = f * np.exp(1j * lin_y)
    gt = g * np.exp(1j * lin_z)
    Czeta = np.exp(-2j * np.outer(xs, ps))  # [z_a, eta_a]
    Cyzeta = Czeta.conj()  # [y_a, zeta_a]
    if N == 1:
        return complex(np.einsum("ac,eg,ec,ag->", ft, gt, Czeta, Cyzeta, optimize=True))
    C1 = np.exp(-2j * b * np.outer(xs, xs))  # [y1, z2]
    return complex(np.einsum("abcd,efgh,ec,fd,ag,bh,af,be->", ft, gt, Czeta, Czeta, Cyzeta, Cyzeta,
                             C1, C1.conj(), optimize=True))


def _direct_quadrature(X, Yc, fy, Zc, gz, B: FieldSpec, N: int, chunk: int = 256) -> complex:
    x, xi = X[:N], X[N:]
    total = 0j
    for s in range(0, len(Yc), chunk):
        Y = Yc[s:s + chunk, None, :]
        Z = Zc[None, :, :]
        y, eta = Y[..., :N], Y[..., N:]
        z, zeta = Z[..., :N], Z[..., N:]
        sig = np.sum((x - z) * (xi - eta), -1) - np.sum((x - y) * (xi - zeta), -1)
        flux = flux_triangle(B, x - y + z, y - z + x, z - x + y)
        total += np.sum(np.exp(-2j * sig - 1j * flux) * fy[s:s + chunk, None] * gz[None, :])
    return total


def _twist_tables(grid: PhaseGrid):
    """Per-axis index map and phase of the discrete twisted convolution.

    ``Z[s, t]`` is the representative of ``W - Y`` (``t`` indexes ``W``) and
    ``wrap[s, t]`` the multiple of the period removed from ``Y + Z``.
    """
    n = grid.n
    k = np.arange(n) - n // 2
    zoff = (k[None, :] - k[:, None] + n // 2) % n - n // 2
    wrap = (k[:, None] + zoff - k[None, :]) // n
    return zoff + n // 2, wrap, k


def weyl_product_fourier(f, g, grid: PhaseGrid) -> np.ndarray:
    """Non-magnetic Weyl product as a twisted convolution of symplectic Fourier transforms.

    On the periodic grid ``op(Y) op(Z) = exp(i sigma(Y, Z) / 2) eps op(Y + Z)``
    where the sign ``eps`` collects the wraps of ``Y + Z`` back into the box.
    """
    c_X = nyquist_phase(grid)
    F = symplectic_fourier(grid.check_symbol(f), grid) * c_X
    G = symplectic_fourier(grid.check_symbol(g), grid) * c_X
    n = grid.n
    zi, wrap, k = _twist_tables(grid)
    yv, pv = k * grid.dx, k * grid.dp
    # one-axis kernel over Y = (s, m), W = (t, u)
    ph = 0.5 * (yv[zi][:, None, :, None] * pv[None, :, None, None]
                - yv[:, None, None, None] * pv[zi][None, :, None, :])
    par = wrap[:, None, :, None] * k[None, None, None, :] + wrap[None, :, None, :] * k[None, None, :, None]
    kern = np.exp(1j * ph) * (1 - 2 * (par % 2))
    c = _prefactor(grid)
    if grid.N == 1:
        Gz = G[zi[:, None, :, None], zi[None, :, None, :]]
        return symplectic_fourier(c * np.einsum("sm,smtu,smtu->tu", F, Gz, kern) / c_X, grid)
    out = np.zeros(grid.symbol_shape, dtype=complex)
    for s1 in range(n):
        for m1 in range(n):
            G1 = G[zi[s1]][:, :, zi[m1]]  # [t1, z2, u1, zeta2]
            out += np.einsum("ab,tabcdu,abcd,tu->tcud", F[s1, :, m1, :], _regather(G1, zi),
                             kern, kern[s1, m1])
    return symplectic_fourier(c * out / c_X, grid)


def _regather(G1, zi):
    # G1[t1, z2, u1, zeta2] -> [t1, s2, m2, t2, u2, u1] with z2 = zi[s2, t2], zeta2 = zi[m2, u2]
    A = G1[:, zi, :, :]  # [t1, s2, t2, u1, zeta2]
    A = A[..., zi]  # [t1, s2, t2, u1, m2, u2]
    return A.transpose(0, 1, 4, 2, 5, 3)
