"""Magnetic coherent states, the Bargmann transform and the Schroedinger representation REP.

Bargmann functions are symbol-shaped arrays on the phase-space grid; they are
integrated against ``dX / (2 pi)^N``.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .calculus import inner, weyl_system
from .magfield import FieldSpec, PotentialSpec, circulation, flux_triangle, transversal_gauge
from .modulation import Modulation, point_offsets
from .phasespace import PhaseGrid, PhasePoint


def gaussian(N: int, center=None, momentum=None, width: float = 1.0) -> Callable:
    """``pi^(-N/4) w^(-N/2) exp(-(x - c)^2 / (2 w^2) + i p.x)`` as a callable on ``(..., N)`` arrays."""
    c = np.zeros(N) if center is None else np.asarray(center, dtype=float)
    p = np.zeros(N) if momentum is None else np.asarray(momentum, dtype=float)

    def v(x):
        x = np.asarray(x, dtype=float)
        d = x - c
        return (np.pi * width**2) ** (-N / 4) * np.exp(-np.sum(d * d, -1) / (2 * width**2) + 1j * (x @ p))
    return v


def sample_wave(v: Callable, grid: PhaseGrid) -> np.ndarray:
    return v(grid.positions).reshape(grid.wave_shape)


def bargmann_measure(grid: PhaseGrid) -> float:
    """Weight of one grid cell under ``dX / (2 pi)^N``."""
    return grid.xi_weight / (2 * np.pi) ** grid.N


class Bargmann:
    """Coherent states ``v^A(Y) = op(-Y) exp(i G^A([0, Q])) v`` for one fiducial vector."""

    def __init__(self, A: PotentialSpec, grid: PhaseGrid, v, normalize: bool = True):
        """``normalize`` rescales the sampled fiducial to unit grid norm; without it the
        exact continuum normalization is kept and Riemann-sum errors stay visible."""
        self.A = A
        self.grid = grid
        self.mod = Modulation(A, grid)
        vs = v if isinstance(v, np.ndarray) else sample_wave(v, grid)
        self.v = grid.check_wave(vs).astype(complex)
        if normalize:
            self.v = self.v / np.sqrt(np.sum(np.abs(self.v) ** 2) * grid.x_weight)
        origin = np.zeros_like(grid.positions)
        self.vA = (np.exp(1j * circulation(A, origin, grid.positions)) * self.v.ravel())
        self._offs = point_offsets(grid, 1)

    def coherent(self, Y: PhasePoint) -> np.ndarray:
        return (weyl_system(self.A, -Y, self.grid, phase=self.mod.q.phase) @ self.vA).reshape(self.grid.wave_shape)

    def coherent_explicit(self, Y: PhasePoint) -> np.ndarray:
        """``e^{i(x - y/2).eta} e^{-i G^A([x, x-y])} e^{i G^A([0, x-y])} v(x - y)`` on the periodic grid."""
        g = self.grid
        k = g.x_index(Y.x)
        x = g.positions
        idx = np.indices(g.wave_shape).reshape(g.N, -1).T
        src = np.ravel_multi_index(tuple(((idx - k) % g.n).T), g.wave_shape)
        xs = x[src]  # periodic image of x - y
        ph = np.exp(1j * ((x - 0.5 * Y.x) @ Y.xi))
        ph = ph * np.exp(-1j * circulation(self.A, x, xs)) * np.exp(1j * circulation(self.A, np.zeros_like(xs), xs))
        return (ph * self.v.ravel()[src]).reshape(g.wave_shape)

    def transform(self, u) -> np.ndarray:
        """``(U u)(X) = <v^A(X), u>`` on every grid point; symbol-shaped."""
        g = self.grid
        R = np.outer(g.check_wave(u).ravel(), self.vA.conj()) * g.x_weight
        vals = self.mod.lookup(self.mod.trace_table(R), self._offs)
        return vals.reshape(g.symbol_shape)

    def adjoint(self, Phi) -> np.ndarray:
        """``U^* Phi = int dX / (2 pi)^N Phi(X) v^A(X)``."""
        g = self.grid
        coeff = np.asarray(Phi).ravel() * bargmann_measure(g)
        S = self.mod.weyl_sum(coeff, -self._offs)
        return (S @ self.vA).reshape(g.wave_shape)

    def project(self, Phi) -> np.ndarray:
        return self.transform(self.adjoint(Phi))

    def kernel(self, X: PhasePoint, Y: PhasePoint) -> complex:
        """Reproducing kernel ``K(X, Y) = <v^A(X), v^A(Y)>``."""
        return inner(self.coherent(X), self.coherent(Y), self.grid)

    def reproduce(self, Phi, X_off) -> np.ndarray:
        """``int dY / (2 pi)^N K(X, Y) Phi(Y)`` at offsets ``X_off`` by direct quadrature."""
        g = self.grid
        out = []
        for X in np.atleast_2d(X_off):
            # K(X, .) = conj <v^A(.), v^A(X)> = conj of the transform of v^A(X)
            vX = self.coherent(PhasePoint(X[:g.N] * g.dx, X[g.N:] * g.dp))
            out.append(np.sum(np.conj(self.transform(vX)) * Phi) * bargmann_measure(g))
        return np.array(out)

    def expectation(self, f, Z: PhasePoint) -> complex:
        """Coherent-state functional ``<v^A(Z), Op(f) v^A(Z)>``."""
        vz = self.coherent(Z).ravel()
        return complex(np.vdot(vz, self.mod.q.op(f) @ vz) * self.grid.x_weight)

    def sandwich(self, f) -> np.ndarray:
        """Matrix of ``U Op(f) U^*`` acting on flattened Bargmann functions."""
        g = self.grid
        V = np.stack([self.coherent(g.point(o + g.n // 2)).ravel() for o in self._offs], axis=1)
        return (V.conj().T @ self.mod.q.op(f) @ V) * g.x_weight * bargmann_measure(g)


def window_quadrature(B: FieldSpec, v: Callable, grid: PhaseGrid, ny: int = 48, ymax: float = 9.0,
                      chunk: int = 512) -> np.ndarray:
    """Window ``h(B, v)(z, zeta) = int dy e^{-i y.zeta} e^{i G^B(<0, z+y/2, z-y/2>)} v(z+y/2) conj v(z-y/2)``.

    Evaluated on every grid point by a periodic-trapezoid ``y`` quadrature; only the
    field enters, so the result is gauge independent by construction.
    """
    N = grid.N
    t = np.linspace(-ymax, ymax, ny, endpoint=False)
    dy = t[1] - t[0]
    ys = np.stack(np.meshgrid(*([t] * N), indexing="ij"), axis=-1).reshape(-1, N)
    zs = grid.positions
    a = zs[:, None, :] + 0.5 * ys[None]
    b = zs[:, None, :] - 0.5 * ys[None]
    amp = v(a) * np.conj(v(b)) * np.exp(1j * flux_triangle(B, np.zeros(N), a, b))  # [z, y]
    out = np.empty((grid.size, grid.size), dtype=complex)
    for lo in range(0, grid.size, chunk):
        E = np.exp(-1j * ys @ grid.momenta[lo:lo + chunk].T)  # [y, zeta]
        out[:, lo:lo + chunk] = amp @ E
    return (out * dy**N).reshape(grid.symbol_shape)


def gaussian_window_constant(b: float, grid: PhaseGrid) -> np.ndarray:
    """Closed form of the window for the unit Gaussian in 2D and constant ``B_12 = b``."""
    z1, z2, k1, k2 = grid.mesh()
    return 4.0 * np.exp(-z1**2 - z2**2 - (k1 - 0.5 * b * z2) ** 2 - (k2 + 0.5 * b * z1) ** 2)


def rep_apply(F: np.ndarray, Phi, grid: PhaseGrid) -> np.ndarray:
    """``REP(F) Phi (X) = int dY / (2 pi)^N F(X, X - Y) Phi(Y)``.

    ``F[i, j]`` holds the value at ``(X_i, X_i - Y_j)`` with ``Y_j`` running over all grid
    offsets; ``X_i`` may be a subset, in which case a flat vector is returned.
    """
    out = np.asarray(F) @ np.asarray(Phi).ravel() * bargmann_measure(grid)
    return out.reshape(grid.symbol_shape) if out.size == grid.size**2 else out


def kohn_nirenberg(f_kn: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """Operator ``(2 pi)^-N int dxi e^{i(x - y).xi} f(x, xi)`` of a Kohn-Nirenberg symbol (B = 0)."""
    g = f_kn.reshape(grid.size, grid.size)  # [x, xi]
    E = np.exp(1j * grid.positions @ grid.momenta.T)
    return ((g * E) @ E.conj().T) * grid.p_weight * grid.x_weight / (2 * np.pi) ** grid.N


def intertwining_rows(bg: Bargmann, h, f, X_off) -> np.ndarray:
    """Rows ``F(X, X - Y)`` over all grid ``Y`` of the reflected, rescaled double symbol
    ``F(X, W) = (2 pi)^-N M_h f(-X, -W)`` so that ``REP(F) = U Op(f) U^*`` when ``Op(h)`` is
    the coherent projection."""
    mod = bg.mod
    H, Fm = mod._ops(h, f)
    rows = []
    for X in np.atleast_2d(X_off):
        T = mod.x_table(H, Fm, -X)
        rows.append(mod.lookup(T, -bg._offs))
    return np.array(rows)


def wigner_window(B: FieldSpec, v, grid: PhaseGrid, A: PotentialSpec | None = None,
                  normalize: bool = True) -> np.ndarray:
    """Grid window ``V^A_{v^A, v^A}``: the symbol whose quantization is ``|v^A><v^A|``.

    Gauge covariance of the quantization makes it depend on ``B`` only.
    """
    A = transversal_gauge(B) if A is None else A
    bg = Bargmann(A, grid, v, normalize=normalize)
    V = bg.vA.reshape(grid.wave_shape)
    return bg.mod.q.wigner(V, V)


def coherent_functional(Z: PhasePoint, f, B: FieldSpec, A: PotentialSpec | None = None,
                        grid: PhaseGrid | None = None, v=None, normalize: bool = True) -> complex:
    """``<v^A(Z), Op^A(f) v^A(Z)>``; ``v`` defaults to the standard Gaussian."""
    A = transversal_gauge(B) if A is None else A
    v = gaussian(grid.N) if v is None else v
    return Bargmann(A, grid, v, normalize=normalize).expectation(f, Z)


def theta_identity_residual(Z: PhasePoint, f, B: FieldSpec, grid: PhaseGrid, A: PotentialSpec | None = None,
                            v=None) -> float:
    """``|v(Z)(f) - v(0)(e_Z # f # e_{-Z})|``: the functional at ``Z`` is ``v(0)`` composed with
    the magnetic translation by ``-Z``."""
    from .calculus import mag_translate
    A = transversal_gauge(B) if A is None else A
    bg = Bargmann(A, grid, gaussian(grid.N) if v is None else v)
    origin = PhasePoint(np.zeros(grid.N), np.zeros(grid.N))
    g = mag_translate(-Z, f, bg.mod.q)
    return abs(bg.expectation(f, Z) - bg.expectation(g, origin))


def coherent_functional_integral(Z: PhasePoint, f_partial: Callable, B: FieldSpec, v: Callable,
                                 nx: int = 24, xmax: float = 6.0) -> complex:
    """Triple-flux form of the coherent functional by ``(x, y)`` quadrature.

    ``f_partial(m, d) = int dxi e^{i d.xi} f(m, xi)`` supplies the momentum integral,
    so only ``2N`` dimensions remain.  Point-list cross-check only.
    """
    N = B.N
    z, zeta = np.asarray(Z.x, float), np.asarray(Z.xi, float)
    t = np.linspace(-xmax, xmax, nx, endpoint=False) + 0.5 * (2 * xmax / nx)
    dt = 2 * xmax / nx
    pts = np.stack(np.meshgrid(*([t] * N), indexing="ij"), axis=-1).reshape(-1, N) + z
    x = pts[:, None, :]
    y = pts[None, :, :]
    o = np.zeros(N)
    flux = (flux_triangle(B, y, x, x - z) + flux_triangle(B, y, x - z, o)
            + flux_triangle(B, y, o, y - z))
    d = x - y
    integrand = (f_partial(0.5 * (x + y), d) * np.exp(-1j * np.sum(d * zeta, -1)) * np.exp(1j * flux)
                 * np.conj(v(x - z)) * v(y - z))
    return complex(integrand.sum() * dt ** (2 * N) / (2 * np.pi) ** N)
