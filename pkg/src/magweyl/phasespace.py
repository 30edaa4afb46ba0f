"""Discretized phase space: grids, pairings, plane waves and the symplectic Fourier transform.

Layout conventions used across the package:

* a wave function on the position grid is an array of shape ``(n,) * N``;
* a symbol on phase space is an array of shape ``(n,) * 2N`` whose first ``N``
  axes are position and last ``N`` axes are momentum;
* position nodes are ``x_k = (k - n/2) dx`` with ``dx = 2L/n`` and momentum
  nodes are ``p_m = (m - n/2) dp`` with ``dp = pi/L``, so ``n dx dp = 2 pi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np


class GridMismatchError(ValueError):
    pass


class OffGridError(ValueError):
    pass


class PhasePoint(NamedTuple):
    x: np.ndarray
    xi: np.ndarray

    @classmethod
    def of(cls, x, xi=None) -> "PhasePoint":
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xi = np.zeros_like(x) if xi is None else np.atleast_1d(np.asarray(xi, dtype=float))
        if x.shape != xi.shape or x.ndim != 1:
            raise ValueError(f"position {x.shape} and momentum {xi.shape} must be equal length vectors")
        return cls(x, xi)

    @property
    def dim(self) -> int:
        return len(self.x)

    def __add__(self, other):
        return PhasePoint(self.x + other.x, self.xi + other.xi)

    def __sub__(self, other):
        return PhasePoint(self.x - other.x, self.xi - other.xi)

    def __neg__(self):
        return PhasePoint(-self.x, -self.xi)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.x, self.xi])


def sigma(X: PhasePoint, Y: PhasePoint) -> float:
    """Symplectic form ``y.xi - x.eta``."""
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    return float(np.dot(Y.x, X.xi) - np.dot(X.x, Y.xi))


@dataclass(frozen=True)
class PhaseGrid:
    N: int
    n: int
    L: float

    def __post_init__(self):
        if self.N not in (1, 2):
            raise ValueError(f"only N in {{1, 2}} is supported, got {self.N}")
        if self.n < 2 or self.n % 2:
            raise ValueError(f"points per axis must be even, got {self.n}")
        if self.L <= 0:
            raise ValueError("half-extent L must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def dp(self) -> float:
        return np.pi / self.L

    @cached_property
    def xs(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dx

    @cached_property
    def ps(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dp

    @property
    def x_weight(self) -> float:
        return self.dx ** self.N

    @property
    def p_weight(self) -> float:
        return self.dp ** self.N

    @property
    def xi_weight(self) -> float:
        """Quadrature weight of one phase-space cell."""
        return (self.dx * self.dp) ** self.N

    @property
    def wave_shape(self) -> tuple:
        return (self.n,) * self.N

    @property
    def symbol_shape(self) -> tuple:
        return (self.n,) * (2 * self.N)

    @property
    def size(self) -> int:
        return self.n ** self.N

    @cached_property
    def positions(self) -> np.ndarray:
        """Position nodes as an array of shape ``(n**N, N)`` in C order."""
        mesh = np.meshgrid(*([self.xs] * self.N), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def momenta(self) -> np.ndarray:
        mesh = np.meshgrid(*([self.ps] * self.N), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def mesh(self):
        """Phase-space coordinate arrays ``(x_1..x_N, xi_1..xi_N)`` each of symbol shape."""
        return np.meshgrid(*([self.xs] * self.N + [self.ps] * self.N), indexing="ij")

    def wave_mesh(self):
        return np.meshgrid(*([self.xs] * self.N), indexing="ij")

    @cached_property
    def dft(self) -> np.ndarray:
        """``W[m, k] = exp(i p_m x_k)``; ``W @ W.conj().T == n * I`` exactly."""
        return np.exp(1j * np.outer(self.ps, self.xs))

    def check_symbol(self, f) -> np.ndarray:
        f = np.asarray(f)
        if f.shape != self.symbol_shape:
            raise GridMismatchError(f"symbol shape {f.shape} does not match grid {self.symbol_shape}")
        return f

    def check_wave(self, u) -> np.ndarray:
        u = np.asarray(u)
        if u.shape != self.wave_shape:
            raise GridMismatchError(f"wave shape {u.shape} does not match grid {self.wave_shape}")
        return u

    def x_index(self, x, tol: float = 1e-9) -> np.ndarray:
        """Integer step offsets of position vector ``x``; raises if off grid."""
        s = np.asarray(x, dtype=float) / self.dx
        k = np.rint(s)
        if np.any(np.abs(s - k) > tol):
            raise OffGridError(f"position {x} is not a multiple of dx={self.dx}")
        return k.astype(int)

    def p_index(self, xi, tol: float = 1e-9) -> np.ndarray:
        s = np.asarray(xi, dtype=float) / self.dp
        k = np.rint(s)
        if np.any(np.abs(s - k) > tol):
            raise OffGridError(f"momentum {xi} is not a multiple of dp={self.dp}")
        return k.astype(int)

    def point(self, index: Sequence[int]) -> PhasePoint:
        """Phase point at array index (position indices then momentum indices)."""
        index = np.asarray(index)
        return PhasePoint(self.xs[index[: self.N]], self.ps[index[self.N:]])

    def total_volume(self) -> float:
        return self.xi_weight * self.n ** (2 * self.N)

    def to_dict(self) -> dict:
        return {"N": self.N, "n": self.n, "L": self.L}


def plane_wave(X: PhasePoint, grid: PhaseGrid) -> np.ndarray:
    """Samples of ``Z -> exp(-i sigma(X, Z))`` on the phase-space grid."""
    axes = grid.mesh()
    phase = sum(axes[a] * X.xi[a] - X.x[a] * axes[grid.N + a] for a in range(grid.N))
    return np.exp(-1j * phase)


def plane_wave_at(X: PhasePoint, Z: PhasePoint) -> complex:
    return complex(np.exp(-1j * sigma(X, Z)))


def pair_bilinear(f, g, grid: PhaseGrid) -> complex:
    """Quadrature of ``int f g`` over phase space, without conjugation."""
    f = grid.check_symbol(f)
    g = grid.check_symbol(g)
    return complex(np.sum(f * g) * grid.xi_weight)


def pair_bilinear_double(F: "DoubleSymbol", G: "DoubleSymbol") -> complex:
    if F.weight is None or G.weight is None:
        raise ValueError("double pairing needs dense double symbols")
    if F.values.shape != G.values.shape or not np.isclose(F.weight, G.weight):
        raise GridMismatchError("double symbols live on different product grids")
    return complex(np.sum(F.values * G.values) * F.weight)


def l2_norm(f, grid: PhaseGrid) -> float:
    return float(np.sqrt(np.sum(np.abs(f) ** 2) * grid.xi_weight))


def _axis_transform(a: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, a, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def symplectic_fourier(f, grid: PhaseGrid) -> np.ndarray:
    """``(Ff)(x, xi) = (2 pi)^-N sum dY exp(i(y.xi - x.eta)) f(y, eta)``.

    Involutive and unitary on the grid; ``f = (2 pi)^-N sum dX (Ff)(X) e_X`` holds exactly.
    """
    f = grid.check_symbol(f)
    N = grid.N
    W = grid.dft
    out = f.astype(complex)
    for a in range(N):
        out = _axis_transform(out, W, a)  # y_a -> xi_a
        out = _axis_transform(out, W.conj().T, N + a)  # eta_a -> x_a
    # the transformed position axes now hold momentum labels and vice versa
    out = np.moveaxis(out, list(range(N)), list(range(N, 2 * N)))
    return out * (grid.xi_weight / (2 * np.pi) ** N)


def translate(Z: PhasePoint, f, grid: PhaseGrid, interpolate: bool = False) -> np.ndarray:
    """``f(X + Z)`` with periodic wraparound; on-grid shifts are exact rolls."""
    f = grid.check_symbol(f)
    try:
        kx = grid.x_index(Z.x)
        kp = grid.p_index(Z.xi)
    except OffGridError:
        if not interpolate:
            raise
        F = symplectic_fourier(f, grid)
        # f(Y+Z) = (2pi)^-N sum dX F(X) e_X(Y) e_X(Z)
        return symplectic_fourier(F * plane_wave(Z, grid).conj(), grid)
    return np.roll(f, tuple(-np.concatenate([kx, kp])), axis=tuple(range(2 * grid.N)))


def evaluate_symbol(f, grid: PhaseGrid, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation of a symbol at arbitrary phase points.

    ``points`` has shape ``(..., 2N)`` (positions then momenta).  Uses the
    Fourier reconstruction ``f(Y) = (2 pi)^-N sum dX (Ff)(X) exp(-i sigma(X, Y))``.
    """
    F = symplectic_fourier(f, grid)
    N = grid.N
    pts = np.asarray(points, dtype=float)
    lead = pts.shape[:-1]
    pts = pts.reshape(-1, 2 * N)
    # sigma(X, Y) = y.xi - x.eta ; X runs over the grid (x then xi axes)
    out = F.reshape(grid.symbol_shape)
    res = np.empty(len(pts), dtype=complex)
    for i, Y in enumerate(pts):
        y, eta = Y[:N], Y[N:]
        g = out
        # contract the momentum axes of F with exp(-i y.xi), position axes with exp(+i x.eta)
        for a in range(N):
            g = np.tensordot(np.exp(1j * grid.xs * eta[a]), g, axes=([0], [0]))
        for a in range(N):
            g = np.tensordot(np.exp(-1j * grid.ps * y[a]), g, axes=([0], [0]))
        res[i] = g
    return (res * grid.xi_weight / (2 * np.pi) ** N).reshape(lead)


@dataclass
class DoubleSymbol:
    """Function on phase space squared, dense on a product grid or lazily evaluable.

    Dense mode: ``values[i, j]`` at ``(points[i], points[j])`` with quadrature
    ``weight`` per pair.  Lazy mode: ``evaluator(X, Y)`` on ``PhasePoint`` pairs,
    optionally with a designated ``sample_pairs`` list.
    """

    values: Optional[np.ndarray] = None
    points: Optional[np.ndarray] = None
    weight: Optional[float] = None
    evaluator: Optional[Callable[[PhasePoint, PhasePoint], complex]] = None
    sample_pairs: list = field(default_factory=list)

    @property
    def is_dense(self) -> bool:
        return self.values is not None

    def __call__(self, X: PhasePoint, Y: PhasePoint) -> complex:
        if self.evaluator is not None:
            return self.evaluator(X, Y)
        i = self._locate(X.flat())
        j = self._locate(Y.flat())
        return complex(self.values[i, j])

    def _locate(self, p: np.ndarray) -> int:
        d = np.max(np.abs(self.points - p[None, :]), axis=1)
        i = int(np.argmin(d))
        if d[i] > 1e-9:
            raise OffGridError(f"point {p} is not a node of the dense double grid")
        return i

    def sampled(self) -> np.ndarray:
        return np.array([self(X, Y) for X, Y in self.sample_pairs])
