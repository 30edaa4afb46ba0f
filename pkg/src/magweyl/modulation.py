"""Magnetic modulation mapping, its adjoint and the crossed-product algebra on Xi x Xi.

Points of ``Xi`` are addressed by integer offsets ``(j_1..j_N, l_1..l_N)`` from
the grid centre, so ``X = (j dx, l dp)``.  Differences of grid points may leave
the box; every routine here evaluates the Weyl system at the actual shift,
not at its periodic representative.

The production route is the trace formula
``M_h f (X, Y) = kappa Tr(op(-X) Op(f) op(X - Y) Op(h))`` with
``kappa = (2 pi)^N`` the pairing-trace constant.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .calculus import Quantizer, _tables
from .magfield import PotentialSpec
from .phasespace import DoubleSymbol, PhaseGrid, PhasePoint, pair_bilinear, symplectic_fourier


def kappa(grid: PhaseGrid) -> float:
    """Pairing-trace constant ``<f, g> = kappa Tr(Op(f) Op(g))``."""
    return (2 * np.pi) ** grid.N


def offsets_to_points(offsets, grid: PhaseGrid) -> np.ndarray:
    off = np.asarray(offsets)
    N = grid.N
    return np.concatenate([off[..., :N] * grid.dx, off[..., N:] * grid.dp], axis=-1)


def point_offsets(grid: PhaseGrid, stride: int = 1) -> np.ndarray:
    """Offsets of a sub-lattice with ``stride`` steps per axis, shape ``(P, 2N)``."""
    k = np.arange(0, grid.n, stride) - grid.n // 2
    mesh = np.meshgrid(*([k] * (2 * grid.N)), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


class Modulation:
    """Operator-route evaluator for one potential on one grid."""

    def __init__(self, A: PotentialSpec, grid: PhaseGrid, kappa_value: float | None = None):
        self.A = A
        self.grid = grid
        self.q = Quantizer(A, grid)
        self.kappa = kappa(grid) if kappa_value is None else float(kappa_value)
        n, N = grid.n, grid.N
        self._cols = _tables(grid)[1]
        # E[q, m] = exp(-i x_q . p_m) over flattened positions and momenta
        self._E = np.exp(-1j * grid.positions @ grid.momenta.T)
        self._half = n // 2

    # -- Weyl systems at integer offsets (actual shifts, possibly outside the box)
    def weyl(self, off) -> np.ndarray:
        from .calculus import weyl_system
        X = offsets_to_points(off, self.grid)
        N = self.grid.N
        return weyl_system(self.A, PhasePoint(X[:N], X[N:]), self.grid, phase=self.q.phase)

    def trace_table(self, C: np.ndarray) -> np.ndarray:
        """``T[s, m] = sum_q Phi[q, t] C[t, q] exp(-i x_q . p_m)`` with ``t`` the column of shift ``s``.

        ``Tr(op(W) C) = T[rep(W)] exp(-i w . omega / 2)`` for any integer-offset ``W``.
        """
        P = self.q.phase * C.T
        g = np.take_along_axis(P, self._cols, axis=1)  # [q, s]
        return g.T @ self._E

    def lookup(self, T: np.ndarray, off) -> np.ndarray:
        """Evaluate ``Tr(op(W) C)`` from a trace table at offsets ``off`` (``(..., 2N)``)."""
        g = self.grid
        off = np.asarray(off)
        N, n = g.N, g.n
        rep = (off + self._half) % n
        s = np.ravel_multi_index(tuple(np.moveaxis(rep[..., :N], -1, 0)), g.wave_shape)
        m = np.ravel_multi_index(tuple(np.moveaxis(rep[..., N:], -1, 0)), g.wave_shape)
        w = off[..., :N] * g.dx
        om = off[..., N:] * g.dp
        return T[s, m] * np.exp(-0.5j * np.sum(w * om, axis=-1))

    def _ops(self, h, f):
        return self.q.op(h), self.q.op(f)

    def x_table(self, H: np.ndarray, F: np.ndarray, X) -> np.ndarray:
        """Trace table of ``C_X = Op(h) op(-X) Op(f)``; ``M(X, Y) = kappa lookup(X - Y)``."""
        Xm = self.weyl(-np.asarray(X))
        return self.trace_table(H @ Xm @ F)

    def evaluate(self, h, f, X_off, Y_off) -> np.ndarray:
        """``M_h f`` at paired offsets ``X_off[i], Y_off[i]``."""
        H, F = self._ops(h, f)
        X_off = np.atleast_2d(X_off)
        Y_off = np.atleast_2d(Y_off)
        out = np.empty(len(X_off), dtype=complex)
        for key in {tuple(x) for x in X_off}:
            sel = np.all(X_off == np.array(key), axis=1)
            T = self.x_table(H, F, key)
            out[sel] = self.lookup(T, np.array(key)[None, :] - Y_off[sel])
        return out * self.kappa

    def dense(self, h, f, stride: int = 2) -> DoubleSymbol:
        """``M_h f`` on the product of a stride sub-lattice with itself."""
        g = self.grid
        H, F = self._ops(h, f)
        offs = point_offsets(g, stride)
        vals = np.empty((len(offs), len(offs)), dtype=complex)
        for i, X in enumerate(offs):
            vals[i] = self.lookup(self.x_table(H, F, X), X[None, :] - offs)
        w = (stride**2 * g.dx * g.dp) ** g.N
        return DoubleSymbol(values=vals * self.kappa, points=offsets_to_points(offs, g), weight=w**2)

    def literal(self, h, f, X_off, Y_off) -> complex:
        """``<e_{-X} # f # e_{X-Y}, h>`` through symbols; the oracle for :meth:`evaluate`."""
        X_off, Y_off = np.asarray(X_off), np.asarray(Y_off)
        M = self.weyl(-X_off) @ self.q.op(f) @ self.weyl(X_off - Y_off)
        return pair_bilinear(self.q.symbol(M), h, self.grid)

    def weyl_sum(self, coeffs, offs) -> np.ndarray:
        """``sum_j c_j op(W_j)`` for integer offsets ``W_j`` (actual shifts)."""
        g = self.grid
        N, n = g.N, g.n
        offs = np.asarray(offs)
        rep = (offs + self._half) % n
        s = np.ravel_multi_index(tuple(rep[:, :N].T), g.wave_shape)
        m = np.ravel_multi_index(tuple(rep[:, N:].T), g.wave_shape)
        w = offs[:, :N] * g.dx
        om = offs[:, N:] * g.dp
        D = np.zeros((g.size, g.size), dtype=complex)
        np.add.at(D, (s, m), np.asarray(coeffs) * np.exp(-0.5j * np.sum(w * om, axis=1)))
        Rs = self._E @ D.T  # [q, s]
        return self._scatter(Rs)

    def _scatter(self, Rs: np.ndarray) -> np.ndarray:
        R = np.zeros((self.grid.size, self.grid.size), dtype=complex)
        np.put_along_axis(R, self._cols, Rs, axis=1)
        return R * self.q.phase

    def adjoint(self, h, G: DoubleSymbol, conjugate_window: bool = True) -> np.ndarray:
        """Hilbert-space adjoint ``(M_h)^* G = sum dX dY G(X, Y) e_X # conj(h) # e_{Y-X}``.

        ``conjugate_window=False`` uses ``h`` itself, the form written without the bar.
        """
        g = self.grid
        offs = np.rint(np.concatenate([G.points[:, :g.N] / g.dx, G.points[:, g.N:] / g.dp], axis=1)).astype(int)
        Hc = self.q.op(np.conj(h) if conjugate_window else h)
        T = np.zeros((g.size, g.size), dtype=complex)
        for i, X in enumerate(offs):
            R = self.weyl_sum(G.values[i], offs - X[None, :])
            T += self.weyl(X) @ (Hc @ R)
        return self.q.symbol(T * G.weight)

    def adjoint_of(self, k, h, f, x_stride: int = 2, conjugate_window: bool = True) -> np.ndarray:
        """``(M_k)^* (M_h f)`` streamed over ``X`` rows; ``Y`` runs over the full grid.

        Avoids storing the ``Xi x Xi`` table: each row ``M_h f(X, .)`` is built from
        one trace table and immediately folded back with the reverse sum.
        """
        g = self.grid
        H, F = self._ops(h, f)
        Kc = self.q.op(np.conj(k) if conjugate_window else k)
        ys = point_offsets(g, 1)
        T = np.zeros((g.size, g.size), dtype=complex)
        for X in point_offsets(g, x_stride):
            row = self.lookup(self.x_table(H, F, X), X[None, :] - ys) * self.kappa
            T += self.weyl(X) @ (Kc @ self.weyl_sum(row, ys - X[None, :]))
        wx = (x_stride**2 * g.dx * g.dp) ** g.N
        return self.q.symbol(T * wx * g.xi_weight)

    def diamond_point(self, h, f, k, g, X, Y) -> complex:
        """``(M_h f <> M_k g)(X, Y) = sum_Z dZ M_h f(X, Z) M_k g(X - Z, Y - Z)`` over the full grid."""
        gr = self.grid
        X, Y = np.asarray(X), np.asarray(Y)
        H, F = self._ops(h, f)
        K, G = self._ops(k, g)
        zs = point_offsets(gr, 1)
        left = self.lookup(self.x_table(H, F, X), X[None, :] - zs)
        # M_k g(X - Z, Y - Z) = kappa Tr(op(Z - X) Op(g) op(X - Y) K)
        right = self.lookup(self.trace_table(G @ self.weyl(X - Y) @ K), zs - X[None, :])
        return complex(np.sum(left * right) * gr.xi_weight * self.kappa**2)


def crossed_product(F: DoubleSymbol, G: DoubleSymbol, shape: Sequence[int]) -> DoubleSymbol:
    """``(F <> G)(X, Y) = int dZ F(X, Z) G(X - Z, Y - Z)`` on a periodic lattice of ``shape``.

    Dense inputs only; differences are taken modulo the lattice.
    """
    if not (F.is_dense and G.is_dense):
        raise ValueError("dense double symbols required; use Modulation.diamond_point for lazy ones")
    w = np.sqrt(F.weight)  # per-point cell weight
    vals = kernels.crossed_product_dense(F.values, G.values, tuple(shape)) * w
    return DoubleSymbol(values=vals, points=F.points, weight=F.weight)


def lattice_negation(shape: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    idx = np.indices(shape).reshape(len(shape), -1).T
    neg = np.ravel_multi_index(tuple((-idx % np.asarray(shape)).T), tuple(shape))
    return idx, neg


def crossed_involution(F: DoubleSymbol, shape: Sequence[int] | None = None) -> DoubleSymbol:
    """``F^*(X, Y) = conj F(X - Y, -Y)``; dense inputs live on a periodic lattice of ``shape``."""
    if F.is_dense:
        idx, neg = lattice_negation(shape)
        shp = np.asarray(shape)
        diff = (idx[:, None, :] - idx[None, :, :]) % shp
        D = np.ravel_multi_index(tuple(np.moveaxis(diff, -1, 0)), tuple(shape))
        vals = np.conj(F.values[D, neg[None, :]])
        return DoubleSymbol(values=vals, points=F.points, weight=F.weight)
    ev = F.evaluator
    return DoubleSymbol(evaluator=lambda X, Y: np.conj(ev(X - Y, -Y)), sample_pairs=list(F.sample_pairs))


# -- Lemma identities ---------------------------------------------------------

def lemma_cyclicity(q: Quantizer, f1, f2, f3) -> float:
    """Max spread of ``<f1 # f2, f3>``, ``<f1, f2 # f3>``, ``<f2, f3 # f1>`` relative to their size."""
    g = q.grid
    vals = np.array([pair_bilinear(q.product(f1, f2), f3, g),
                     pair_bilinear(f1, q.product(f2, f3), g),
                     pair_bilinear(f2, q.product(f3, f1), g)])
    return float(np.ptp(vals.real) + np.ptp(vals.imag)) / max(np.abs(vals).max(), 1e-300)


def lemma_plane_wave_resolution(f, g, grid: PhaseGrid) -> tuple[complex, complex]:
    """``sum dZ <f, e_Z><e_{-Z}, g>`` against ``(2 pi)^(2N) <f, g>``.

    ``<f, e_Z> = (2 pi)^N (F f)(-Z)`` turns the Z sum into a Fourier pairing.
    """
    N = grid.N
    Ff = symplectic_fourier(f, grid)
    Fg = symplectic_fourier(g, grid)
    neg = tuple(np.roll(np.flip(np.arange(grid.n)), 1) for _ in range(2 * N))
    Ffm = Ff[np.ix_(*neg)]  # (F f)(-Z) on the centred grid
    lhs = (2 * np.pi) ** (2 * N) * np.sum(Ffm * Fg) * grid.xi_weight
    return complex(lhs), complex((2 * np.pi) ** (2 * N) * pair_bilinear(f, g, grid))


def lemma_translation_integral(q: Quantizer, f, g) -> tuple[complex, complex]:
    """``sum dZ dY [Theta_Z f](Y) g(Y)`` against ``(int f)(int g)``, Z over the full grid."""
    grid = q.grid
    F = q.op(f)
    S = np.zeros_like(F)
    for Z in point_offsets(grid, 1):
        P = offsets_to_points(Z, grid)
        Zp = PhasePoint(P[:grid.N], P[grid.N:])
        S += q.weyl(-Zp) @ F @ q.weyl(Zp)
    lhs = pair_bilinear(q.symbol(S) * grid.xi_weight, g, grid)
    rhs = np.sum(f) * np.sum(g) * grid.xi_weight**2
    return complex(lhs), complex(rhs)


# -- tensor form ----------------------------------------------------------------

def j_embed(h, f, grid: PhaseGrid, stride: int = 2) -> DoubleSymbol:
    """``J_h f = f (x) h`` densely on a stride sub-lattice."""
    idx = point_offsets(grid, stride) + grid.n // 2
    fv = f[tuple(idx.T)]
    hv = h[tuple(idx.T)]
    w = (stride**2 * grid.dx * grid.dp) ** grid.N
    return DoubleSymbol(values=np.outer(fv, hv), points=offsets_to_points(idx - grid.n // 2, grid), weight=w**2)


def j_adjoint(h, F: DoubleSymbol, grid: PhaseGrid, stride: int = 2) -> np.ndarray:
    """``(J_h^* F)(X) = <F(X, .), conj h>`` on the stride sub-lattice (Hilbert adjoint)."""
    idx = point_offsets(grid, stride) + grid.n // 2
    hv = h[tuple(idx.T)]
    return F.values @ np.conj(hv) * np.sqrt(F.weight)


def box_product(a: tuple, b: tuple, q: Quantizer) -> tuple:
    """``(f (x) h) box (g (x) k) = (f # g) (x) (k # h)`` on simple tensors ``(f, h)``."""
    if not (isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b) == 2):
        raise ValueError("box_product expects simple tensors (f, h); decompose sums first")
    (f, h), (g, k) = a, b
    return q.product(f, g), q.product(k, h)


def modulation_tensor(terms, mod: Modulation) -> DoubleSymbol:
    """Lazy ``M(sum_j c_j f_j (x) h_j) = sum_j c_j M_{h_j} f_j`` at integer offsets."""
    grid = mod.grid

    def ev(X: PhasePoint, Y: PhasePoint) -> complex:
        xo = np.concatenate([grid.x_index(X.x), grid.p_index(X.xi)])
        yo = np.concatenate([grid.x_index(Y.x), grid.p_index(Y.xi)])
        return complex(sum(c * mod.evaluate(h, f, xo, yo)[0] for c, f, h in terms))
    return DoubleSymbol(evaluator=ev)


def remark_form(mod: Modulation, h, f, X_off) -> np.ndarray:
    """``[F(h # e_{-X} # f)](Y - X)`` over all grid ``Y`` for one ``X``.

    ``M_h f(X, Y) = (2 pi)^N`` times this; with the kernel sign of ``F`` used here the
    argument is ``Y - X``.  Out-of-box differences fold periodically, so compare in-box only.
    """
    g = mod.grid
    X_off = np.asarray(X_off)
    C = mod.q.op(h) @ mod.weyl(-X_off) @ mod.q.op(f)
    Fs = symplectic_fourier(mod.q.symbol(C), g)
    d = (point_offsets(g, 1) - X_off[None, :] + g.n // 2) % g.n
    return Fs[tuple(d.T)]
