"""Magnetic fields, vector potentials, fluxes, circulations and the magnetic 2-cocycle.

Orientation: a segment ``[x, y]`` is traversed from ``x`` to ``y`` and the
triangle ``<a, b, c>`` is parametrized as ``a + s(b-a) + t(c-a)``.  With these
choices Stokes reads ``G^A([a,b]) + G^A([b,c]) + G^A([c,a]) = G^B(<a,b,c>)``.
For N = 2 the only independent component is ``B_12 = -B_21``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .phasespace import PhaseGrid, PhasePoint, sigma

FIELD_KINDS = ("zero", "constant", "linear", "gaussian")
AFFINE_KINDS = ("zero", "constant", "linear")


def gauss_legendre01(order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (t + 1.0), 0.5 * w


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


@dataclass(frozen=True)
class FieldSpec:
    """Closed-form magnetic field; ``params`` depend on ``kind``.

    * ``zero``
    * ``constant``: ``b``
    * ``linear``: ``b``, ``beta`` with ``B_12(x) = b + beta . x``
    * ``gaussian``: ``b``, ``center``, ``width`` with ``B_12 = b exp(-|x-c|^2 / (2 w^2))``
    """

    N: int = 2
    kind: str = "zero"
    b: float = 0.0
    beta: tuple = (0.0, 0.0)
    center: tuple = (0.0, 0.0)
    width: float = 1.0
    quad_order: int = 0

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.N == 1 and self.kind != "zero":
            raise ValueError("a 2-form vanishes on a line: only the zero field exists for N = 1")
        if self.N not in (1, 2):
            raise ValueError("N must be 1 or 2")

    @property
    def order(self) -> int:
        if self.quad_order:
            return self.quad_order
        return 24 if self.kind == "gaussian" else 8

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero" or (self.kind == "constant" and self.b == 0.0)

    @property
    def is_affine(self) -> bool:
        return self.kind in AFFINE_KINDS

    def b12(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lead = x.shape[:-1]
        if self.kind == "zero":
            return np.zeros(lead)
        if self.kind == "constant":
            return np.full(lead, float(self.b))
        if self.kind == "linear":
            return self.b + x @ np.asarray(self.beta, dtype=float)
        d = x - np.asarray(self.center, dtype=float)
        return self.b * np.exp(-np.sum(d * d, axis=-1) / (2.0 * self.width**2))

    def component(self, j: int, k: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if j == k or self.N == 1:
            return np.zeros(x.shape[:-1])
        return self.b12(x) if (j, k) == (0, 1) else -self.b12(x)

    def to_dict(self) -> dict:
        d = {"N": self.N, "kind": self.kind}
        if self.kind != "zero":
            d["b"] = self.b
        if self.kind == "linear":
            d["beta"] = list(self.beta)
        if self.kind == "gaussian":
            d.update(center=list(self.center), width=self.width)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        d = dict(d)
        for key in ("beta", "center"):
            if key in d:
                d[key] = tuple(float(v) for v in d[key])
        return cls(**d)


def flux_triangle(B: FieldSpec, a, b, c) -> np.ndarray:
    """Flux of ``B`` through the oriented triangle ``<a, b, c>`` (vectorized over leading axes)."""
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    if B.N == 1 or B.kind == "zero":
        return np.zeros(np.broadcast_shapes(a.shape, b.shape, c.shape)[:-1])
    u, v = b - a, c - a
    area2 = _cross(u, v)
    if B.is_affine:
        return 0.5 * area2 * B.b12((a + b + c) / 3.0)
    # collapsed Gauss-Legendre on the unit simplex: s = r, t = (1 - r) q
    r, wr = gauss_legendre01(B.order)
    q, wq = gauss_legendre01(B.order)
    s = r[:, None]
    t = (1.0 - r)[:, None] * q[None, :]
    w = (wr * (1.0 - r))[:, None] * wq[None, :]
    pts = (a[..., None, None, :] + s[..., None] * u[..., None, None, :]
           + t[..., None] * v[..., None, None, :])
    return area2 * np.sum(B.b12(pts) * w, axis=(-2, -1))


def flux_parallelogram(B: FieldSpec, x, y, z) -> np.ndarray:
    """Flux through ``{x + s y + t z : s in [-1/2, 1/2], t in [-1, 0]}`` with measure ``ds dt``."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    if B.N == 1 or B.kind == "zero":
        return np.zeros(np.broadcast_shapes(x.shape, y.shape, z.shape)[:-1])
    area = _cross(y, z)
    if B.is_affine:
        # the mean of an affine function over the parallelogram is its value at the center
        return area * B.b12(x - 0.5 * z)
    s, ws = gauss_legendre01(B.order)
    t, wt = gauss_legendre01(B.order)
    s = s - 0.5
    t = t - 1.0
    pts = (x[..., None, None, :] + s[:, None, None] * y[..., None, None, :]
           + t[None, :, None] * z[..., None, None, :])
    return area * np.sum(B.b12(pts) * (ws[:, None] * wt[None, :]), axis=(-2, -1))


@dataclass(frozen=True)
class GaugeScalar:
    """Gauge function ``rho`` with exact gradient.

    kinds: ``linear`` (``c``), ``quadratic`` (``Q``, ``c``: ``x.Qx/2 + c.x``),
    ``cosine`` (``a``, ``k``: ``a cos(k.x)``).
    """

    kind: str
    c: tuple = ()
    Q: tuple = ()
    a: float = 0.0
    k: tuple = ()

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return x @ np.asarray(self.c, dtype=float)
        if self.kind == "quadratic":
            Q = np.asarray(self.Q, dtype=float)
            lin = x @ np.asarray(self.c, dtype=float) if self.c else 0.0
            return 0.5 * np.einsum("...i,ij,...j->...", x, Q, x) + lin
        if self.kind == "cosine":
            return self.a * np.cos(x @ np.asarray(self.k, dtype=float))
        raise ValueError(f"unknown gauge scalar kind {self.kind!r}")

    def grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "linear":
            return np.broadcast_to(np.asarray(self.c, dtype=float), x.shape).copy()
        if self.kind == "quadratic":
            Q = np.asarray(self.Q, dtype=float)
            g = 0.5 * (x @ Q.T + x @ Q)
            return g + np.asarray(self.c, dtype=float) if self.c else g
        if self.kind == "cosine":
            k = np.asarray(self.k, dtype=float)
            return -self.a * np.sin(x @ k)[..., None] * k
        raise ValueError(f"unknown gauge scalar kind {self.kind!r}")

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.c:
            d["c"] = list(self.c)
        if self.Q:
            d["Q"] = [list(r) for r in self.Q]
        if self.kind == "cosine":
            d.update(a=self.a, k=list(self.k))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GaugeScalar":
        return cls(kind=d["kind"], c=tuple(d.get("c", ())),
                   Q=tuple(tuple(r) for r in d.get("Q", ())),
                   a=float(d.get("a", 0.0)), k=tuple(d.get("k", ())))


@dataclass(frozen=True)
class PotentialSpec:
    """Vector potential: a base 1-form plus exact gradients of gauge scalars."""

    N: int
    base: Callable[[np.ndarray], np.ndarray]
    field: Optional[FieldSpec] = None
    shifts: tuple = ()
    order: int = 8
    descriptor: dict = dc_field(default_factory=dict, compare=False)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = self.base(x)
        for rho in self.shifts:
            out = out + rho.grad(x)
        return out

    def base_circulation(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        d = y - x
        t, w = gauss_legendre01(self.order)
        pts = x[..., None, :] + t[:, None] * d[..., None, :]
        vals = np.sum(self.base(pts) * d[..., None, :], axis=-1)
        return vals @ w

    def rho(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1])
        for r in self.shifts:
            total = total + r.value(x)
        return total

    def to_dict(self) -> dict:
        return dict(self.descriptor, shifts=[s.to_dict() for s in self.shifts])


def circulation(A: PotentialSpec, x, y) -> np.ndarray:
    """``int_0^1 A(x + t(y-x)).(y-x) dt``; gauge shifts contribute ``rho(y) - rho(x)`` exactly."""
    out = A.base_circulation(x, y)
    if A.shifts:
        out = out + A.rho(y) - A.rho(x)
    return out


def zero_potential(N: int) -> PotentialSpec:
    return PotentialSpec(N=N, base=lambda x: np.zeros(np.shape(x)), field=FieldSpec(N=N),
                         descriptor={"gauge": "transversal", "field": FieldSpec(N=N).to_dict()})


def transversal_gauge(B: FieldSpec) -> PotentialSpec:
    """``A_j(x) = -sum_k int_0^1 s B_jk(s x) x_k ds`` so that ``dA = B``."""
    if B.N == 1 or B.kind == "zero":
        return PotentialSpec(N=B.N, base=lambda x: np.zeros(np.shape(x)), field=B,
                             descriptor={"gauge": "transversal", "field": B.to_dict()})
    if B.kind not in FIELD_KINDS:
        raise ValueError(f"unsupported field kind {B.kind!r}")

    if B.kind == "constant":
        def moment(x):
            return np.full(np.shape(x)[:-1], 0.5 * B.b)
    elif B.kind == "linear":
        beta = np.asarray(B.beta, dtype=float)

        def moment(x):
            return 0.5 * B.b + (x @ beta) / 3.0
    else:
        s, w = gauss_legendre01(B.order)

        def moment(x):
            pts = s[:, None] * np.asarray(x)[..., None, :]
            return np.sum(s * w * B.b12(pts), axis=-1)

    def base(x):
        x = np.asarray(x, dtype=float)
        m = moment(x)
        return np.stack([-m * x[..., 1], m * x[..., 0]], axis=-1)

    order = 24 if B.kind == "gaussian" else 8
    return PotentialSpec(N=2, base=base, field=B, order=order,
                         descriptor={"gauge": "transversal", "field": B.to_dict()})


def gauge_shift(A: PotentialSpec, rho: GaugeScalar) -> PotentialSpec:
    """``A + d rho``."""
    return PotentialSpec(N=A.N, base=A.base, field=A.field, shifts=A.shifts + (rho,),
                         order=A.order, descriptor=A.descriptor)


def landau_shift(b: float) -> GaugeScalar:
    """Gauge scalar turning the symmetric gauge of constant ``b`` into ``A = (0, b x_1)``."""
    return GaugeScalar(kind="quadratic", Q=((0.0, 0.5 * b), (0.5 * b, 0.0)))


def curl_fd(A: PotentialSpec, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference ``d_1 A_2 - d_2 A_1`` (test oracle)."""
    x = np.asarray(x, dtype=float)
    e1 = np.array([h, 0.0])
    e2 = np.array([0.0, h])
    d1A2 = (A(x + e1)[..., 1] - A(x - e1)[..., 1]) / (2 * h)
    d2A1 = (A(x + e2)[..., 0] - A(x - e2)[..., 0]) / (2 * h)
    return d1A2 - d2A1


def omega_small(B: FieldSpec, X: PhasePoint, Y: PhasePoint, z) -> complex:
    """``exp(-i G^B(<z, z+x, z+x+y>))``."""
    z = np.asarray(z, dtype=float)
    return complex(np.exp(-1j * flux_triangle(B, z, z + X.x, z + X.x + Y.x)))


def cocycle(B: FieldSpec, X: PhasePoint, Y: PhasePoint, z) -> complex:
    """Magnetic 2-cocycle ``exp(i sigma(X,Y)/2) omega^B(X, Y; z)``."""
    return complex(np.exp(0.5j * sigma(X, Y))) * omega_small(B, X, Y, z)


def cocycle_function(B: FieldSpec, X: PhasePoint, Y: PhasePoint, points) -> np.ndarray:
    """Cocycle as a function of ``z`` over an array of positions ``(..., N)``."""
    z = np.asarray(points, dtype=float)
    return np.exp(0.5j * sigma(X, Y)) * np.exp(-1j * flux_triangle(B, z, z + X.x, z + X.x + Y.x))


def omega_tilde(B: FieldSpec, z, grid: PhaseGrid, sign: int = -1) -> np.ndarray:
    """Partial Fourier transform ``(2 pi)^-N int dy exp(-i y.xi) exp(sign i G^B[P(x; y, z)])``.

    ``y`` runs over the centered position grid; returns a symbol array on ``grid``.
    """
    z = np.asarray(z, dtype=float)
    xs = grid.positions  # (P, N)
    ys = grid.positions
    phase = np.exp(sign * 1j * flux_parallelogram(B, xs[:, None, :], ys[None, :, :], z))  # (P_x, P_y)
    # exp(-i y.xi) separates over axes
    E = np.exp(-1j * np.outer(grid.xs, grid.ps))  # [y_k, p_m]
    out = phase.reshape((grid.size,) + grid.wave_shape)
    for a in range(grid.N):
        out = np.tensordot(out, E, axes=([1], [0]))  # consume y_a, append xi_a
    out = out.reshape(grid.symbol_shape)
    return out * grid.x_weight / (2 * np.pi) ** grid.N
