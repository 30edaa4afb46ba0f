"""Catalog of named identity checks.

Each check takes a :class:`Setup` and returns a non-negative residual.  The
harness runs them from configs; the acceptance suite runs them at two grids.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import bargmann as bgm
from . import calculus as cal
from . import magfield as mf
from . import modulation as mod
from .phasespace import PhaseGrid, PhasePoint, pair_bilinear, plane_wave, translate


@dataclass
class Setup:
    grid: PhaseGrid
    field: mf.FieldSpec
    potential: mf.PotentialSpec
    seed: int = 0
    fixtures: dict = dc_field(default_factory=dict)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable[[Setup], float]
    tolerance: float
    criterion: int
    summary: str


CATALOG: dict[str, Check] = {}


def register(name: str, tolerance: float, criterion: int, summary: str):
    def deco(fn):
        CATALOG[name] = Check(name, fn, tolerance, criterion, summary)
        return fn
    return deco


def gauss_symbol(grid: PhaseGrid, center, widths, amp: complex = 1.0) -> np.ndarray:
    """Product Gaussian on phase space; ``widths = (sx, sp)``."""
    N = grid.N
    m = grid.mesh()
    c = np.asarray(center, dtype=float)
    sx, sp = widths
    e = sum((m[a] - c[a]) ** 2 for a in range(N)) / (2 * sx**2)
    e = e + sum((m[N + a] - c[N + a]) ** 2 for a in range(N)) / (2 * sp**2)
    return amp * np.exp(-e)


def _rel(a, b) -> float:
    return float(np.linalg.norm(np.ravel(a - b)) / np.linalg.norm(np.ravel(b)))


def _pt(off, grid: PhaseGrid) -> PhasePoint:
    p = mod.offsets_to_points(np.asarray(off), grid)
    return PhasePoint(p[:grid.N], p[grid.N:])


def _quad(grid: PhaseGrid, x, xi) -> list:
    """Cut a 2D-style centre ``(x1, x2), (xi1, xi2)`` down to ``N`` dimensions."""
    return list(x[:grid.N]) + list(xi[:grid.N])


def _pp(grid: PhaseGrid, x, xi) -> PhasePoint:
    return PhasePoint.of(np.asarray(x[:grid.N], float), np.asarray(xi[:grid.N], float))


# -- calculus -----------------------------------------------------------------

@register("gauge_covariance", 1e-10, 1, "Op^{A + d rho}(f) = e^{i rho} Op^A(f) e^{-i rho}")
def gauge_covariance(s: Setup) -> float:
    g, A = s.grid, s.potential
    rng = s.rng(1)
    f = rng.normal(size=g.symbol_shape) + 1j * rng.normal(size=g.symbol_shape)
    rho = mf.GaugeScalar(kind="cosine", a=0.7, k=tuple(rng.uniform(-0.8, 0.8, g.N)))
    A2 = mf.gauge_shift(A, rho)
    if g.N == 2:
        A2 = mf.gauge_shift(A2, mf.landau_shift(1.0))
    D = np.exp(1j * (A2.rho(g.positions) - A.rho(g.positions)))
    lhs = cal.op_weyl(A2, f, g)
    rhs = D[:, None] * cal.op_weyl(A, f, g) * D.conj()[None, :]
    return float(np.abs(lhs - rhs).max() / np.abs(rhs).max())


@register("eq9_weyl_product_rule", 1e-8, 2, "op(X) op(Y) = Omega^B(X, Y; Q) op(X + Y) on non-wrapping rows")
def weyl_product_rule(s: Setup) -> float:
    g, A = s.grid, s.potential
    rng = s.rng(2)
    ph = cal.phase_matrix(A, g)
    h = g.n // 2
    res = 0.0
    for _ in range(20):
        X = _pt(rng.integers(-h + 1, h, 2 * g.N), g)
        Y = _pt(rng.integers(-h + 1, h, 2 * g.N), g)
        res = max(res, cal.product_rule_residual(A, X, Y, g, phase=ph))
    return res


@register("eq4_cocycle_factorization", 1e-6, 3, "e_X # e_Y = Omega^B(X, Y) e_{X+Y} via the composition integral")
def cocycle_factorization(s: Setup) -> float:
    g, B = s.grid, s.field
    rng = s.rng(3)
    a = max(1, round(3.0 / g.dx)) * g.dx  # about 3 length units, on grid
    X = _pp(g, [a, 0.0], [g.dp, 0.0])
    Y = _pp(g, [0.0, -a], [0.0, 2 * g.dp])
    pts = g.n // 2 + rng.integers(-1, 2, size=(6, 2 * g.N))
    D = cal.moyal_direct(plane_wave(X, g), plane_wave(Y, g), B, g, points=pts)
    z = g.xs[pts[:, :g.N]]
    R = mf.cocycle_function(B, X, Y, z) * plane_wave(X + Y, g)[tuple(pts.T)]
    return float(np.abs(D - R).max())


@register("moyal_route_consistency", 1e-3, 4, "composition integral vs kernel route on Gaussians")
def moyal_routes(s: Setup) -> float:
    g, B = s.grid, s.field
    rng = s.rng(4)
    f = gauss_symbol(g, [0.0] * (2 * g.N), (1.8, 0.9))
    h = gauss_symbol(g, _quad(g, [0.5, 0.0], [0.0, -0.3]), (1.8, 0.9))
    pts = g.n // 2 + rng.integers(-2, 3, size=(10, 2 * g.N))
    K = cal.moyal_kernel_route(f, h, s.potential, g)[tuple(pts.T)]
    D = cal.moyal_direct(f, h, B, g, points=pts)
    return _rel(D, K)


@register("moyal_b0_oracle", 1e-8, 4, "B = 0 kernel product vs twisted-convolution Weyl product")
def moyal_b0(s: Setup) -> float:
    g = s.grid
    f = gauss_symbol(g, [0.0] * (2 * g.N), (1.6, 0.9))
    h = gauss_symbol(g, _quad(g, [0.5, 0.0], [0.0, -0.3]), (1.6, 0.9), 1 + 0.4j)
    K = cal.moyal_kernel_route(f, h, mf.zero_potential(g.N), g)
    return _rel(cal.weyl_product_fourier(f, h, g), K)


@register("prop1_1_translation", 1e-3, 5, "explicit magnetic translation vs e_{-Z} # f # e_Z")
def translation_formula(s: Setup) -> float:
    g, B = s.grid, s.field
    q = cal.Quantizer(s.potential, g)
    f = gauss_symbol(g, _quad(g, [-0.3, 0.0], [0.2, 0.0]), (1.2, 0.75))
    Z = _pp(g, [g.dx, 0.0], [0.0, g.dp])
    ref = cal.mag_translate(Z, f, q, interpolate=True)
    return _rel(cal.mag_translate_explicit(Z, f, B, g, interpolate=True), ref)


# -- trace identities ------------------------------------------------------------------

def _lemma_fixtures(g: PhaseGrid):
    f1 = gauss_symbol(g, _quad(g, [0.3, 0.0], [0.0, 0.2]), (1.3, 0.8))
    f2 = gauss_symbol(g, _quad(g, [0.0, -0.4], [0.1, 0.0]), (1.3, 0.8), 1 - 0.3j)
    f3 = gauss_symbol(g, [0.0] * (2 * g.N), (1.6, 0.9))
    return f1, f2, f3


@register("lemma2_3a_cyclicity", 1e-6, 6, "<f1 # f2, f3> = <f1, f2 # f3> = <f2, f3 # f1>")
def lemma_a(s: Setup) -> float:
    return mod.lemma_cyclicity(cal.Quantizer(s.potential, s.grid), *_lemma_fixtures(s.grid))


@register("lemma2_3b_plane_wave_resolution", 1e-3, 6, "int dZ <f, e_Z><e_{-Z}, g> = (2 pi)^(2N) <f, g>")
def lemma_b(s: Setup) -> float:
    f1, f2, _ = _lemma_fixtures(s.grid)
    lhs, rhs = mod.lemma_plane_wave_resolution(f1, f2, s.grid)
    return abs(lhs - rhs) / abs(rhs)


@register("lemma2_3c_translation_integral", 1e-3, 6, "int dY dZ [Theta_Z f](Y) g(Y) = (int f)(int g)")
def lemma_c(s: Setup) -> float:
    f1, f2, _ = _lemma_fixtures(s.grid)
    lhs, rhs = mod.lemma_translation_integral(cal.Quantizer(s.potential, s.grid), f1, f2)
    return abs(lhs - rhs) / abs(rhs)


# -- modulation -------------------------------------------------------------------

def _mod_fixtures(g: PhaseGrid, sx: float, sp: float):
    f = gauss_symbol(g, _quad(g, [0.3, 0.0], [0.0, 0.2]), (sx, sp), 1 + 0.3j)
    h = gauss_symbol(g, _quad(g, [0.0, -0.4], [0.3, 0.0]), (sx, sp), 1 + 0.5j)
    k = gauss_symbol(g, _quad(g, [0.2, 0.0], [0.0, -0.2]), (sx, sp), 1 - 0.2j)
    gg = gauss_symbol(g, _quad(g, [0.0, 0.2], [-0.1, 0.0]), (sx, sp), 1 - 0.3j)
    return f, h, k, gg


@register("thm2_2_orthogonality", 5e-3, 7, "<<conj M_h f, M_k g>> = (2 pi)^(2N) <conj h, k><conj f, g>, coarse quadrature")
def orthogonality(s: Setup) -> float:
    g = s.grid
    f, h, k, gg = _mod_fixtures(g, 1.3, 0.75)
    M = mod.Modulation(s.potential, g)
    stride = 2  # 6 points per axis at the desk grid
    F = M.dense(h, f, stride)
    G = M.dense(k, gg, stride)
    lhs = np.sum(np.conj(F.values) * G.values) * F.weight
    rhs = (2 * np.pi) ** (2 * g.N) * pair_bilinear(np.conj(h), k, g) * pair_bilinear(np.conj(f), gg, g)
    return float(abs(lhs - rhs) / abs(rhs))


@register("cor2_4_inversion", 5e-3, 8, "(M_k)^* M_h f = (2 pi)^(2N) <h, conj k> f")
def inversion(s: Setup) -> float:
    g = s.grid
    f, h, k, _ = _mod_fixtures(g, 1.6, 0.6)
    M = mod.Modulation(s.potential, g)
    S = M.adjoint_of(k, h, f, x_stride=2)
    c = (2 * np.pi) ** (2 * g.N) * pair_bilinear(h, np.conj(k), g)
    return _rel(S, c * f)


def idempotent_window(s: Setup) -> np.ndarray:
    """Magnetic Wigner function of the unit-normalized standard Gaussian."""
    return bgm.wigner_window(s.field, bgm.gaussian(s.grid.N), s.grid, A=s.potential)


@register("thm2_5_window_idempotency", 1e-8, 9, "h # h = h = conj h for the Gaussian window")
def window_idempotency(s: Setup) -> float:
    q = cal.Quantizer(s.potential, s.grid)
    h = idempotent_window(s)
    return float(max(np.abs(q.product(h, h) - h).max(), np.abs(h - np.conj(h)).max()))


@register("thm2_5_morphism", 5e-3, 9, "M_h f <> M_h g = (2 pi)^(2N) M_h (f # g) at 20 random pairs")
def morphism(s: Setup) -> float:
    g = s.grid
    f, _, _, gg = _mod_fixtures(g, 1.3, 0.75)
    h = idempotent_window(s)
    M = mod.Modulation(s.potential, g)
    fg = M.q.product(f, gg)
    rng = s.rng(9)
    a, b = [], []
    for _ in range(20):
        X = rng.integers(-2, 3, 2 * g.N)
        Y = rng.integers(-2, 3, 2 * g.N)
        a.append(M.diamond_point(h, f, h, gg, X, Y))
        b.append((2 * np.pi) ** (2 * g.N) * M.evaluate(h, fg, X, Y)[0])
    a, b = np.array(a), np.array(b)
    return float(np.abs(a - b).max() / np.abs(b).max())


# -- bargmann ---------------------------------------------------------------------

def _bargmann_setup(s: Setup):
    """Continuum-normalized fiducial, so Riemann-sum errors stay visible."""
    g = s.grid
    bg = bgm.Bargmann(s.potential, g, bgm.gaussian(g.N), normalize=False)
    u = bgm.sample_wave(bgm.gaussian(g.N, center=[0.5, -0.3][:g.N], momentum=[0.2, 0.1][:g.N], width=1.2), g)
    return bg, u, bg.transform(u)


@register("prop3_3_isometry", 1e-3, 10, "||U u|| = ||u||")
def isometry(s: Setup) -> float:
    bg, u, Phi = _bargmann_setup(s)
    g = s.grid
    nu = np.sqrt(np.sum(np.abs(u) ** 2) * g.x_weight)
    nP = np.sqrt(np.sum(np.abs(Phi) ** 2) * bgm.bargmann_measure(g))
    return float(abs(nP / nu - 1))


@register("eq33_resolution_of_identity", 1e-3, 10, "int dY/(2 pi)^N |v(Y)><v(Y)| = 1, applied to u")
def resolution(s: Setup) -> float:
    bg, u, Phi = _bargmann_setup(s)
    return float(np.abs(bg.adjoint(Phi) - u).max() / np.abs(u).max())


@register("prop3_3_reproducing_kernel", 1e-3, 10, "Phi(X) = int dY/(2 pi)^N K(X, Y) Phi(Y) at 20 points")
def reproducing(s: Setup) -> float:
    bg, u, Phi = _bargmann_setup(s)
    g = s.grid
    offs = s.rng(10).integers(-g.n // 2, g.n // 2, size=(20, 2 * g.N))
    r = bg.reproduce(Phi, offs)
    return float(np.abs(r - Phi[tuple((offs + g.n // 2).T)]).max() / np.abs(Phi).max())


@register("prop3_4_intertwining", 5e-3, 11, "REP(F) Phi = U Op(f) U^* Phi, F the reflected modulation of f")
def intertwining(s: Setup) -> float:
    g = s.grid
    bg = bgm.Bargmann(s.potential, g, bgm.gaussian(g.N))
    V = bg.vA.reshape(g.wave_shape)
    h = bg.mod.q.wigner(V, V)
    rng = s.rng(11)
    u = bgm.sample_wave(bgm.gaussian(g.N, center=[0.5, -0.3][:g.N], momentum=[0.2, 0.1][:g.N], width=1.2), g)
    Phi = bg.transform(u)
    worst = 0.0
    for _ in range(10):
        c = rng.uniform(-1, 1, 2 * g.N)
        f = gauss_symbol(g, c, tuple(rng.uniform(1.0, 1.8, 1)) + tuple(rng.uniform(0.6, 1.0, 1)),
                         complex(*rng.normal(size=2)))
        rhs = bg.transform((bg.mod.q.op(f) @ bg.adjoint(Phi).ravel()).reshape(g.wave_shape))
        offs = rng.integers(-g.n // 2, g.n // 2, size=(24, 2 * g.N))
        lhs = bgm.rep_apply(bgm.intertwining_rows(bg, h, f, offs), Phi, g)
        worst = max(worst, float(np.abs(lhs - rhs[tuple((offs + g.n // 2).T)]).max()))
    return worst / float(np.abs(Phi).max())


# -- calibration ------------------------------------------------------------------

def calibrate(s: Setup, count: int = 20) -> dict:
    """Pairing-trace constant and HS ratio over ``count`` random symbols."""
    g = s.grid
    rng = s.rng(12)
    q = cal.Quantizer(s.potential, g)
    kap, kp = [], []
    for _ in range(count):
        f = rng.normal(size=g.symbol_shape) + 1j * rng.normal(size=g.symbol_shape)
        h = rng.normal(size=g.symbol_shape) + 1j * rng.normal(size=g.symbol_shape)
        kap.append(pair_bilinear(f, h, g) / np.trace(q.op(f) @ q.op(h)))
        kp.append(cal.hs_norm(q.op(f)) / np.sqrt(np.sum(np.abs(f) ** 2) * g.xi_weight))
    kap, kp = np.array(kap), np.array(kp)
    spread = lambda a: float(np.abs(a - a.mean()).max() / np.abs(a.mean()))
    return {"kappa": complex(kap.mean()), "kappa_spread": spread(kap),
            "kappa_prime": float(kp.mean()), "kappa_prime_spread": spread(kp),
            "fourier_unitarity": fourier_unitarity(g, rng)}


def fourier_unitarity(g: PhaseGrid, rng) -> float:
    """``||F f|| / ||f||`` for one random symbol (1 for a unitary transform)."""
    from .phasespace import l2_norm, symplectic_fourier
    f = rng.normal(size=g.symbol_shape) + 1j * rng.normal(size=g.symbol_shape)
    return l2_norm(symplectic_fourier(f, g), g) / l2_norm(f, g)


@register("calibration_kappa_spread", 1e-6, 12, "relative spread of the pairing-trace constant")
def kappa_spread(s: Setup) -> float:
    return calibrate(s)["kappa_spread"]


@register("calibration_kappa_prime_spread", 1e-6, 12, "relative spread of the L2 -> HS ratio")
def kappa_prime_spread(s: Setup) -> float:
    return calibrate(s)["kappa_prime_spread"]


# -- zero-field regression --------------------------------------------------------

@register("b0_regression", 1e-6, 13, "B = 0 operations vs textbook Weyl product, Wigner closed form, translations")
def b0_regression(s: Setup) -> float:
    g = s.grid
    N = g.N
    A0 = mf.zero_potential(N)
    B0 = mf.FieldSpec(N=N)
    q = cal.Quantizer(A0, g)
    f = gauss_symbol(g, _quad(g, [0.3, 0.0], [0.0, 0.2]), (1.3, 0.75), 1 + 0.3j)
    h = gauss_symbol(g, _quad(g, [0.0, -0.4], [0.3, 0.0]), (1.3, 0.75))
    r = [_rel(q.product(f, h), cal.weyl_product_fourier(f, h, g))]
    # Wigner transform of the unit Gaussian, integral form, against 2^N exp(-z^2 - zeta^2)
    pts = np.stack([m.ravel() for m in g.mesh()], axis=1)[s.rng(13).choice(g.size**2, 40, replace=False)]
    v = bgm.gaussian(N)
    w = cal.wigner_integral(A0, v, v, pts, ny=64, ymax=10.0)
    r.append(float(np.abs(w - 2**N * np.exp(-np.sum(pts**2, 1))).max()))
    # magnetic translation and the cocycle reduce to shifts and exp(i sigma / 2)
    Z = _pp(g, [g.dx, -2 * g.dx], [g.dp, 0.0])
    r.append(_rel(cal.mag_translate(Z, f, q), translate(-Z, f, g)))
    r.append(_rel(cal.mag_translate_explicit(Z, f, B0, g), translate(-Z, f, g)))
    Y = _pp(g, [0.0, g.dx], [-g.dp, 2 * g.dp])
    from .phasespace import sigma
    c = mf.cocycle_function(B0, Z, Y, g.positions)
    r.append(float(np.abs(c - np.exp(0.5j * sigma(Z, Y))).max()))
    return max(r)


def run_check(name: str, s: Setup) -> float:
    if name not in CATALOG:
        raise KeyError(name)
    return float(CATALOG[name].func(s))
