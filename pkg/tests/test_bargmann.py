import numpy as np
import pytest

from magweyl import bargmann as bgm
from magweyl.checks import gauss_symbol
from magweyl.magfield import FieldSpec, gauge_shift, landau_shift, transversal_gauge
from magweyl.phasespace import PhaseGrid, PhasePoint


@pytest.fixture
def bg(grid8, pot1):
    return bgm.Bargmann(pot1, grid8, bgm.gaussian(2))


@pytest.fixture
def u(grid8):
    return bgm.sample_wave(bgm.gaussian(2, center=[0.5, -0.3], momentum=[0.2, 0.1], width=1.2), grid8)


def test_coherent_matches_explicit(bg, grid8, rng):
    for _ in range(4):
        Y = grid8.point(rng.integers(0, 8, 4))
        np.testing.assert_allclose(bg.coherent(Y), bg.coherent_explicit(Y), atol=1e-12)


def test_isometry_on_grid(bg, grid8, u):
    # normalized fiducial: U is an exact isometry on the grid
    Phi = bg.transform(u)
    nu = np.sum(np.abs(u) ** 2) * grid8.x_weight
    nP = np.sum(np.abs(Phi) ** 2) * bgm.bargmann_measure(grid8)
    assert nP == pytest.approx(nu, rel=1e-12)
    np.testing.assert_allclose(bg.adjoint(Phi), u, atol=1e-12)


def test_kernel(bg, grid8, rng):
    X, Y = grid8.point(rng.integers(0, 8, 4)), grid8.point(rng.integers(0, 8, 4))
    assert bg.kernel(X, X) == pytest.approx(1.0, abs=1e-12)
    assert bg.kernel(X, Y) == pytest.approx(np.conj(bg.kernel(Y, X)), abs=1e-14)


def test_reproducing_and_negative_control(bg, grid8, u, rng):
    Phi = bg.transform(u)
    offs = rng.integers(-4, 4, (6, 4))
    at = Phi[tuple((offs + 4).T)]
    np.testing.assert_allclose(bg.reproduce(Phi, offs), at, atol=1e-12)
    junk = rng.normal(size=Phi.shape) + 1j * rng.normal(size=Phi.shape)
    # an arbitrary function is not in the range of U
    assert np.abs(bg.reproduce(junk, offs) - junk[tuple((offs + 4).T)]).max() > 0.1


def test_window_projection_and_gauge(grid8, field1, pot1):
    v = bgm.gaussian(2)
    h = bgm.wigner_window(field1, v, grid8)
    q = bgm.Bargmann(pot1, grid8, v).mod.q
    P = q.op(h)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    assert np.abs(h.imag).max() < 1e-12
    h2 = bgm.wigner_window(field1, v, grid8, A=gauge_shift(pot1, landau_shift(1.0)))
    np.testing.assert_allclose(h2, h, atol=1e-12)


def test_window_quadrature_closed_form(field1):
    g = PhaseGrid(2, 8, 6.0)
    w = bgm.window_quadrature(field1, bgm.gaussian(2), g)
    np.testing.assert_allclose(w, bgm.gaussian_window_constant(1.0, g), atol=1e-6)


def test_theta_identity(grid8, field1, rng):
    f = gauss_symbol(grid8, [0.2, 0, -0.3, 0.1], (1.4, 0.9), 1 + 0.2j)
    Z = grid8.point(rng.integers(2, 6, 4))
    assert bgm.theta_identity_residual(Z, f, field1, grid8) < 1e-12


def test_functional_triple_flux():
    g = PhaseGrid(2, 12, 6.0)
    B = FieldSpec(2, "constant", b=1.0)
    f = gauss_symbol(g, [0, 0, 0, 0], (1.0, 1.0))

    def fp(m, d):
        return 2 * np.pi * np.exp(-np.sum(m * m, -1) / 2 - np.sum(d * d, -1) / 2)
    Z = PhasePoint(np.array([g.dx, 0.0]), np.array([0.0, g.dp]))
    a = bgm.coherent_functional(Z, f, B, grid=g)
    b = bgm.coherent_functional_integral(Z, fp, B, bgm.gaussian(2))
    assert a == pytest.approx(b, rel=1e-3)


def test_intertwining(bg, grid8, u, rng):
    V = bg.vA.reshape(grid8.wave_shape)
    h = bg.mod.q.wigner(V, V)
    f = gauss_symbol(grid8, [0.3, 0, 0, -0.2], (1.3, 0.8), 0.5 - 1j)
    Phi = bg.transform(u)
    offs = rng.integers(-4, 4, (8, 4))
    lhs = bgm.rep_apply(bgm.intertwining_rows(bg, h, f, offs), Phi, grid8)
    rhs = bg.transform((bg.mod.q.op(f) @ bg.adjoint(Phi).ravel()).reshape(grid8.wave_shape))
    np.testing.assert_allclose(lhs, rhs[tuple((offs + 4).T)], atol=1e-12 * np.abs(Phi).max())


@pytest.mark.parametrize("which", ["x", "xi"])
def test_kohn_nirenberg_b0(grid8, which):
    from magweyl.calculus import Quantizer
    from magweyl.magfield import zero_potential
    f = gauss_symbol(grid8, [0.2, -0.1, 0, 0], (1.2, 1e6)) if which == "x" else \
        gauss_symbol(grid8, [0, 0, 0.3, 0], (1e6, 0.9))
    # symbols depending on one variable only quantize the same in every ordering
    np.testing.assert_allclose(bgm.kohn_nirenberg(f, grid8), Quantizer(zero_potential(2), grid8).op(f),
                               atol=1e-10)
