import numpy as np
import pytest

from magweyl import calculus as cal
from magweyl.magfield import FieldSpec, gauge_shift, landau_shift, transversal_gauge, zero_potential
from magweyl.phasespace import PhaseGrid, PhasePoint, plane_wave, translate


def _rand(g, rng):
    return rng.normal(size=g.symbol_shape) + 1j * rng.normal(size=g.symbol_shape)


def test_unit_and_roundtrip(grid8, pot1, rng):
    q = cal.Quantizer(pot1, grid8)
    np.testing.assert_allclose(q.op(np.ones(grid8.symbol_shape)), np.eye(grid8.size), atol=1e-12)
    f = _rand(grid8, rng)
    np.testing.assert_allclose(q.symbol(q.op(f)), f, atol=1e-11)


def test_star_map(grid8, pot1, rng):
    q = cal.Quantizer(pot1, grid8)
    f = _rand(grid8, rng)
    np.testing.assert_allclose(q.op(np.conj(f)), q.op(f).conj().T, atol=1e-12)


def test_product_depends_on_field_only(grid8, field1, pot1, rng):
    f, g = _rand(grid8, rng), _rand(grid8, rng)
    A2 = gauge_shift(pot1, landau_shift(1.0))
    np.testing.assert_allclose(cal.moyal_kernel_route(f, g, pot1, grid8),
                               cal.moyal_kernel_route(f, g, A2, grid8), atol=1e-10)


def test_pairing_constant_exact(grid8, pot1, rng):
    k = cal.pairing_trace_constant(pot1, _rand(grid8, rng), _rand(grid8, rng), grid8)
    assert k == pytest.approx((2 * np.pi) ** 2, rel=1e-12)
    assert cal.hs_ratio(pot1, _rand(grid8, rng), grid8) == pytest.approx((2 * np.pi) ** -1, rel=1e-12)


def test_wigner_is_rank_one_symbol(grid8, pot1, rng):
    u = rng.normal(size=grid8.wave_shape) + 1j * rng.normal(size=grid8.wave_shape)
    v = rng.normal(size=grid8.wave_shape)
    W = cal.wigner(pot1, u, v, grid8)
    np.testing.assert_allclose(cal.op_weyl(pot1, W, grid8), cal.rank_one(u, v, grid8), atol=1e-12)
    Wuu = cal.wigner(pot1, u, u, grid8)
    assert np.abs(Wuu.imag).max() < 1e-12


def test_weyl_product_rule_interior(grid8, pot1):
    X = PhasePoint.of([3.0, 0.0], [grid8.dp, 0.0])
    Y = PhasePoint.of([-1.5, 1.5], [0.0, 2 * grid8.dp])
    assert cal.product_rule_residual(pot1, X, Y, grid8) < 1e-12


def test_weyl_systems_unitary(grid8, pot1):
    U = cal.weyl_system(pot1, PhasePoint.of([1.5, -3.0], [grid8.dp, 0.0]), grid8)
    np.testing.assert_allclose(U @ U.conj().T, np.eye(grid8.size), atol=1e-12)


def test_zero_field_twisted_convolution_oracle(rng):
    g = PhaseGrid(1, 16, 6.0)
    f, h = _rand(g, rng), _rand(g, rng)
    np.testing.assert_allclose(cal.weyl_product_fourier(f, h, g),
                               cal.moyal_kernel_route(f, h, zero_potential(1), g), atol=1e-10)


def test_translation_zero_field(grid8, rng):
    q = cal.Quantizer(zero_potential(2), grid8)
    f = _rand(grid8, rng)
    Z = PhasePoint.of([1.5, 0.0], [0.0, grid8.dp])
    np.testing.assert_allclose(cal.mag_translate(Z, f, q), translate(-Z, f, grid8), atol=1e-11)


def test_translation_explicit_close(field1, pot1):
    g = PhaseGrid(2, 12, 6.0)
    m = g.mesh()
    f = np.exp(-((m[0] + 0.3) ** 2 + m[1] ** 2) / (2 * 1.44) - ((m[2] - 0.2) ** 2 + m[3] ** 2) / (2 * 0.5625))
    Z = PhasePoint.of([g.dx, 0.0], [0.0, g.dp])
    q = cal.Quantizer(pot1, g)
    a = cal.mag_translate(Z, f, q, interpolate=True)
    b = cal.mag_translate_explicit(Z, f, field1, g, interpolate=True)
    assert np.linalg.norm(a - b) / np.linalg.norm(a) < 1e-3


def test_moyal_direct_plane_waves(field1):
    g = PhaseGrid(2, 8, 6.0)
    X = PhasePoint.of([3.0, 0.0], [g.dp, 0.0])
    Y = PhasePoint.of([0.0, -3.0], [0.0, 2 * g.dp])
    pts = np.array([[4, 4, 4, 4], [5, 3, 4, 5]])
    D = cal.moyal_direct(plane_wave(X, g), plane_wave(Y, g), field1, g, points=pts)
    from magweyl.magfield import cocycle_function
    R = cocycle_function(field1, X, Y, g.xs[pts[:, :2]]) * plane_wave(X + Y, g)[tuple(pts.T)]
    np.testing.assert_allclose(D, R, atol=1e-10)


def test_moyal_engines_agree():
    B = FieldSpec(2, "linear", b=0.8, beta=(0.2, 0.1))
    g = PhaseGrid(2, 8, 6.0)
    m = g.mesh()
    f = np.exp(-(m[0] ** 2 + m[1] ** 2) / 4 - (m[2] ** 2 + m[3] ** 2) / 1.2)
    pts = np.array([[4, 4, 4, 4], [4, 5, 3, 4]])
    a = cal.moyal_direct(f, f, B, g, points=pts, engine="brute")
    b = cal.moyal_direct(f, f, B, g, points=pts, engine="quadrature")
    np.testing.assert_allclose(a, b, rtol=1e-6)
