import numpy as np
import pytest

from magweyl import kernels, modulation as mod
from magweyl.calculus import Quantizer
from magweyl.checks import gauss_symbol
from magweyl.magfield import gauge_shift, landau_shift, zero_potential
from magweyl.phasespace import DoubleSymbol, PhasePoint, pair_bilinear, sigma


@pytest.fixture
def fx(grid8):
    f = gauss_symbol(grid8, [0.3, 0, 0, 0.2], (1.3, 0.8), 1 + 0.3j)
    h = gauss_symbol(grid8, [0, -0.4, 0.3, 0], (1.3, 0.8), 1 + 0.5j)
    return f, h


def test_trace_route_matches_literal(grid8, pot1, fx, rng):
    f, h = fx
    M = mod.Modulation(pot1, grid8)
    X, Y = rng.integers(-4, 4, (6, 4)), rng.integers(-4, 4, (6, 4))
    a = M.evaluate(h, f, X, Y)
    b = np.array([M.literal(h, f, x, y) for x, y in zip(X, Y)])
    assert np.abs(a - b).max() <= 1e-6 * np.abs(b).max()


def test_zero_symbol(grid8, pot1, fx):
    M = mod.Modulation(pot1, grid8)
    assert np.all(M.evaluate(fx[1], np.zeros(grid8.symbol_shape), [1, 0, 0, 1], [0, 0, 0, 0]) == 0)


def test_zero_field_translated_pairing(grid8, fx, rng):
    """B = 0: M_h f(X, Y) = exp(i sigma(X, Y)/2) <Theta_X(f) # e_{-Y}, h>."""
    f, h = fx
    M = mod.Modulation(zero_potential(2), grid8)
    q = M.q
    for _ in range(4):
        X, Y = rng.integers(-3, 4, 4), rng.integers(-3, 4, 4)
        Xp, Yp = (PhasePoint(p[:2], p[2:]) for p in mod.offsets_to_points(np.stack([X, Y]), grid8))
        T = q.weyl(-Xp) @ q.op(f) @ q.weyl(Xp) @ q.weyl(-Yp)
        rhs = np.exp(0.5j * sigma(Xp, Yp)) * pair_bilinear(q.symbol(T), h, grid8)
        assert M.evaluate(h, f, X, Y)[0] == pytest.approx(rhs, abs=1e-10)


def test_gauge_independent(grid8, pot1, fx, rng):
    f, h = fx
    X, Y = rng.integers(-3, 4, (5, 4)), rng.integers(-3, 4, (5, 4))
    a = mod.Modulation(pot1, grid8).evaluate(h, f, X, Y)
    b = mod.Modulation(gauge_shift(pot1, landau_shift(1.0)), grid8).evaluate(h, f, X, Y)
    assert np.abs(a - b).max() <= 1e-10 * np.abs(a).max()


def test_involution_compatibility(grid8, pot1, fx, rng):
    """M_{conj h}(conj f)(X, Y) = conj M_h f(X - Y, -Y)."""
    f, h = fx
    M = mod.Modulation(pot1, grid8)
    X, Y = rng.integers(-2, 3, (5, 4)), rng.integers(-2, 3, (5, 4))
    a = M.evaluate(np.conj(h), np.conj(f), X, Y)
    b = np.conj(M.evaluate(h, f, X - Y, -Y))
    assert np.abs(a - b).max() <= 1e-6 * np.abs(b).max()


def test_remark_constant(grid8, pot1, fx):
    f, h = fx
    M = mod.Modulation(pot1, grid8)
    X = np.array([1, 0, -1, 1])
    ys = mod.point_offsets(grid8, 1)
    Mv = M.lookup(M.x_table(*M._ops(h, f), X), X[None, :] - ys) * M.kappa
    R = mod.remark_form(M, h, f, X)
    inb = np.all(np.abs(X[None, :] - ys) < grid8.n // 2, axis=1) & (np.abs(Mv) > 1e-6 * np.abs(Mv).max())
    np.testing.assert_allclose(Mv[inb] / R[inb], (2 * np.pi) ** 2, rtol=1e-8)


def test_crossed_product_is_kernel_product(rng):
    shape = (3, 3)
    P = 9
    F, G = (rng.normal(size=(P, P)) + 1j * rng.normal(size=(P, P)) for _ in range(2))
    idx, neg = mod.lattice_negation(shape)
    diff = np.ravel_multi_index(tuple(np.moveaxis((idx[:, None] - idx[None]) % 3, -1, 0)), shape)

    def kern(A):  # K_A(X, W) = A(X, X - W)
        return A[np.arange(P)[:, None], diff]
    H = kernels.crossed_product_dense(F, G, shape)
    np.testing.assert_allclose(kern(H), kern(F) @ kern(G), atol=1e-12)


def test_crossed_product_associative_and_involution(rng):
    shape = (2, 3)
    P = 6
    mk = lambda: DoubleSymbol(values=rng.normal(size=(P, P)) + 1j * rng.normal(size=(P, P)),
                              points=np.zeros((P, 2)), weight=1.0)
    F, G, H = mk(), mk(), mk()
    l = mod.crossed_product(mod.crossed_product(F, G, shape), H, shape).values
    r = mod.crossed_product(F, mod.crossed_product(G, H, shape), shape).values
    np.testing.assert_allclose(l, r, atol=1e-10)
    twice = mod.crossed_involution(mod.crossed_involution(F, shape), shape)
    np.testing.assert_allclose(twice.values, F.values)


def test_adjoint_of_zero(grid8, pot1, fx):
    M = mod.Modulation(pot1, grid8)
    G = M.dense(fx[1], np.zeros(grid8.symbol_shape), stride=4)
    assert np.abs(M.adjoint(fx[1], G)).max() == 0


def test_j_maps(grid8, fx):
    f, h = fx
    k = np.conj(h) * 0.5
    J = mod.j_embed(h, f, grid8, stride=2)
    back = mod.j_adjoint(k, J, grid8, stride=2)
    sub = f[::2, ::2, ::2, ::2].ravel()
    c = np.sum(h[::2, ::2, ::2, ::2] * k[::2, ::2, ::2, ::2].conj()) * np.sqrt(J.weight)
    np.testing.assert_allclose(back, c * sub, atol=1e-12)


def test_box_product_morphism(grid8, pot1, fx, rng):
    f, h = fx
    M = mod.Modulation(pot1, grid8)
    w = M.q.wigner(*(2 * [np.exp(-np.sum(grid8.positions**2, 1) / 2).reshape(8, 8) / np.sqrt(np.pi)]))
    w = w / np.sqrt(np.abs(np.trace(M.q.op(w))))  # unit trace projection
    w = M.q.wigner(*(2 * [np.linalg.eigh(M.q.op(w))[1][:, -1].reshape(8, 8) / np.sqrt(grid8.x_weight)]))
    g = gauss_symbol(grid8, [0, 0.2, -0.1, 0], (1.3, 0.8))
    fg, hh = mod.box_product((f, w), (g, w), M.q)
    X, Y = rng.integers(-2, 3, 4), rng.integers(-2, 3, 4)
    lhs = M.diamond_point(w, f, w, g, X, Y)
    rhs = (2 * np.pi) ** 4 * mod.modulation_tensor([(1.0, fg, hh)], M)(*[
        PhasePoint(p[:2], p[2:]) for p in mod.offsets_to_points(np.stack([X, Y]), grid8)])
    assert lhs == pytest.approx(rhs, rel=5e-3, abs=1e-12)
    with pytest.raises(ValueError):
        mod.box_product([f, w], (g, w), M.q)


def test_lemma_identities(grid8, pot1, fx):
    q = Quantizer(pot1, grid8)
    f, h = fx
    assert mod.lemma_cyclicity(q, f, h, np.conj(f)) < 1e-12
    l, r = mod.lemma_plane_wave_resolution(f, h, grid8)
    assert l == pytest.approx(r, rel=1e-12)
    l, r = mod.lemma_translation_integral(q, f, h)
    assert l == pytest.approx(r, rel=1e-10)
