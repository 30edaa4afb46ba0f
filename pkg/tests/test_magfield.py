import numpy as np
import pytest

from magweyl.magfield import (FieldSpec, GaugeScalar, PotentialSpec, circulation, cocycle, curl_fd,
                              flux_parallelogram, flux_triangle, gauge_shift, landau_shift,
                              transversal_gauge, zero_potential)
from magweyl.phasespace import PhasePoint, sigma

FIELDS = [FieldSpec(2, "constant", b=1.0), FieldSpec(2, "linear", b=0.5, beta=(0.3, -0.2)),
          FieldSpec(2, "gaussian", b=1.2, center=(0.5, 0.0), width=1.5)]


@pytest.mark.parametrize("B", FIELDS, ids=lambda B: B.kind)
def test_transversal_gauge_curl(B, rng):
    A = transversal_gauge(B)
    for x in rng.uniform(-3, 3, (5, 2)):
        assert curl_fd(A, x) == pytest.approx(B.b12(x), abs=1e-6)


@pytest.mark.parametrize("B", FIELDS, ids=lambda B: B.kind)
def test_stokes_triangle(B, rng):
    """Circulation around a triangle equals the enclosed flux."""
    A = transversal_gauge(B)
    a, b, c = rng.uniform(-2, 2, (3, 2))
    loop = circulation(A, a, b) + circulation(A, b, c) + circulation(A, c, a)
    assert loop == pytest.approx(flux_triangle(B, a, b, c), abs=1e-8)


def test_constant_flux_is_area():
    B = FieldSpec(2, "constant", b=2.0)
    assert flux_triangle(B, [0, 0], [1, 0], [0, 1]) == pytest.approx(1.0)
    assert flux_parallelogram(B, [0.3, 0.1], [1.0, 0.0], [0.0, 1.0]) == pytest.approx(2.0)


def test_gauge_shift_leaves_field(rng):
    B = FIELDS[1]
    A = gauge_shift(transversal_gauge(B), GaugeScalar(kind="cosine", a=0.4, k=(0.7, -0.3)))
    x = rng.uniform(-2, 2, 2)
    assert curl_fd(A, x) == pytest.approx(B.b12(x), abs=1e-6)


def test_landau_shift():
    A = gauge_shift(transversal_gauge(FieldSpec(2, "constant", b=1.5)), landau_shift(1.5))
    x = np.array([0.7, -1.1])
    np.testing.assert_allclose(A(x), [0.0, 1.5 * 0.7], atol=1e-12)


def test_cocycle_zero_field_is_symplectic_phase(rng):
    X = PhasePoint.of(rng.normal(size=2), rng.normal(size=2))
    Y = PhasePoint.of(rng.normal(size=2), rng.normal(size=2))
    assert cocycle(FieldSpec(2), X, Y, [0.3, 0.1]) == pytest.approx(np.exp(0.5j * sigma(X, Y)))


def test_bad_specs():
    with pytest.raises(ValueError):
        FieldSpec(2, "dipole")
    with pytest.raises(ValueError):
        FieldSpec(1, "constant", b=1.0)
    assert isinstance(zero_potential(1), PotentialSpec)


def test_roundtrip_dict():
    for B in FIELDS:
        assert FieldSpec.from_dict(B.to_dict()) == B
    rho = GaugeScalar(kind="quadratic", Q=((1.0, 0.0), (0.0, 2.0)), c=(0.1, 0.2))
    assert GaugeScalar.from_dict(rho.to_dict()) == rho
