import os
import subprocess
import sys

import numpy as np
import pytest

from magweyl import _kernels_py, kernels

compiled = pytest.importorskip("magweyl._kernels")


@pytest.mark.parametrize("N", [1, 2])
def test_direct_moyal_agrees(N, rng):
    X, Y, Z = (rng.normal(size=(k, 2 * N)) for k in (5, 30, 25))
    fy, gz = (rng.normal(size=k) + 1j * rng.normal(size=k) for k in (30, 25))
    beta = np.array([0.3, -0.2])
    a = compiled.direct_moyal_affine(X, Y, fy, Z, gz, N, 1.0, beta)
    b = _kernels_py.direct_moyal_affine(X, Y, fy, Z, gz, N, 1.0, beta, chunk=7)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_crossed_product_agrees(rng):
    shape = (3, 2, 2)
    F, G = (rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)) for _ in range(2))
    np.testing.assert_allclose(compiled.crossed_product_dense(F, G, shape),
                               _kernels_py.crossed_product_dense(F, G, shape), atol=1e-12)


def test_backend_switch():
    assert kernels.BACKEND == "compiled"
    env = dict(os.environ, MAGWEYL_PURE_PYTHON="1")
    r = subprocess.run([sys.executable, "-c", "from magweyl import kernels; print(kernels.BACKEND)"],
                       capture_output=True, text=True, env=env)
    assert r.stdout.strip() == "python"
