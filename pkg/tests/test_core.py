from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from bergman_lab import _core

HAVE_EXT = "cython" in _core.backends()
needs_ext = pytest.mark.skipif(not HAVE_EXT, reason="compiled extension not built")


def _pts(rng, n, scale=0.6):
    return scale * (rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))) / 2


def test_backend_reported():
    assert _core.BACKEND in ("cython", "numpy")
    assert "numpy" in _core.backends()


@needs_ext
@pytest.mark.parametrize("fn", ["opnorm_sq", "tetra_norm_sq"])
def test_norms_agree(rng, fn):
    p = _pts(rng, 5000)
    a = getattr(_core, fn)(p, backend="cython")
    b = getattr(_core, fn)(p, backend="numpy")
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)


@needs_ext
def test_kernels_agree(rng):
    t, s = _pts(rng, 5000), _pts(rng, 5000)
    np.testing.assert_allclose(_core.rii_det(t, s, backend="cython"),
                               _core.rii_det(t, s, backend="numpy"), rtol=1e-13)
    np.testing.assert_allclose(_core.rii_kernel(t, s, 0.5, backend="cython"),
                               _core.rii_kernel(t, s, 0.5, backend="numpy"), rtol=1e-12)
    nc, dc = _core.tetra_num_den(t, s, backend="cython")
    nn, dn = _core.tetra_num_den(t, s, backend="numpy")
    np.testing.assert_allclose(nc, nn, rtol=1e-13)
    np.testing.assert_allclose(dc, dn, rtol=1e-13)
    np.testing.assert_allclose(_core.tetra_kernel(t, s, 2.0, backend="cython"),
                               _core.tetra_kernel(t, s, 2.0, backend="numpy"), rtol=1e-12)


def test_broadcasting_single_point():
    p = np.array([0.1, 0.2j, 0.3])
    assert np.shape(_core.opnorm_sq(p)) == ()
    grid = np.zeros((4, 5, 3), complex)
    assert _core.opnorm_sq(grid).shape == (4, 5)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _core.opnorm_sq(np.zeros(3), backend="fortran")


def test_env_forces_numpy_fallback():
    env = dict(os.environ, BERGMAN_LAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import bergman_lab; print(bergman_lab.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


@needs_ext
def test_extreme_magnitudes_agree():
    p = np.array([[0, 0, 2e-266], [0, 0, -1e-200j], [1e-170, 1e-170, 1e-170],
                  [np.exp(1j), -1, 0]], dtype=complex)
    for fn in ("opnorm_sq", "tetra_norm_sq"):
        a = getattr(_core, fn)(p, backend="cython")
        b = getattr(_core, fn)(p, backend="numpy")
        assert np.all(np.isfinite(a))
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=0)
