import os
import subprocess
import sys

import numpy as np
import pytest

from ou_bounds import _pykernels, kernels


def _random_band(n, seed):
    rng = np.random.default_rng(seed)
    off = rng.uniform(-1, 1, n - 1)
    diag = np.abs(off).sum() + rng.uniform(1, 2, n)  # diagonally dominant, hence invertible
    return diag, off


@pytest.mark.parametrize("n", [1, 2, 5, 300])
def test_tridiag_band_python(n):
    diag, off = _random_band(n, n)
    dense = np.linalg.inv(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
    d, o = _pykernels.tridiag_inverse_band(diag, off)
    assert np.allclose(d, np.diag(dense), rtol=1e-12)
    assert np.allclose(o, np.diag(dense, 1), rtol=1e-12)


def test_ar1_paths_python():
    z = np.random.default_rng(1).standard_normal((3, 6))
    decay = np.full(5, 0.5)
    innov = np.full(5, 0.25)
    x = _pykernels.ar1_paths(z, decay, innov, 2.0)
    want = np.empty_like(z)
    want[:, 0] = 2.0 * z[:, 0]
    for i in range(1, 6):
        want[:, i] = 0.5 * want[:, i - 1] + 0.25 * z[:, i]
    assert np.allclose(x, want, rtol=1e-15)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")
def test_backends_agree():
    from ou_bounds import _ckernels

    diag, off = _random_band(1000, 3)
    for a, b in zip(_ckernels.tridiag_inverse_band(diag, off), _pykernels.tridiag_inverse_band(diag, off)):
        assert np.allclose(a, b, rtol=1e-14, atol=0)
    z = np.random.default_rng(2).standard_normal((50, 200))
    decay = np.random.default_rng(3).uniform(0.1, 0.99, 199)
    innov = np.sqrt(1 - decay**2)
    assert np.allclose(_ckernels.ar1_paths(z, decay, innov, 1.0),
                       _pykernels.ar1_paths(z, decay, innov, 1.0), rtol=1e-14, atol=1e-15)


def test_forced_python_fallback():
    env = dict(os.environ, OU_BOUNDS_PURE_PYTHON="1")
    code = ("from ou_bounds import kernels, distortion_achievable, OuParams, SampleGeometry\n"
            "g = SampleGeometry.equally_spaced(2000)\n"
            "print(kernels.BACKEND, repr(distortion_achievable(OuParams(), g, 0.01)))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, value = out.stdout.split()
    assert backend == "python"
    from ou_bounds import OuParams, SampleGeometry, distortion_achievable
    here = distortion_achievable(OuParams(), SampleGeometry.equally_spaced(2000), 0.01)
    assert float(value) == pytest.approx(here, rel=1e-13)
