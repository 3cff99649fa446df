"""Pure-Python reference versions of the compiled kernels.

Signatures and results match ``_ckernels`` exactly; these are used when the
extension is not built or ``OU_BOUNDS_PURE_PYTHON`` is set.
"""

import numpy as np


def ar1_paths(z, decay, innov, sd0):
    """Exact AR(1) propagation of standard normals ``z`` (trials x points).

    ``x[:, 0] = sd0 * z[:, 0]`` and ``x[:, i+1] = decay[i] x[:, i] + innov[i] z[:, i+1]``.
    """
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    out[:, 0] = sd0 * z[:, 0]
    for i in range(z.shape[1] - 1):
        out[:, i + 1] = decay[i] * out[:, i] + innov[i] * z[:, i + 1]
    return out


def tridiag_inverse_band(d, e):
    """Diagonal and first off-diagonal of the inverse of a symmetric tridiagonal matrix.

    ``d`` holds the n diagonal entries and ``e`` the n-1 off-diagonal ones.
    The matrix must be positive definite so that no pivot vanishes.
    """
    d = [float(x) for x in d]
    e = [float(x) for x in e]
    n = len(d)
    fwd = [0.0] * n
    bwd = [0.0] * n
    fwd[0] = d[0]
    for i in range(1, n):
        fwd[i] = d[i] - e[i - 1] * e[i - 1] / fwd[i - 1]
    bwd[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        bwd[i] = d[i] - e[i] * e[i] / bwd[i + 1]
    diag = [1.0 / (fwd[i] + bwd[i] - d[i]) for i in range(n)]
    off = [-e[i] * diag[i + 1] / fwd[i] for i in range(n - 1)]
    return np.array(diag), np.array(off)
