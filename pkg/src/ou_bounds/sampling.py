"""Reconstruction of the process from noiseless equally spaced samples.

Two linear-algebra paths compute the same MMSE quantities:

* ``dense``: Cholesky factorisation of the full sample covariance.
* ``markov``: the OU process is Markov, so the conditional mean at ``t`` only
  involves the two sensors bracketing ``t`` and the sample precision matrix
  is tridiagonal.  Everything is O(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import ConfigError, FactorizationError
from .ou import OuParams, autocorrelation, sample_paths

#: ``method="auto"`` switches from the dense to the Markov path above this N.
DENSE_MAX_N = 1024
DEFAULT_QUAD_ORDER = 16
CHUNK_NODES = 8192


@dataclass(frozen=True)
class SampleGeometry:
    """Sensor positions; build with :meth:`equally_spaced`."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 1 or pos.size < 2:
            raise ConfigError("need at least two sensors (N >= 2)")
        if pos[0] != 0.0 or np.any(np.diff(pos) <= 0):
            raise ConfigError("positions must start at 0 and be strictly increasing")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @classmethod
    def equally_spaced(cls, n: int, t0: float = 1.0) -> "SampleGeometry":
        if int(n) != n or n < 2:
            raise ConfigError(f"N must be an integer >= 2, got {n!r}")
        pos = np.linspace(0.0, t0, int(n))
        pos[-1] = t0
        return cls(pos)

    @property
    def n(self) -> int:
        return self.positions.size

    @property
    def t0(self) -> float:
        return float(self.positions[-1])

    @property
    def spacing(self) -> float:
        return self.t0 / (self.n - 1)


def check_geometry(p: OuParams, g: SampleGeometry) -> None:
    if not math.isclose(g.t0, p.t0, rel_tol=1e-12):
        raise ConfigError(f"geometry spans [0, {g.t0}] but the process lives on [0, {p.t0}]")


def choose_method(method: str, n: int) -> str:
    if method == "auto":
        return "dense" if n <= DENSE_MAX_N else "markov"
    if method not in ("dense", "markov"):
        raise ConfigError(f"unknown linear-algebra method {method!r}")
    return method


def covariance_matrix(p: OuParams, positions) -> np.ndarray:
    positions = np.asarray(positions, dtype=float)
    return autocorrelation(p, positions[:, None] - positions[None, :])


def precision_band(p: OuParams, positions) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the inverse sample covariance.

    Follows from writing the samples as an AR(1) chain with step
    correlations ``r_i = exp(-eta * (t_{i+1} - t_i))``.
    """
    positions = np.asarray(positions, dtype=float)
    dt = np.diff(positions)
    r = np.exp(-p.eta * dt)
    one_minus_r2 = -np.expm1(-2.0 * p.eta * dt)
    c0 = p.variance
    inv_step = 1.0 / (c0 * one_minus_r2)
    diag = np.empty(positions.size)
    diag[0] = inv_step[0]
    diag[-1] = inv_step[-1]
    diag[1:-1] = inv_step[:-1] + r[1:] ** 2 * inv_step[1:]
    off = -r * inv_step
    return diag, off


@dataclass(frozen=True, eq=False)
class CovarianceSystem:
    """Sample covariance with its Cholesky factor, reusable for many solves."""

    params: OuParams
    positions: np.ndarray
    matrix: np.ndarray
    factor: tuple

    @classmethod
    def from_positions(cls, p: OuParams, positions) -> "CovarianceSystem":
        positions = np.asarray(positions, dtype=float)
        matrix = covariance_matrix(p, positions)
        try:
            factor = scipy.linalg.cho_factor(matrix, lower=True, check_finite=True)
        except np.linalg.LinAlgError as exc:
            raise FactorizationError(
                f"sample covariance is not positive definite ({exc}); "
                "duplicate or nearly coincident sensor positions?",
                module="sampling-mmse",
            ) from exc
        # cho_factor succeeds on some numerically singular matrices; catch those too
        diag = np.abs(np.diag(factor[0]))
        if diag.min() <= 1e-7 * diag.max():
            raise FactorizationError(
                "sample covariance is numerically singular; duplicate sensor positions?",
                module="sampling-mmse",
            )
        return cls(p, positions, matrix, factor)

    @property
    def n(self) -> int:
        return self.positions.size

    def solve(self, rhs) -> np.ndarray:
        return scipy.linalg.cho_solve(self.factor, rhs, check_finite=False)

    def cross_covariance(self, t) -> np.ndarray:
        """Matrix with columns rho_N(t) for each entry of ``t``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return autocorrelation(self.params, self.positions[:, None] - t[None, :])


def build_covariance(p: OuParams, g: SampleGeometry) -> CovarianceSystem:
    return CovarianceSystem.from_positions(p, g.positions)


@lru_cache(maxsize=32)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def gap_quadrature(positions, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on every sensor gap, shape (N-1, order)."""
    if int(order) != order or order < 2:
        raise ConfigError(f"quadrature order must be an integer >= 2, got {order!r}")
    positions = np.asarray(positions, dtype=float)
    x, w = _legendre(int(order))
    left = positions[:-1, None]
    width = np.diff(positions)[:, None]
    return left + width * x[None, :], width * w[None, :]


def bridge_weights(p: OuParams, positions, nodes) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Two-sensor conditional-mean weights and residual variance on every gap.

    ``nodes`` has shape (N-1, q), row ``i`` lying inside gap ``i``.  Returns
    ``(w_left, w_right, residual)`` of the same shape.
    """
    positions = np.asarray(positions, dtype=float)
    a = nodes - positions[:-1, None]
    b = positions[1:, None] - nodes
    gap = (a + b)
    eta = p.eta
    denom = -np.expm1(-2.0 * eta * gap)
    one_a = -np.expm1(-2.0 * eta * a)
    one_b = -np.expm1(-2.0 * eta * b)
    w_left = np.exp(-eta * a) * one_b / denom
    w_right = np.exp(-eta * b) * one_a / denom
    residual = p.variance * one_a * one_b / denom
    return w_left, w_right, residual


def _dense_residuals(system: CovarianceSystem, nodes: np.ndarray) -> np.ndarray:
    flat = nodes.ravel()
    out = np.empty_like(flat)
    c0 = system.params.variance
    for start in range(0, flat.size, CHUNK_NODES):
        t = flat[start:start + CHUNK_NODES]
        rho = system.cross_covariance(t)
        out[start:start + t.size] = c0 - np.einsum("ij,ij->j", rho, system.solve(rho))
    return out.reshape(nodes.shape)


def mmse_residuals(p: OuParams, g: SampleGeometry, quad_order: int = DEFAULT_QUAD_ORDER,
                   method: str = "auto") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Residual variance ``C(0) - rho^T Sigma^-1 rho`` at the quadrature nodes.

    Returns ``(nodes, weights, residual)``, each of shape (N-1, quad_order).
    """
    check_geometry(p, g)
    nodes, weights = gap_quadrature(g.positions, quad_order)
    if choose_method(method, g.n) == "dense":
        residual = _dense_residuals(build_covariance(p, g), nodes)
    else:
        residual = bridge_weights(p, g.positions, nodes)[2]
    return nodes, weights, residual


def distortion_from_samples(p: OuParams, g: SampleGeometry, quad_order: int = DEFAULT_QUAD_ORDER,
                            method: str = "auto") -> float:
    """Time-averaged MMSE of reconstructing the process from its N samples."""
    _, weights, residual = mmse_residuals(p, g, quad_order, method)
    return math.fsum((weights * residual).ravel()) / g.t0


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    std_error: float
    trials: int
    #: largest |S(t_k) - S_hat(t_k)| at the sensors over all trials
    max_sensor_error: float


def monte_carlo_distortion(p: OuParams, g: SampleGeometry, trials: int = 2000,
                           quad_order: int = DEFAULT_QUAD_ORDER, seed: int = 42,
                           batch: int = 256) -> MonteCarloResult:
    """Empirical reconstruction distortion over independent exact OU paths.

    Each trial draws a path on sensors plus quadrature nodes with its own
    ``SeedSequence`` child of ``seed``, reconstructs with the linear MMSE
    estimator and integrates the squared error with the same quadrature as
    :func:`distortion_from_samples`.
    """
    if trials < 100:
        raise ConfigError(f"trials must be >= 100, got {trials}")
    check_geometry(p, g)
    system = build_covariance(p, g)
    nodes, weights = gap_quadrature(g.positions, quad_order)
    nodes, weights = nodes.ravel(), weights.ravel()

    grid = np.concatenate([g.positions, nodes])
    order = np.argsort(grid, kind="stable")
    where = np.empty_like(order)
    where[order] = np.arange(order.size)
    sensor_idx = where[:g.n]
    node_idx = where[g.n:]

    # conditional-mean weights, rows indexed by reconstruction point
    kriging_nodes = system.solve(system.cross_covariance(nodes)).T
    kriging_sensors = system.solve(system.matrix).T

    children = np.random.SeedSequence(seed).spawn(trials)
    scores = np.empty(trials)
    max_sensor_error = 0.0
    for start in range(0, trials, batch):
        chunk = children[start:start + batch]
        z = np.stack([np.random.default_rng(c).standard_normal(grid.size) for c in chunk])
        paths = sample_paths(p, grid[order], z)
        samples = paths[:, sensor_idx]
        err = paths[:, node_idx] - samples @ kriging_nodes.T
        scores[start:start + len(chunk)] = (err**2) @ weights / g.t0
        sensor_err = np.abs(samples - samples @ kriging_sensors.T).max()
        max_sensor_error = max(max_sensor_error, float(sensor_err))
    return MonteCarloResult(
        mean=float(scores.mean()),
        std_error=float(scores.std(ddof=1) / math.sqrt(trials)),
        trials=trials,
        max_sensor_error=max_sensor_error,
    )
