"""Separation-based achievable distortion (the upper bound).

The sensors quantise with a distributed rate-distortion code whose sum rate
and distortion are parametrised by a level ``theta_prime`` through the
eigenvalues of the scaled sample covariance ``(T0/(N-1)) Sigma_N``; the sum
rate is matched to the cooperative channel rate ``C_a``.

Markov fast path for the regularised estimator
----------------------------------------------
With ``s = T0/(N-1)``, ``P = Sigma^-1`` (tridiagonal) and ``w(t) = P rho(t)``
(nonzero only on the two sensors bracketing ``t``)::

    rho^T (s Sigma + theta I)^-1 rho = w^T B w,
    B = (s P + theta P^2)^-1 = (Sigma - theta G) / s,   G = (s I + theta P)^-1

so only the tridiagonal band of ``G`` is needed, which is an O(N) recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import kernels
from .capacity import (
    NetworkConfig,
    PowerLaw,
    RegimeLabel,
    achievable_rate_condition,
    capacity_achievable,
    classify_regime,
    compare_growth,
    regime_boundaries,
)
from .errors import ConfigError, ConvergenceError, FactorizationError
from .ou import OuParams, autocorrelation
from .ratedist import DEFAULT_TOL, bisect_log_decreasing
from .sampling import (
    DEFAULT_QUAD_ORDER,
    SampleGeometry,
    choose_method,
    CHUNK_NODES,
    bridge_weights,
    check_geometry,
    covariance_matrix,
    distortion_from_samples,
    gap_quadrature,
    precision_band,
)


@dataclass(frozen=True)
class ScaledSpectrum:
    """Eigenvalues of ``(T0/(N-1)) Sigma_N`` in descending order."""

    n: int
    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.size != self.n or np.any(mu <= 0):
            raise FactorizationError("scaled spectrum must hold N positive eigenvalues",
                                     module="achievable")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)


def _scale(g: SampleGeometry) -> float:
    return g.t0 / (g.n - 1)


def scaled_spectrum(p: OuParams, g: SampleGeometry, method: str = "auto") -> ScaledSpectrum:
    """Eigenvalues of the scaled sample covariance.

    ``dense`` runs a symmetric eigensolver on the full matrix; ``markov``
    inverts the eigenvalues of the tridiagonal precision matrix instead.
    """
    check_geometry(p, g)
    s = _scale(g)
    try:
        if choose_method(method, g.n) == "dense":
            mu = scipy.linalg.eigvalsh(s * covariance_matrix(p, g.positions))
        else:
            diag, off = precision_band(p, g.positions)
            mu = s / scipy.linalg.eigvalsh_tridiagonal(diag, off)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise FactorizationError(f"eigensolver failed: {exc}", module="achievable") from exc
    return ScaledSpectrum(g.n, np.sort(mu)[::-1])


def _check_theta(theta_prime):
    if not (theta_prime > 0 and math.isfinite(theta_prime)):
        raise ConfigError(f"theta' must be positive and finite, got {theta_prime!r}")


def rate_achievable_of_theta(spec: ScaledSpectrum, theta_prime: float) -> float:
    """Sum rate ``sum 0.5 log(1 + mu_k/theta')`` in nats."""
    _check_theta(theta_prime)
    return 0.5 * math.fsum(np.log1p(spec.mu / theta_prime))


def distortion_second_term(spec: ScaledSpectrum, theta_prime: float, t0: float) -> float:
    """Rate-limited distortion: ``(1/T0) sum (1/theta' + 1/mu_k)^-1``."""
    _check_theta(theta_prime)
    mu = spec.mu
    return math.fsum(theta_prime * mu / (theta_prime + mu)) / t0


def theta_achievable_of_rate(spec: ScaledSpectrum, rate: float, tol: float = DEFAULT_TOL) -> float:
    """Inverse of :func:`rate_achievable_of_theta`."""
    if not (rate > 0 and math.isfinite(rate)):
        raise ConfigError(f"rate must be positive and finite, got {rate!r}")
    lo = hi = float(spec.mu[0])
    while rate_achievable_of_theta(spec, hi) >= rate:
        hi *= 16.0
        if hi > 1e300:
            raise ConvergenceError("could not bracket theta'", module="achievable")
    while rate_achievable_of_theta(spec, lo) <= rate:
        lo /= 16.0
        if lo < 1e-300:
            raise ConvergenceError("could not bracket theta'", module="achievable")
    return bisect_log_decreasing(lambda th: rate_achievable_of_theta(spec, th), rate, lo, hi, tol,
                       "achievable")


def _dense_quadratic(p, g, theta_prime, nodes):
    s = _scale(g)
    matrix = s * covariance_matrix(p, g.positions)
    matrix[np.diag_indices_from(matrix)] += theta_prime
    try:
        factor = scipy.linalg.cho_factor(matrix, lower=True)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(str(exc), module="achievable") from exc
    flat = nodes.ravel()
    out = np.empty_like(flat)
    for start in range(0, flat.size, CHUNK_NODES):
        t = flat[start:start + CHUNK_NODES]
        rho = autocorrelation(p, g.positions[:, None] - t[None, :])
        out[start:start + t.size] = np.einsum("ij,ij->j", rho, scipy.linalg.cho_solve(factor, rho))
    return out.reshape(nodes.shape)


def regularized_band(p: OuParams, g: SampleGeometry, theta_prime: float):
    """Diagonal and off-diagonal of ``(s P + theta' P^2)^-1`` in O(N)."""
    s = _scale(g)
    p_diag, p_off = precision_band(p, g.positions)
    g_diag, g_off = kernels.tridiag_inverse_band(s + theta_prime * p_diag, theta_prime * p_off)
    cov_off = autocorrelation(p, np.diff(g.positions))
    return (p.variance - theta_prime * g_diag) / s, (cov_off - theta_prime * g_off) / s


def _markov_quadratic(p, g, theta_prime, nodes):
    b_diag, b_off = regularized_band(p, g, theta_prime)
    wl, wr, _ = bridge_weights(p, g.positions, nodes)
    return (wl**2 * b_diag[:-1, None] + 2.0 * wl * wr * b_off[:, None]
            + wr**2 * b_diag[1:, None])


def distortion_achievable(p: OuParams, g: SampleGeometry, theta_prime: float,
                          quad_order: int = DEFAULT_QUAD_ORDER, method: str = "auto") -> float:
    """Achievable distortion at level theta' (regularised linear reconstruction)."""
    _check_theta(theta_prime)
    check_geometry(p, g)
    nodes, weights = gap_quadrature(g.positions, quad_order)
    if choose_method(method, g.n) == "dense":
        quad = _dense_quadratic(p, g, theta_prime, nodes)
    else:
        quad = _markov_quadratic(p, g, theta_prime, nodes)
    return p.variance - math.fsum((weights * quad).ravel()) / (g.n - 1)


@dataclass(frozen=True)
class ValidityWindow:
    """Finite-N window sequences ``theta_lo = N^-1/2`` and ``theta_hi = 1/log N``.

    ``[r_lo, r_hi]`` is the rate interval over which the theta_a sandwich is
    stated.  At desk-scale N it is usually empty (``r_lo > r_hi``) because the
    constants 8 and 1/4 need ``theta_hi/theta_lo > 1024``.
    """

    n: int
    theta_lo: float
    theta_hi: float
    r_lo: float
    r_hi: float

    @property
    def theta_nonempty(self) -> bool:
        return self.theta_lo < self.theta_hi

    @property
    def rate_nonempty(self) -> bool:
        return self.r_lo < self.r_hi

    def contains_theta(self, theta_prime: float) -> bool:
        return self.theta_lo <= theta_prime <= self.theta_hi


def validity_window(p: OuParams, n: int) -> ValidityWindow:
    if n < 2:
        raise ConfigError("validity window needs N >= 2")
    lo, hi = n ** -0.5, 1.0 / math.log(n)
    scale = p.sigma * p.t0 / math.pi
    return ValidityWindow(n, lo, hi, 8.0 * scale / math.sqrt(hi), scale / (4.0 * math.sqrt(lo)))


def upper_bound_applicable(pl: PowerLaw, alpha: float) -> bool:
    """N P(N) grows slower than exp(N^1/3) and the cooperative rate grows."""
    below = compare_growth(pl, regime_boundaries(alpha)["exp_cuberoot_over_n"]) < 0
    return below and achievable_rate_condition(pl, alpha)


@dataclass(frozen=True)
class UpperBound:
    applicable: bool
    regime: RegimeLabel
    c_a: float | None = None
    theta: float | None = None
    d_u: float | None = None
    #: sampling term of size 1/N (the noiseless-sample MMSE)
    n_inv_term: float | None = None
    d_b_term: float | None = None
    theta_in_window: bool | None = None
    reason: str = ""

    @property
    def surrogate(self) -> float | None:
        if not self.applicable:
            return None
        return max(self.n_inv_term, self.d_b_term)

    @property
    def surrogate_ratio(self) -> float | None:
        """Exact distortion over the two-term surrogate (empirical O(.) constant)."""
        if not self.applicable:
            return None
        return self.d_u / self.surrogate


def upper_bound_distortion(cfg: NetworkConfig, p: OuParams, quad_order: int = DEFAULT_QUAD_ORDER,
                           method: str = "auto", spectrum: ScaledSpectrum | None = None,
                           tol: float = DEFAULT_TOL, d_s: float | None = None) -> UpperBound:
    """Achievable distortion at the cooperative channel rate, with its decomposition.

    ``spectrum`` and ``d_s`` (the noiseless-sample MMSE) may be passed in when
    the caller already has them.
    """
    regime = classify_regime(cfg.power, cfg.alpha)
    if not upper_bound_applicable(cfg.power, cfg.alpha):
        return UpperBound(False, regime, reason=f"upper bound not available in the {regime} region")
    if int(cfg.n) != cfg.n:
        raise ConfigError("the upper bound needs an integer number of sensors")
    n = int(cfg.n)
    rate = capacity_achievable(cfg)
    if rate.rate <= 0:
        return UpperBound(False, regime, c_a=rate.rate,
                          reason="cooperative rate is zero at this N (N P(N) <= 1)")
    g = SampleGeometry.equally_spaced(n, p.t0)
    spec = spectrum if spectrum is not None else scaled_spectrum(p, g, method)
    theta = theta_achievable_of_rate(spec, rate.rate, tol)
    window = validity_window(p, n)
    return UpperBound(
        applicable=True,
        regime=regime,
        c_a=rate.rate,
        theta=theta,
        d_u=distortion_achievable(p, g, theta, quad_order, method),
        n_inv_term=d_s if d_s is not None else distortion_from_samples(p, g, quad_order, method),
        d_b_term=distortion_second_term(spec, theta, p.t0),
        theta_in_window=window.contains_theta(theta),
    )
