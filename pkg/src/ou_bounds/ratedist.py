"""Reverse waterfilling on an eigenvalue sequence.

Rates are in nats.  For a water level ``theta`` the rate is the sum of
``0.5 * log(lambda_k / theta)`` over eigenvalues above the water and the
distortion is ``(1/T0) * sum min(theta, lambda_k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ConvergenceError
from .ou import EigenSequence, OuParams, lower_sequence, upper_sequence

DEFAULT_TOL = 1e-10
MAX_ITER = 200
#: explicit terms summed past the active set before the tail bracket takes over
_EXTRA_TERMS = 4096


@dataclass(frozen=True)
class WaterfillPoint:
    theta: float
    rate: float
    distortion: float
    #: width of the analytic bracket on the infinite tail sum (0 for finite spectra)
    tail_width: float = 0.0


def _check_theta(theta):
    if not (theta > 0 and math.isfinite(theta)):
        raise ConfigError(f"water level must be positive and finite, got {theta!r}")


def active_count(seq: EigenSequence, theta: float) -> int:
    """Number of leading indices ``k`` with ``lambda_k > theta``.

    Head entries are scanned directly; in the tail ``coef/(k+shift)^2 > theta``
    is solved in closed form and nudged by one step to absorb rounding.
    """
    head = seq.values
    above = np.nonzero(head > theta)[0]
    if above.size == 0:
        return 0
    last = int(above[-1]) + 1
    if last < seq.head_size or seq.tail is None:
        return last
    tail = seq.tail
    k = max(math.ceil(math.sqrt(tail.coef / theta) - tail.shift), seq.head_size)
    while k > seq.head_size and tail.value(k - 1) <= theta:
        k -= 1
    while tail.value(k) > theta:
        k += 1
    return k


def _values(seq: EigenSequence, start: int, stop: int) -> np.ndarray:
    """Eigenvalues with indices in ``[start, stop)``."""
    parts = []
    if start < seq.head_size:
        parts.append(seq.values[start:min(stop, seq.head_size)])
    if stop > seq.head_size and seq.tail is not None:
        parts.append(seq.tail.value(np.arange(max(start, seq.head_size), stop)))
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)


def rate_of_theta(seq: EigenSequence, theta: float) -> float:
    """Rate R(theta) in nats; zero once theta reaches the largest eigenvalue."""
    _check_theta(theta)
    m = active_count(seq, theta)
    if m == 0:
        return 0.0
    lam = _values(seq, 0, m)
    lam = lam[lam > theta]
    return 0.5 * math.fsum(np.log(lam / theta))


def waterfill_point(seq: EigenSequence, theta: float, t0: float) -> WaterfillPoint:
    _check_theta(theta)
    m = active_count(seq, theta)
    if seq.tail is None:
        lam = seq.values
        dist = math.fsum(np.minimum(lam, theta))
        width = 0.0
    else:
        stop = max(m, seq.head_size) + _EXTRA_TERMS
        lam = _values(seq, 0, stop)
        tail_mid, width = seq.tail.sum_from(stop)
        dist = math.fsum(np.minimum(lam, theta)) + tail_mid
    return WaterfillPoint(theta, rate_of_theta(seq, theta), dist / t0, width / t0)


def distortion_of_theta(seq: EigenSequence, theta: float, t0: float) -> float:
    """Distortion D(theta); infinite tails are summed analytically."""
    return waterfill_point(seq, theta, t0).distortion


def bisect_log_decreasing(func, target: float, lo: float, hi: float, tol: float, module: str) -> float:
    """Bisection on ``log(theta)`` for a strictly decreasing ``func``.

    Requires ``func(lo) > target > func(hi)``; returns once the rate residual
    is within ``tol * target``.
    """
    log_lo, log_hi = math.log(lo), math.log(hi)
    for _ in range(MAX_ITER):
        mid = 0.5 * (log_lo + log_hi)
        theta = math.exp(mid)
        value = func(theta)
        if abs(value - target) <= tol * target:
            return theta
        if value > target:
            log_lo = mid
        else:
            log_hi = mid
        if log_hi - log_lo < 1e-15 * max(1.0, abs(mid)):
            break
    raise ConvergenceError(
        f"bisection for rate {target!r} stalled; tolerance {tol!r} too tight for float precision",
        module=module,
    )


def theta_of_rate(seq: EigenSequence, rate: float, tol: float = DEFAULT_TOL) -> float:
    """Inverse of :func:`rate_of_theta` on ``(0, lambda_0]``."""
    if not (rate > 0 and math.isfinite(rate)):
        raise ConfigError(f"rate must be positive and finite, got {rate!r}")
    hi = seq.largest
    lo = hi
    while rate_of_theta(seq, lo) <= rate:
        lo /= 16.0
        if lo < 1e-300:
            raise ConvergenceError("could not bracket the water level", module="rate-distortion")
    return bisect_log_decreasing(lambda th: rate_of_theta(seq, th), rate, lo, hi, tol, "rate-distortion")


def lower_bound_distortion(p: OuParams, capacity: float, sequence: str = "lower",
                           tol: float = DEFAULT_TOL) -> float:
    """Distortion-rate value D(theta(C)) evaluated on a bounding eigenvalue sequence.

    ``sequence="lower"`` (the default) uses lambda'_k, which yields a valid
    lower bound on the true distortion-rate function; ``"upper"`` uses
    lambda''_k for comparison.
    """
    if not (capacity > 0 and math.isfinite(capacity)):
        raise ConfigError(f"capacity must be positive and finite, got {capacity!r}")
    if sequence == "lower":
        seq = lower_sequence(p)
    elif sequence == "upper":
        seq = upper_sequence(p)
    else:
        raise ConfigError(f"sequence must be 'lower' or 'upper', got {sequence!r}")
    return distortion_of_theta(seq, theta_of_rate(seq, capacity, tol), p.t0)


def holding_edge(values, holds, keep: str) -> float | None:
    """Edge of the region on a sorted grid where an inequality holds throughout.

    ``keep="above"`` returns the smallest grid value from which every larger
    grid value satisfies ``holds``; ``keep="below"`` returns the largest value
    below which every grid value does.  ``None`` if no such point exists.
    """
    values = list(values)
    holds = list(holds)
    if keep == "above":
        best = None
        for v, ok in zip(reversed(values), reversed(holds)):
            if not ok:
                break
            best = v
        return best
    if keep == "below":
        best = None
        for v, ok in zip(values, holds):
            if not ok:
                break
            best = v
        return best
    raise ValueError("keep must be 'above' or 'below'")
