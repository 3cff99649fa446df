"""Ornstein-Uhlenbeck source: autocorrelation, KL eigenvalue bounds, exact sampling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError

#: Minimum number of explicitly stored eigenvalues before the 1/k^2 tail law.
MIN_HEAD = 64


@dataclass(frozen=True)
class OuParams:
    """Stationary OU process ``dS = -eta S dt + sigma dW`` observed on ``[0, t0]``."""

    sigma: float = 1.0
    eta: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        for name in ("sigma", "eta", "t0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def variance(self) -> float:
        """Stationary variance C(0) = sigma^2 / (2 eta)."""
        return self.sigma**2 / (2.0 * self.eta)

    @property
    def k0(self) -> int:
        """Index where the lower bound switches branches (may be negative)."""
        return math.floor(self.eta**2 * self.t0**2 / math.pi**2 - 0.75)


def autocorrelation(p: OuParams, tau):
    """C(tau) = sigma^2/(2 eta) exp(-eta |tau|). Accepts scalars or arrays."""
    tau = np.abs(tau)
    out = p.variance * np.exp(-p.eta * tau)
    return float(out) if np.ndim(out) == 0 else out


def lambda_prime(p: OuParams, k):
    """Lower bounding sequence for the KL eigenvalues."""
    k = np.asarray(k)
    if np.any(k < 0):
        raise ConfigError("eigenvalue index must be nonnegative")
    st2 = p.sigma**2 * p.t0**2
    head = st2 / ((k + 0.5) ** 2 * math.pi**2 + p.eta**2 * p.t0**2)
    tail = st2 / ((k + 1.0) ** 2 * math.pi**2)
    out = np.where(k <= p.k0, head, tail)
    return float(out) if out.ndim == 0 else out


def lambda_double_prime(p: OuParams, k):
    """Upper bounding sequence for the KL eigenvalues."""
    k = np.asarray(k)
    if np.any(k < 0):
        raise ConfigError("eigenvalue index must be nonnegative")
    flat = p.sigma**2 / p.eta**2
    with np.errstate(divide="ignore"):
        tail = p.sigma**2 * p.t0**2 / ((k - 1.0) ** 2 * math.pi**2)
    out = np.where(k <= 1, flat, tail)
    return float(out) if out.ndim == 0 else out


class SequenceKind(enum.Enum):
    LOWER_PRIME = "lower_prime"
    UPPER_DOUBLE_PRIME = "upper_double_prime"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TailLaw:
    """Analytic tail ``lambda_k = coef / (k + shift)**2`` for every ``k >= start``."""

    coef: float
    shift: float
    start: int

    def value(self, k):
        return self.coef / (np.asarray(k, dtype=float) + self.shift) ** 2

    def sum_from(self, k: int) -> tuple[float, float]:
        """Bracket midpoint and width of ``sum_{j >= k} coef/(j+shift)^2``.

        With ``m = k + shift`` the sum lies in ``[coef/m, coef/(m-1)]``.
        """
        m = k + self.shift
        if m <= 1:
            raise ValueError("tail bracket needs k + shift > 1")
        lo, hi = self.coef / m, self.coef / (m - 1.0)
        return 0.5 * (lo + hi), hi - lo


@dataclass(frozen=True)
class EigenSequence:
    """Ordered eigenvalue sequence: explicit head plus optional 1/k^2 tail.

    ``tail is None`` means the sequence is finite (zero beyond the head),
    which is how empirical spectra of finite matrices are represented.
    """

    kind: SequenceKind
    values: np.ndarray
    tail: TailLaw | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ConfigError("eigenvalue head must be a nonempty 1-d sequence")
        if np.any(~np.isfinite(values)) or np.any(values <= 0):
            raise ConfigError("eigenvalues must be finite and strictly positive")
        if self.kind is not SequenceKind.EMPIRICAL and self.tail is None:
            raise ConfigError(f"{self.kind.value} sequence requires a tail descriptor")
        if self.tail is not None and self.tail.start != values.size:
            raise ConfigError("tail must start right after the head")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def head_size(self) -> int:
        return self.values.size

    @property
    def largest(self) -> float:
        return float(self.values.max())

    def value(self, k: int) -> float:
        if k < self.head_size:
            return float(self.values[k])
        if self.tail is None:
            return 0.0
        return float(self.tail.value(k))

    def total(self, explicit: int = 4096) -> tuple[float, float]:
        """Sum of all eigenvalues (midpoint estimate, bracket width).

        ``explicit`` tail terms are added one by one before the analytic
        bracket closes the sum.
        """
        head = math.fsum(self.values)
        if self.tail is None:
            return head, 0.0
        stop = self.head_size + explicit
        body = math.fsum(self.tail.value(np.arange(self.head_size, stop)))
        mid, width = self.tail.sum_from(stop)
        return head + body + mid, width


def _head_size(p: OuParams) -> int:
    return max(p.k0 + 1, MIN_HEAD)


def lower_sequence(p: OuParams) -> EigenSequence:
    """lambda'_k as an EigenSequence with exact analytic tail."""
    k = _head_size(p)
    head = lambda_prime(p, np.arange(k))
    tail = TailLaw(coef=p.sigma**2 * p.t0**2 / math.pi**2, shift=1.0, start=k)
    return EigenSequence(SequenceKind.LOWER_PRIME, head, tail)


def upper_sequence(p: OuParams) -> EigenSequence:
    """lambda''_k as an EigenSequence with exact analytic tail."""
    k = _head_size(p)
    head = lambda_double_prime(p, np.arange(k))
    tail = TailLaw(coef=p.sigma**2 * p.t0**2 / math.pi**2, shift=-1.0, start=k)
    return EigenSequence(SequenceKind.UPPER_DOUBLE_PRIME, head, tail)


def empirical_sequence(values) -> EigenSequence:
    """Finite spectrum, sorted descending."""
    values = np.sort(np.asarray(values, dtype=float))[::-1]
    return EigenSequence(SequenceKind.EMPIRICAL, values)


def _check_grid(p: OuParams, grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ConfigError("grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) < 0):
        raise ConfigError("grid must be sorted ascending")
    if grid[0] < 0 or grid[-1] > p.t0:
        raise ConfigError(f"grid positions must lie in [0, {p.t0}]")
    return grid


def ar1_coefficients(p: OuParams, grid) -> tuple[np.ndarray, np.ndarray]:
    """Per-step decay ``exp(-eta*dt)`` and innovation std for the exact transition."""
    dt = np.diff(grid)
    decay = np.exp(-p.eta * dt)
    innov = np.sqrt(p.variance * -np.expm1(-2.0 * p.eta * dt))
    return decay, innov


def sample_paths(p: OuParams, grid, normals) -> np.ndarray:
    """Map standard normals of shape ``(trials, len(grid))`` to exact OU paths."""
    grid = _check_grid(p, grid)
    z = np.ascontiguousarray(normals, dtype=float)
    if z.ndim == 1:
        z = z[None, :]
    if z.shape[1] != grid.size:
        raise ConfigError("normals must have one column per grid point")
    decay, innov = ar1_coefficients(p, grid)
    return kernels.ar1_paths(z, decay, innov, math.sqrt(p.variance))


def sample_path(p: OuParams, grid, seed) -> np.ndarray:
    """One exact stationary draw of the process on ``grid``.

    ``seed`` may be an int or a ``numpy.random.SeedSequence``; the same seed
    always yields the same path.
    """
    grid = _check_grid(p, grid)
    rng = np.random.default_rng(seed)
    return sample_paths(p, grid, rng.standard_normal(grid.size))[0]
