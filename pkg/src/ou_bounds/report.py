"""Sweeps over N, scaling-law fits and the regime comparison table."""

from __future__ import annotations

import csv
import io
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .achievable import upper_bound_applicable, upper_bound_distortion, validity_window
from .capacity import (
    NetworkConfig,
    PowerLaw,
    RegimeLabel,
    capacity_achievable,
    capacity_upper,
    classify_regime,
)
from .errors import ConfigError, OuBoundsError
from .ou import OuParams
from .ratedist import lower_bound_distortion, lower_sequence
from .sampling import DEFAULT_QUAD_ORDER, SampleGeometry, distortion_from_samples

log = logging.getLogger(__name__)

CSV_HEADER = ["N", "P_N", "regime", "D_s", "C_u", "D_p_prime", "D_l", "C_a", "D_u", "window_valid"]
DEFAULT_N_GRID = [2**k for k in range(3, 13)]
THREADS_ENV = "OU_BOUNDS_THREADS"


@dataclass(frozen=True)
class BoundsRow:
    n: int
    p_of_n: float
    log_np: float
    regime: RegimeLabel
    d_s: float
    c_u: float
    d_p_prime: float
    d_l: float
    c_a: float | None
    d_u: float | None
    window_valid: bool
    theta_a: float | None = None
    error: str | None = None


def _failed_row(n, pl, alpha, message) -> BoundsRow:
    nan = float("nan")
    return BoundsRow(n, nan, nan, classify_regime(pl, alpha), nan, nan, nan, nan, None, None,
                     False, error=message)


def compute_row(p: OuParams, pl: PowerLaw, h: float, alpha: float, n: int,
                quad_order: int = DEFAULT_QUAD_ORDER, method: str = "auto") -> BoundsRow:
    cfg = NetworkConfig(n, pl, h, alpha)
    g = SampleGeometry.equally_spaced(n, p.t0)
    d_s = distortion_from_samples(p, g, quad_order, method)
    c_u = capacity_upper(cfg)
    # zero capacity leaves the water level at the top eigenvalue
    d_p = lower_bound_distortion(p, c_u) if c_u > 0 else lower_sequence(p).total()[0] / p.t0
    rate = capacity_achievable(cfg)
    window_valid = upper_bound_applicable(pl, alpha) and validity_window(p, n).theta_nonempty
    ub = upper_bound_distortion(cfg, p, quad_order, method, d_s=d_s)
    return BoundsRow(
        n=n,
        p_of_n=cfg.p_of_n if pl.log_value(n) < 700 else math.inf,
        log_np=pl.log_np(n),
        regime=classify_regime(pl, alpha),
        d_s=d_s,
        c_u=c_u,
        d_p_prime=d_p,
        d_l=max(d_s, d_p),
        c_a=rate.rate if rate.applicable else None,
        d_u=ub.d_u if ub.applicable else None,
        window_valid=window_valid,
        theta_a=ub.theta,
    )


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0")
    return value or (os.cpu_count() or 1)


def sweep(p: OuParams, pl: PowerLaw, h: float = 1.0, alpha: float = 2.0, n_grid=None,
          quad_order: int = DEFAULT_QUAD_ORDER, method: str = "auto",
          threads: int | None = None) -> list[BoundsRow]:
    """One :class:`BoundsRow` per N, in grid order.

    A numerical failure at one N is recorded in that row's ``error`` field
    and does not stop the sweep.
    """
    n_grid = list(DEFAULT_N_GRID if n_grid is None else n_grid)
    if not n_grid:
        raise ConfigError("empty N grid")
    if any(int(n) != n or n < 2 for n in n_grid):
        raise ConfigError("every N in the grid must be an integer >= 2")
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ConfigError("N grid must be strictly ascending")
    NetworkConfig(n_grid[0], pl, h, alpha)  # validate once, up front

    def one(n):
        try:
            return compute_row(p, pl, h, alpha, int(n), quad_order, method)
        except (OuBoundsError, ArithmeticError, np.linalg.LinAlgError) as exc:
            log.warning("row N=%d failed: %s", n, exc)
            return _failed_row(int(n), pl, alpha, str(exc))

    workers = min(threads or _threads(), len(n_grid))
    if workers <= 1:
        return [one(n) for n in n_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, n_grid))


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(value)
    return format(float(value), ".12g")


def write_csv(rows, out) -> None:
    """Write rows to a path or text stream using the fixed header."""
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", newline="") as fh:
            write_csv(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            _fmt(r.n), _fmt(r.p_of_n), str(r.regime), _fmt(r.d_s), _fmt(r.c_u),
            _fmt(r.d_p_prime), _fmt(r.d_l), _fmt(r.c_a), _fmt(r.d_u), _fmt(r.window_valid),
        ])


def to_csv(rows) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class ScalingFit:
    model: str
    target: str
    slope: float
    intercept: float
    r_squared: float
    n_range: tuple[int, int]
    #: max/min of d * log(N P(N)) over the rows (log-NP model only)
    ratio_max_min: float | None = None
    degenerate: bool = False


def _ols(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    syy = np.sum((y - ym) ** 2)
    if sxx == 0:
        raise ConfigError("fit needs at least two distinct abscissae")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    if syy <= 1e-28 * max(1.0, np.sum(y**2)):
        return 0.0, float(ym), float("nan"), True
    resid = y - (intercept + slope * x)
    r2 = 1.0 - np.sum(resid**2) / syy
    return float(slope), float(intercept), float(min(1.0, max(0.0, r2))), False


def fit_scaling(rows, target: str = "d_s") -> ScalingFit:
    """Least-squares scaling fit of one column of a sweep.

    ``d_s`` is fitted as a power of N (slope of log d_s against log N).  ``d_l``
    and ``d_u`` are fitted against log(N P(N)): slope of log d against
    log log(N P(N)), together with the spread of ``d * log(N P(N))``.
    """
    if target not in ("d_s", "d_l", "d_u"):
        raise ConfigError(f"unknown fit target {target!r}")
    pts = [(r, getattr(r, target)) for r in rows
           if getattr(r, target) is not None and math.isfinite(getattr(r, target))]
    if target != "d_s":
        pts = [(r, d) for r, d in pts if r.log_np > 0]
    if len(pts) < 4:
        raise ConfigError(f"fit of {target} needs at least 4 usable rows, got {len(pts)}")
    ns = [r.n for r, _ in pts]
    d = np.array([v for _, v in pts])
    if target == "d_s":
        slope, icpt, r2, degen = _ols(np.log(ns), np.log(d))
        return ScalingFit("InversePowerOfN", target, slope, icpt, r2, (min(ns), max(ns)),
                          degenerate=degen)
    log_np = np.array([r.log_np for r, _ in pts])
    slope, icpt, r2, degen = _ols(np.log(log_np), np.log(d))
    scaled = d * log_np
    return ScalingFit("InverseLogNP", target, slope, icpt, r2, (min(ns), max(ns)),
                      ratio_max_min=float(scaled.max() / scaled.min()), degenerate=degen)


@dataclass(frozen=True)
class RegimeRow:
    power: PowerLaw
    regime: RegimeLabel
    lower_order: str
    upper_order: str
    bounds_meet: bool | None
    rationale: str


_REGIME_TEXT = {
    RegimeLabel.VERY_LARGE: (
        "N^-1", "n/a", None,
        "channel is effectively perfect; the lower bound is the sampling error, "
        "no matching upper bound is available here"),
    RegimeLabel.LARGE: (
        "(log N P(N))^-1", "n/a", None,
        "lower bound from the channel capacity; the upper-bound analysis does not cover this range"),
    RegimeLabel.MEDIUM: (
        "(log N P(N))^-1", "(log N P(N))^-1", True,
        "separation-based scheme matches the lower bound in order"),
    RegimeLabel.SMALL: (
        "(log N P(N))^-1", "1", False,
        "cooperative rate stays bounded so the achievable distortion is constant, "
        "while the capacity-based lower bound still decays"),
    RegimeLabel.VERY_SMALL: (
        "1", "1", True,
        "N P(N) does not grow; both bounds are constant"),
}


def regime_table(p: OuParams, pl_list, alpha: float = 2.0) -> list[RegimeRow]:
    """Per power law: region, order of both bounds and whether they meet."""
    out = []
    for pl in pl_list:
        regime = classify_regime(pl, alpha)
        lower, upper, meet, why = _REGIME_TEXT[regime]
        out.append(RegimeRow(pl, regime, lower, upper, meet, why))
    return out


def format_regime_table(table) -> str:
    head = ("P(N)", "regime", "lower order", "upper order", "meet")
    lines = [head]
    for row in table:
        meet = {True: "yes", False: "no", None: "unknown"}[row.bounds_meet]
        lines.append((row.power.describe(), str(row.regime), row.lower_order, row.upper_order, meet))
    widths = [max(len(line[i]) for line in lines) for i in range(len(head))]
    text = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in lines]
    text.extend(f"  {row.power.describe()}: {row.rationale}" for row in table)
    return "\n".join(text)
