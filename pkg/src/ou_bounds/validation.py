"""Numerical checks behind ``ou-bounds validate``.

Each check returns a :class:`CheckResult`.  Inequalities are scanned on
fixed log grids; thresholds are reported as the edge of the grid region
where the inequality holds throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .achievable import (
    rate_achievable_of_theta,
    scaled_spectrum,
    distortion_second_term,
    theta_achievable_of_rate,
    upper_bound_applicable,
    validity_window,
)
from .capacity import PowerLaw, np_diverges
from .ou import OuParams, lambda_double_prime, lambda_prime, lower_sequence
from .ratedist import distortion_of_theta, holding_edge, theta_of_rate
from .sampling import SampleGeometry, distortion_from_samples, monte_carlo_distortion

PASS, FAIL, SKIP = "pass", "fail", "skip"
GRID_POINTS = 20
SANDWICH_N = 400
SANDWICH_K = 10


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        return f"[{self.status.upper()}] {self.name}: {self.detail}"


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def monte_carlo_check(p: OuParams, n: int, trials: int, seed: int,
                      quad_order: int = 16) -> CheckResult:
    """Empirical MMSE within 3 standard errors of the analytic value."""
    g = SampleGeometry.equally_spaced(n, p.t0)
    analytic = distortion_from_samples(p, g, quad_order)
    mc = monte_carlo_distortion(p, g, trials, quad_order, seed)
    z = abs(mc.mean - analytic) / mc.std_error
    rel_se = mc.std_error / mc.mean
    ok = z <= 3.0 and rel_se < 0.02
    return CheckResult(
        "monte-carlo", _status(ok),
        f"N={n} analytic={analytic:.6g} empirical={mc.mean:.6g} "
        f"({z:.2f} SE, SE/mean={rel_se:.3%}, trials={trials})")


def water_level_floor_scan(p: OuParams, r_max_allowed: float = 100.0) -> tuple[CheckResult, float | None]:
    """theta(R) on the lower sequence against (sigma T0 / (2 pi R))^2."""
    seq = lower_sequence(p)
    rates = np.logspace(-1, 3, GRID_POINTS)
    holds = [theta_of_rate(seq, r) >= (p.sigma * p.t0 / (2 * math.pi * r)) ** 2 for r in rates]
    r_large = holding_edge(rates, holds, keep="above")
    ok = r_large is not None and r_large <= r_max_allowed
    detail = "never holds at the top of the grid" if r_large is None else f"R_large={r_large:.4g}"
    return CheckResult("water-level-floor", _status(ok), detail), r_large


def distortion_floor_scan(p: OuParams) -> tuple[CheckResult, float | None]:
    """D(theta) on the lower sequence against (sigma/pi) sqrt(theta)."""
    seq = lower_sequence(p)
    top = math.log10(float(lambda_prime(p, 0)))
    thetas = np.logspace(top - 8, top, GRID_POINTS)
    holds = [distortion_of_theta(seq, th, p.t0) >= p.sigma / math.pi * math.sqrt(th) for th in thetas]
    theta_small = holding_edge(thetas, holds, keep="below")
    detail = "fails at the smallest grid point" if theta_small is None else f"theta_small={theta_small:.4g}"
    return CheckResult("distortion-floor", _status(theta_small is not None), detail), theta_small


def window_thetas(p: OuParams, n: int, points: int = GRID_POINTS) -> np.ndarray:
    w = validity_window(p, n)
    if not w.theta_nonempty:
        return np.empty(0)
    return np.geomspace(w.theta_lo, w.theta_hi, points)


def level_sandwich_scan(p: OuParams, n: int, points: int = GRID_POINTS) -> CheckResult:
    """theta_a(R) sandwich for rates tied to the theta' window.

    The rates are the images of a theta' grid over the window, plus a log
    grid over the nominal rate interval when that interval is nonempty.
    """
    g = SampleGeometry.equally_spaced(n, p.t0)
    spec = scaled_spectrum(p, g)
    w = validity_window(p, n)
    rates = [rate_achievable_of_theta(spec, th) for th in window_thetas(p, n, points)]
    if w.rate_nonempty:
        rates.extend(np.geomspace(w.r_lo, w.r_hi, points))
    if not rates:
        return CheckResult("level-sandwich", SKIP, f"N={n}: empty window")
    c = p.sigma * p.t0 / math.pi
    bad = []
    for r in rates:
        th = theta_achievable_of_rate(spec, r)
        if not (c / (4 * r)) ** 2 <= th <= (8 * c / r) ** 2:
            bad.append(r)
    detail = f"N={n}: {len(rates) - len(bad)}/{len(rates)} rates inside the sandwich"
    if bad:
        detail += f", first failure R={bad[0]:.4g}"
    return CheckResult("level-sandwich", _status(not bad), detail)


def rate_limited_term_scan(p: OuParams, n: int, points: int = GRID_POINTS) -> CheckResult:
    """D_b(theta') <= (12 sigma / pi) sqrt(theta') over the window."""
    thetas = window_thetas(p, n, points)
    if thetas.size == 0:
        return CheckResult("rate-limited-term", SKIP, f"N={n}: empty window")
    spec = scaled_spectrum(p, SampleGeometry.equally_spaced(n, p.t0))
    ratios = [distortion_second_term(spec, th, p.t0) / (12 * p.sigma / math.pi * math.sqrt(th))
              for th in thetas]
    worst = max(ratios)
    return CheckResult("rate-limited-term", _status(worst <= 1.0),
                       f"N={n}: max D_b / bound = {worst:.3g} over {thetas.size} points")


def eigen_sandwich(p: OuParams, n: int = SANDWICH_N, k_max: int = SANDWICH_K,
                   slack: float = 0.05) -> CheckResult:
    """Leading scaled sample eigenvalues between the two bounding sequences, with slack."""
    mu = scaled_spectrum(p, SampleGeometry.equally_spaced(n, p.t0)).mu[:k_max + 1]
    k = np.arange(mu.size)
    lo = (1 - slack) * lambda_prime(p, k)
    hi = (1 + slack) * lambda_double_prime(p, k)
    inside = (mu >= lo) & (mu <= hi)
    detail = f"N={n}: {int(inside.sum())}/{mu.size} of mu_0..mu_{k_max} inside"
    if not inside.all():
        j = int(np.argmin(inside))
        detail += f", k={j}: mu={mu[j]:.5g} not in [{lo[j]:.5g}, {hi[j]:.5g}]"
    return CheckResult("eigen-sandwich", _status(bool(inside.all())), detail)


def run_all(p: OuParams, pl: PowerLaw, alpha: float, n: int, trials: int, seed: int,
            quad_order: int = 16) -> list[CheckResult]:
    out = [monte_carlo_check(p, n, trials, seed, quad_order)]
    if np_diverges(pl):
        out.append(water_level_floor_scan(p)[0])
        out.append(distortion_floor_scan(p)[0])
    else:
        why = f"N P(N) = N*{pl.describe()} does not grow"
        out += [CheckResult("water-level-floor", SKIP, why), CheckResult("distortion-floor", SKIP, why)]
    if upper_bound_applicable(pl, alpha):
        out.append(level_sandwich_scan(p, n))
        out.append(rate_limited_term_scan(p, n))
    else:
        why = "upper bound not available for this power law"
        out += [CheckResult("level-sandwich", SKIP, why), CheckResult("rate-limited-term", SKIP, why)]
    out.append(eigen_sandwich(p))
    return out
