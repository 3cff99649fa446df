"""Channel-side quantities and the five sum-power regions.

Every supported sum-power law has the form

    P(N) = coef * N**power * exp(exp_coef * N**exp_root)

so asymptotic comparisons reduce to lexicographic comparison of the growth
key ``(exp_root, exp_coef, power)``; the positive constant ``coef`` never
changes the order of growth.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import ConfigError, RegimeError

ALPHA_RANGE = (2.0, 6.0)


class AlphaRangeWarning(UserWarning):
    """Path-loss exponent outside the usual [2, 6] range."""


class RegimeLabel(enum.Enum):
    VERY_SMALL = "VerySmall"
    SMALL = "Small"
    MEDIUM = "Medium"
    LARGE = "Large"
    VERY_LARGE = "VeryLarge"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PowerLaw:
    form: str
    coef: float = 1.0
    power: float = 0.0
    exp_coef: float = 0.0
    exp_root: float = 0.0

    def __post_init__(self):
        if not (self.coef > 0 and math.isfinite(self.coef)):
            raise ConfigError(f"power-law coefficient must be positive, got {self.coef!r}")
        if self.exp_coef < 0 or self.exp_root < 0:
            raise ConfigError("exponential growth parameters must be nonnegative")
        for name in ("power", "exp_coef", "exp_root"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    @classmethod
    def constant(cls, p_tot: float = 1.0) -> "PowerLaw":
        return cls("constant", coef=p_tot)

    @classmethod
    def linear_per_node(cls, p_ind: float = 1.0) -> "PowerLaw":
        return cls("linear", coef=p_ind, power=1.0)

    @classmethod
    def power_of_n(cls, coef: float, exponent: float) -> "PowerLaw":
        return cls("power", coef=coef, power=exponent)

    @classmethod
    def exp_root_over_n(cls, root: float, coef: float = 1.0) -> "PowerLaw":
        """``coef * exp(N**root) / N``."""
        return cls("exproot", coef=coef, power=-1.0, exp_coef=1.0, exp_root=root)

    @classmethod
    def general(cls, coef: float = 1.0, power: float = 0.0, exp_coef: float = 0.0,
                exp_root: float = 0.0) -> "PowerLaw":
        return cls("general", coef=coef, power=power, exp_coef=exp_coef, exp_root=exp_root)

    @property
    def has_exponential(self) -> bool:
        return self.exp_coef > 0 and self.exp_root > 0

    @property
    def growth_key(self) -> tuple[float, float, float]:
        if self.has_exponential:
            return (self.exp_root, self.exp_coef, self.power)
        return (0.0, 0.0, self.power)

    def log_value(self, n: float) -> float:
        """log P(N), safe for laws that overflow a double."""
        out = math.log(self.coef) + self.power * math.log(n)
        if self.exp_coef > 0:
            out += self.exp_coef * n**self.exp_root
        return out

    def __call__(self, n: float) -> float:
        return math.exp(self.log_value(n))

    def log_np(self, n: float) -> float:
        """log(N * P(N))."""
        return math.log(n) + self.log_value(n)

    def describe(self) -> str:
        parts = [] if self.coef == 1.0 else [f"{self.coef:g}"]
        if self.power != 0:
            parts.append(f"N^{self.power:g}")
        if self.has_exponential:
            root = "N" if self.exp_root == 1 else f"N^{self.exp_root:g}"
            scale = "" if self.exp_coef == 1 else f"{self.exp_coef:g}*"
            parts.append(f"exp({scale}{root})")
        return "*".join(parts) or "1"


def compare_growth(a: PowerLaw, b: PowerLaw) -> int:
    """-1, 0 or 1 as ``a`` grows slower than, like, or faster than ``b``."""
    ka, kb = a.growth_key, b.growth_key
    return (ka > kb) - (ka < kb)


def regime_boundaries(alpha: float) -> dict[str, PowerLaw]:
    return {
        "exp_n_over_n": PowerLaw.exp_root_over_n(1.0),
        "exp_cuberoot_over_n": PowerLaw.exp_root_over_n(1.0 / 3.0),
        "medium_floor": PowerLaw.power_of_n(1.0, -1.0 / (1.0 + 1.0 / alpha)),
        "inverse_n": PowerLaw.power_of_n(1.0, -1.0),
    }


def classify_regime(pl: PowerLaw, alpha: float = 2.0) -> RegimeLabel:
    """Symbolic five-region classification; a law on a boundary goes to the lower region."""
    _check_alpha(alpha)
    edges = regime_boundaries(alpha)
    if compare_growth(pl, edges["exp_n_over_n"]) > 0:
        return RegimeLabel.VERY_LARGE
    if compare_growth(pl, edges["exp_cuberoot_over_n"]) > 0:
        return RegimeLabel.LARGE
    if compare_growth(pl, edges["medium_floor"]) > 0:
        return RegimeLabel.MEDIUM
    if compare_growth(pl, edges["inverse_n"]) > 0:
        return RegimeLabel.SMALL
    return RegimeLabel.VERY_SMALL


def np_diverges(pl: PowerLaw) -> bool:
    """Whether N * P(N) -> infinity."""
    return pl.has_exponential or pl.power > -1.0


def achievable_rate_condition(pl: PowerLaw, alpha: float) -> bool:
    """Whether ``N * P(N)**(1 + 1/alpha)`` diverges, i.e. the cooperative rate grows."""
    return pl.has_exponential or 1.0 + (1.0 + 1.0 / alpha) * pl.power > 0.0


def log_ratio_limit(pl: PowerLaw) -> float:
    """lim log P(N) / log(N P(N)) as N -> infinity."""
    if pl.has_exponential:
        return 1.0
    if pl.power == -1.0:
        raise RegimeError("log P(N) / log(N P(N)) has no limit when N P(N) is constant")
    return pl.power / (pl.power + 1.0)


def _check_alpha(alpha: float) -> bool:
    """Validate alpha; returns whether it lies in the usual range."""
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha > 0):
        raise ConfigError(f"alpha (path-loss exponent) must be positive, got {alpha!r}")
    lo, hi = ALPHA_RANGE
    if not lo <= alpha <= hi:
        warnings.warn(f"alpha={alpha} is outside the usual path-loss range [{lo:g}, {hi:g}]",
                      AlphaRangeWarning, stacklevel=3)
        return False
    return True


def beta_constant(pl: PowerLaw, alpha: float) -> float:
    _check_alpha(alpha)
    if not achievable_rate_condition(pl, alpha):
        raise RegimeError(
            f"P(N) = {pl.describe()} does not grow fast enough for alpha={alpha}; "
            "the cooperative rate only tends to a constant there, use capacity_achievable"
        )
    limit = log_ratio_limit(pl)
    return (1.0 + limit / alpha) / (4.0 * (1.0 + 1.0 / alpha))


@dataclass(frozen=True)
class NetworkConfig:
    n: float
    power: PowerLaw
    h: float = 1.0
    alpha: float = 2.0

    def __post_init__(self):
        if not (self.n >= 2 and math.isfinite(self.n)):
            raise ConfigError(f"N must be >= 2, got {self.n!r}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ConfigError(f"channel gain h must be positive, got {self.h!r}")
        _check_alpha(self.alpha)

    @property
    def alpha_in_range(self) -> bool:
        return ALPHA_RANGE[0] <= self.alpha <= ALPHA_RANGE[1]

    @property
    def p_of_n(self) -> float:
        return self.power(self.n)


def capacity_upper(cfg: NetworkConfig) -> float:
    """0.5 * log(1 + h^2 N P(N)) in nats."""
    log_snr = 2.0 * math.log(cfg.h) + cfg.power.log_np(cfg.n)
    if log_snr > 30.0:
        return 0.5 * (log_snr + math.log1p(math.exp(-log_snr)))
    return 0.5 * math.log1p(math.exp(log_snr))


@dataclass(frozen=True)
class AchievableRate:
    rate: float
    #: False when the power law is too weak for a growing cooperative rate;
    #: ``rate`` is then reported as 0 rather than an invented constant
    applicable: bool


def capacity_achievable(cfg: NetworkConfig) -> AchievableRate:
    if not achievable_rate_condition(cfg.power, cfg.alpha):
        return AchievableRate(0.0, False)
    beta = beta_constant(cfg.power, cfg.alpha)
    return AchievableRate(max(0.0, beta * cfg.power.log_np(cfg.n)), True)
