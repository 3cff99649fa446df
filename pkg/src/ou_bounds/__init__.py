"""Distortion bounds for dense sensor networks observing an Ornstein-Uhlenbeck process."""

from .achievable import (
    ScaledSpectrum,
    UpperBound,
    ValidityWindow,
    distortion_achievable,
    distortion_second_term,
    rate_achievable_of_theta,
    scaled_spectrum,
    theta_achievable_of_rate,
    upper_bound_distortion,
    validity_window,
)
from .capacity import (
    NetworkConfig,
    PowerLaw,
    RegimeLabel,
    beta_constant,
    capacity_achievable,
    capacity_upper,
    classify_regime,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    FactorizationError,
    NumericalError,
    OuBoundsError,
    RegimeError,
)
from .kernels import BACKEND
from .ou import (
    EigenSequence,
    OuParams,
    autocorrelation,
    empirical_sequence,
    lambda_double_prime,
    lambda_prime,
    lower_sequence,
    sample_path,
    upper_sequence,
)
from .ratedist import distortion_of_theta, lower_bound_distortion, rate_of_theta, theta_of_rate
from .report import BoundsRow, ScalingFit, fit_scaling, regime_table, sweep, to_csv, write_csv
from .sampling import SampleGeometry, distortion_from_samples, monte_carlo_distortion

__version__ = "0.1.0"
