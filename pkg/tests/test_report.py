import math

import numpy as np
import pytest

from ou_bounds import report
from ou_bounds.achievable import upper_bound_distortion
from ou_bounds.capacity import NetworkConfig, PowerLaw, RegimeLabel, capacity_upper
from ou_bounds.errors import ConfigError, ConvergenceError
from ou_bounds.ou import OuParams, lower_sequence
from ou_bounds.ratedist import lower_bound_distortion
from ou_bounds.report import (
    CSV_HEADER,
    fit_scaling,
    format_regime_table,
    regime_table,
    sweep,
    to_csv,
)
from ou_bounds.sampling import SampleGeometry, distortion_from_samples

P = OuParams()
GRID = [8, 16, 32, 64, 128]


@pytest.fixture(scope="module")
def medium_rows():
    return sweep(P, PowerLaw.constant(1.0), n_grid=GRID)


def test_row_reassembly(medium_rows):
    for r in medium_rows:
        assert r.d_l == max(r.d_s, r.d_p_prime)
        assert r.d_l <= r.d_u * (1 + 1e-9)
        assert r.window_valid
        assert r.regime == RegimeLabel.MEDIUM


def test_monotone_columns(medium_rows):
    d_s = [r.d_s for r in medium_rows]
    d_p = [r.d_p_prime for r in medium_rows]
    c_u = [r.c_u for r in medium_rows]
    assert all(b <= a for a, b in zip(d_s, d_s[1:]))
    assert all(b <= a for a, b in zip(d_p, d_p[1:]))
    assert all(b >= a for a, b in zip(c_u, c_u[1:]))


def test_single_point_matches_direct_calls():
    (row,) = sweep(P, PowerLaw.constant(1.0), n_grid=[32])
    g = SampleGeometry.equally_spaced(32)
    cfg = NetworkConfig(32, PowerLaw.constant(1.0))
    assert row.d_s == distortion_from_samples(P, g)
    assert row.c_u == capacity_upper(cfg)
    assert row.d_p_prime == lower_bound_distortion(P, row.c_u)
    assert row.d_u == upper_bound_distortion(cfg, P).d_u


def test_very_small_regime_flat_lower_bound():
    rows = sweep(P, PowerLaw.power_of_n(1.0, -2.0), n_grid=GRID)
    d_p = np.array([r.d_p_prime for r in rows])
    # capacity shrinks, so the bound climbs toward the full trace instead of decaying
    trace = lower_sequence(P).total()[0] / P.t0
    assert np.all(np.diff(d_p) >= 0)
    assert np.all(d_p >= 0.9 * trace) and np.all(d_p <= trace)
    assert all(r.d_u is None and r.c_a is None and not r.window_valid for r in rows)


def test_csv_schema_and_determinism(medium_rows):
    text = to_csv(medium_rows)
    lines = text.splitlines()
    assert lines[0] == "N,P_N,regime,D_s,C_u,D_p_prime,D_l,C_a,D_u,window_valid"
    assert lines[0].split(",") == CSV_HEADER
    assert len(lines) == len(GRID) + 1
    first = lines[1].split(",")
    assert first[0] == "8" and first[2] == "Medium" and first[-1] == "true"
    assert len(first[3].replace(".", "").lstrip("0").split("e")[0]) <= 12
    again = to_csv(sweep(P, PowerLaw.constant(1.0), n_grid=GRID, threads=1))
    assert again == text


def test_csv_not_applicable_is_empty():
    rows = sweep(P, PowerLaw.power_of_n(1.0, -2.0), n_grid=[8])
    fields = to_csv(rows).splitlines()[1].split(",")
    assert fields[7] == "" and fields[8] == "" and fields[9] == "false"


def test_failed_row_does_not_stop_sweep(monkeypatch):
    real = report.compute_row

    def flaky(p, pl, h, alpha, n, *args):
        if n == 16:
            raise ConvergenceError("synthetic", module="achievable")
        return real(p, pl, h, alpha, n, *args)

    monkeypatch.setattr(report, "compute_row", flaky)
    rows = sweep(P, PowerLaw.constant(1.0), n_grid=[8, 16, 32])
    assert [r.n for r in rows] == [8, 16, 32]
    assert rows[1].error and "achievable" in rows[1].error
    assert rows[0].error is None and rows[2].error is None
    assert to_csv(rows).splitlines()[2].startswith("16,,Medium,,")


@pytest.mark.parametrize("grid", [[], [8, 4], [8, 8], [1, 4], [4.5, 8]])
def test_bad_grids(grid):
    with pytest.raises(ConfigError):
        sweep(P, PowerLaw.constant(1.0), n_grid=grid)


def test_threads_env(monkeypatch):
    monkeypatch.setenv(report.THREADS_ENV, "x")
    with pytest.raises(ConfigError):
        sweep(P, PowerLaw.constant(1.0), n_grid=[8, 16])
    monkeypatch.setenv(report.THREADS_ENV, "2")
    assert len(sweep(P, PowerLaw.constant(1.0), n_grid=[8, 16])) == 2


def test_fit_scaling(medium_rows):
    fit = fit_scaling(medium_rows, "d_s")
    assert fit.model == "InversePowerOfN"
    assert -1.1 < fit.slope < -0.9 and 0.99 < fit.r_squared <= 1.0
    assert fit.n_range == (8, 128)
    fit_l = fit_scaling(medium_rows, "d_l")
    assert fit_l.model == "InverseLogNP" and fit_l.ratio_max_min < 3


def test_fit_degenerate_and_errors(medium_rows):
    const = [r.__class__(**{**r.__dict__, "d_s": 0.5}) for r in medium_rows]
    fit = fit_scaling(const, "d_s")
    assert fit.degenerate and fit.slope == 0.0 and math.isnan(fit.r_squared)
    with pytest.raises(ConfigError):
        fit_scaling(medium_rows[:3], "d_s")
    with pytest.raises(ConfigError):
        fit_scaling(medium_rows, "c_u")


def test_regime_table():
    laws = [PowerLaw.constant(), PowerLaw.power_of_n(1.0, -2.0), PowerLaw.power_of_n(1.0, -0.8),
            PowerLaw.exp_root_over_n(0.5)]
    table = regime_table(P, laws, 2.0)
    assert [(r.regime, r.bounds_meet) for r in table] == [
        (RegimeLabel.MEDIUM, True), (RegimeLabel.VERY_SMALL, True),
        (RegimeLabel.SMALL, False), (RegimeLabel.LARGE, None)]
    assert table[0].lower_order == table[0].upper_order == "(log N P(N))^-1"
    assert table[2].upper_order == "1"
    text = format_regime_table(table)
    assert "Medium" in text and "unknown" in text
