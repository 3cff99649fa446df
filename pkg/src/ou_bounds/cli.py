"""Command-line front end.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from dataclasses import dataclass, field

from .capacity import AlphaRangeWarning, NetworkConfig, PowerLaw
from .errors import ConfigError, OuBoundsError
from .ou import OuParams
from .report import DEFAULT_N_GRID, fit_scaling, format_regime_table, regime_table, sweep, write_csv
from .validation import run_all

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "sigma": 1.0,
    "eta": 1.0,
    "t0": 1.0,
    "h": 1.0,
    "alpha": 2.0,
    "power": "constant:1",
    "powers": ["constant:1", "linear:1"],
    "n_grid": DEFAULT_N_GRID,
    "quad_order": 16,
    "trials": 2000,
    "seed": 42,
    "n": 64,
    "method": "auto",
    "out": "bounds.csv",
}


def parse_power(text) -> PowerLaw:
    """``constant:P``, ``linear:P``, ``power:C,E``, ``exproot:R[,C]`` or
    ``general:C,POWER,EXP_COEF,EXP_ROOT``."""
    if isinstance(text, dict):
        try:
            return PowerLaw.general(**text)
        except TypeError as exc:
            raise ConfigError(f"bad power-law object {text!r}: {exc}") from None
    name, _, args = str(text).partition(":")
    try:
        nums = [float(a) for a in args.split(",")] if args else []
    except ValueError:
        raise ConfigError(f"bad power-law arguments in {text!r}") from None
    makers = {
        "constant": (PowerLaw.constant, (0, 1)),
        "linear": (PowerLaw.linear_per_node, (0, 1)),
        "power": (PowerLaw.power_of_n, (2, 2)),
        "exproot": (PowerLaw.exp_root_over_n, (1, 2)),
        "general": (PowerLaw.general, (1, 4)),
    }
    if name not in makers:
        raise ConfigError(f"unknown power law {name!r}; expected one of {', '.join(makers)}")
    maker, (lo, hi) = makers[name]
    if not lo <= len(nums) <= hi:
        raise ConfigError(f"power law {name!r} takes {lo}..{hi} numbers, got {len(nums)}")
    return maker(*nums)


def _parse_grid(value) -> list[int]:
    if isinstance(value, str):
        parts = [v for v in value.split(",") if v.strip()]
    else:
        parts = list(value)
    try:
        grid = [int(v) for v in parts]
    except (TypeError, ValueError):
        raise ConfigError(f"N grid must be a list of integers, got {value!r}") from None
    if not grid:
        raise ConfigError("empty N grid")
    return grid


@dataclass
class RunConfig:
    ou: OuParams
    power: PowerLaw
    h: float
    alpha: float
    n_grid: list
    quad_order: int
    trials: int
    seed: int
    n: int
    method: str
    out_path: str
    powers: list = field(default_factory=list)


def _load_file(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    merged.update(_load_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value

    def number(key, kind=float):
        try:
            return kind(merged[key])
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {merged[key]!r}") from None

    try:
        ou = OuParams(number("sigma"), number("eta"), number("t0"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    powers = merged["powers"]
    if isinstance(powers, str):
        powers = [s for s in powers.split(";") if s.strip()]
    cfg = RunConfig(
        ou=ou,
        power=parse_power(merged["power"]),
        h=number("h"),
        alpha=number("alpha"),
        n_grid=_parse_grid(merged["n_grid"]),
        quad_order=number("quad_order", int),
        trials=number("trials", int),
        seed=number("seed", int),
        n=number("n", int),
        method=str(merged["method"]),
        out_path=str(merged["out"]),
        powers=[parse_power(s) for s in powers],
    )
    NetworkConfig(max(2, cfg.n), cfg.power, cfg.h, cfg.alpha)
    if cfg.quad_order < 2:
        raise ConfigError("quad_order must be >= 2")
    return cfg


def cmd_bounds(cfg: RunConfig) -> int:
    rows = sweep(cfg.ou, cfg.power, cfg.h, cfg.alpha, cfg.n_grid, cfg.quad_order, cfg.method)
    if cfg.out_path == "-":
        write_csv(rows, sys.stdout)
    else:
        write_csv(rows, cfg.out_path)
    failed = [r for r in rows if r.error]
    for r in failed:
        print(f"error at N={r.n}: {r.error}", file=sys.stderr)
    summary = []
    for target in ("d_s", "d_l", "d_u"):
        try:
            fit = fit_scaling(rows, target)
        except ConfigError as exc:
            summary.append(f"{target}: n/a ({exc})")
            continue
        text = f"{target}: slope={fit.slope:.4f} r2={fit.r_squared:.4f}"
        if fit.ratio_max_min is not None:
            text += f" max/min(d*log NP)={fit.ratio_max_min:.3f}"
        summary.append(text)
    dest = "stdout" if cfg.out_path == "-" else cfg.out_path
    print(f"wrote {len(rows)} rows to {dest}; " + "; ".join(summary), file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    if cfg.trials < 100:
        raise ConfigError(f"trials must be >= 100, got {cfg.trials}")
    results = run_all(cfg.ou, cfg.power, cfg.alpha, cfg.n, cfg.trials, cfg.seed, cfg.quad_order)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_NUMERIC


def cmd_regimes(cfg: RunConfig) -> int:
    if not cfg.powers:
        raise ConfigError("empty power-law list")
    print(format_regime_table(regime_table(cfg.ou, cfg.powers, cfg.alpha)))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    for name in ("sigma", "eta", "t0", "h", "alpha"):
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float)
    common.add_argument("--power", help="sum-power law, e.g. constant:1, linear:1, power:1,-2, exproot:0.5")
    common.add_argument("--quad-order", dest="quad_order", type=int)
    common.add_argument("--method", choices=("auto", "dense", "markov"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="ou-bounds", description="Distortion bounds for sensor networks "
                                     "observing an Ornstein-Uhlenbeck process.")
    sub = parser.add_subparsers(dest="command", required=True)
    b = sub.add_parser("bounds", parents=[common], help="sweep N and write the bounds CSV")
    b.add_argument("--n-grid", dest="n_grid", help="comma-separated N values")
    b.add_argument("--out", help="output CSV path, '-' for stdout")
    v = sub.add_parser("validate", parents=[common], help="Monte Carlo and inequality checks")
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--n", type=int, help="number of sensors for the checks")
    r = sub.add_parser("regimes", parents=[common], help="print the regime table")
    r.add_argument("--powers", help="semicolon-separated power laws")
    return parser


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    commands = {"bounds": cmd_bounds, "validate": cmd_validate, "regimes": cmd_regimes}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", AlphaRangeWarning)
            cfg = build_config(args)
            return commands[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OuBoundsError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
