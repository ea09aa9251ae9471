"""Command-line front end.

    chainprint pow          annual PoW energy/carbon bounds
    chainprint pos          PoS lower/upper footprint
    chainprint project      emission + warming projection
    chainprint equilibrium  agent-based staker entry vs closed form
    chainprint fit-logistic fit P0, r0 to a transaction series

Exit codes: 0 success, 1 model/data error, 2 configuration/usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import replace
from typing import Any, Sequence

from . import __version__
from .equilibrium import SimConfig, simulate_equilibrium
from .errors import ChainprintError, ConfigError
from .ingest import (
    load_adoption_curves,
    load_country_profiles,
    load_hardware_catalog,
    load_network_series,
    load_transaction_series,
)
from .pos import pos_bounds, pos_closed_form
from .pow import annual_series
from .projection import (
    adoption_quantiles,
    crossing_year,
    fit_logistic,
    project_adoption_emissions,
    project_logistic_emissions,
    temperature_rise,
)
from .scenario import Scenario, load_scenario
from .weighting import weighted_factors

log = logging.getLogger("chainprint")

POW_COLUMNS = ["year", "bound", "energy_twh", "carbon_mtco2", "emission_factor_kgco2_per_kwh"]
POS_COLUMNS = [
    "bound",
    "hardware",
    "validator_count",
    "annual_return_usd",
    "staker_cost_usd",
    "validators_per_node",
    "node_count",
    "energy_twh",
    "carbon_mtco2",
]
PROJECTION_COLUMNS = [
    "year",
    "annual_mtco2",
    "cumulative_gtco2",
    "dT_low_c",
    "dT_mean_c",
    "dT_high_c",
]
EQUILIBRIUM_COLUMNS = [
    "bound",
    "seed",
    "entry_batch",
    "node_count",
    "validators_per_node",
    "energy_twh",
    "converged",
    "steps_used",
    "closed_form_node_count",
    "relative_error",
]
FIT_COLUMNS = ["K", "P0", "r0", "t0_year", "residual"]


# -- report formatting ----------------------------------------------------------


def _energy(x: float) -> str:
    return f"{x:.4f}"


def _count(x: float) -> str:
    return str(int(round(x)))


def _sig(x: float, digits: int = 6) -> str:
    return f"{x:.{digits}g}"


def _full(x: float) -> str:
    return f"{x:.12g}"


def _emit(
    args: argparse.Namespace,
    columns: list[str],
    rows: list[dict[str, str]],
    extra: dict[str, Any] | None = None,
) -> None:
    if args.format == "json":
        doc: Any = [{k: _jsonable(v) for k, v in r.items()} for r in rows]
        if extra is not None:
            doc = {"rows": doc, **extra}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _jsonable(value: str) -> Any:
    for conv in (int, float):
        try:
            return conv(value)
        except ValueError:
            pass
    if value in ("True", "False"):
        return value == "True"
    return value


# -- commands -----------------------------------------------------------------


def cmd_pow(args: argparse.Namespace, scenario: Scenario) -> int:
    series = load_network_series(scenario.dataset_path("network_series"))
    catalog = load_hardware_catalog(scenario.dataset_path("hardware"))
    cfg = scenario.pow
    factors = cfg.factors_by_year
    prices = cfg.electricity_price_by_year
    if factors is None or prices is None:
        if scenario.datasets.pow_country_profiles is None:
            raise ConfigError(
                "pow needs factors_by_year and electricity_price_by_year, "
                "or datasets.pow_country_profiles"
            )
        w = weighted_factors(load_country_profiles(scenario.dataset_path("pow_country_profiles")))
        years = series.years()
        factors = factors if factors is not None else {y: w.emission_factor for y in years}
        prices = prices if prices is not None else {y: w.electricity_price for y in years}
    results = annual_series(
        series, catalog, factors, prices, cfg.upper_factors_by_year, jobs=args.jobs
    )
    rows = [
        {
            "year": str(r.year),
            "bound": r.bound,
            "energy_twh": _energy(r.energy.value),
            "carbon_mtco2": _energy(r.carbon.value),
            "emission_factor_kgco2_per_kwh": _sig(r.emission_factor),
        }
        for r in results
    ]
    _emit(args, POW_COLUMNS, rows)
    return 0


def _pos_scenario(args: argparse.Namespace, scenario: Scenario):
    base = scenario.pos_scenario()
    overrides = {}
    if args.stake is not None:
        overrides["total_stake"] = args.stake
    if args.price is not None:
        overrides["token_price"] = args.price
    return replace(base, **overrides) if overrides else base


def cmd_pos(args: argparse.Namespace, scenario: Scenario) -> int:
    base = _pos_scenario(args, scenario)
    lower_hw = scenario.pos.lower_hardware.spec()
    upper_hw = scenario.pos.upper_hardware.spec()
    bounds = pos_bounds(lower_hw, upper_hw, base)
    rows = []
    for bound, hw, r in (("lower", lower_hw, bounds.lower), ("upper", upper_hw, bounds.upper)):
        rows.append(
            {
                "bound": bound,
                "hardware": hw.name,
                "validator_count": _sig(r.validator_count, 10),
                "annual_return_usd": _sig(r.annual_return_per_validator),
                "staker_cost_usd": _sig(r.staker_annual_cost),
                "validators_per_node": _sig(r.validators_per_node),
                "node_count": _count(r.node_count),
                "energy_twh": _energy(r.annual_energy.value),
                "carbon_mtco2": _energy(r.annual_carbon.value),
            }
        )
    _emit(args, POS_COLUMNS, rows)
    return 0


def cmd_project(args: argparse.Namespace, scenario: Scenario) -> int:
    cfg = scenario.projection
    model = args.model or cfg.model
    if model == "adoption":
        curves = load_adoption_curves(scenario.dataset_path("adoption"))
        adoption = adoption_quantiles(curves, cfg.adoption.quantile)
        traj = project_adoption_emissions(
            cfg.baseline_annual_mtco2,
            cfg.adoption.current_fraction,
            adoption,
            cfg.horizon_years,
            start_year=cfg.start_year,
            start_offset=cfg.adoption.start_offset,
        )
    else:
        lcfg = cfg.logistic
        traj = project_logistic_emissions(
            cfg.baseline_annual_mtco2,
            lcfg.baseline_tx,
            lcfg.params(),
            cfg.horizon_years,
            start_year=cfg.start_year,
        )
    bands = temperature_rise(traj, scenario.climate.params())
    rows = [
        {
            "year": str(year),
            "annual_mtco2": _full(a),
            "cumulative_gtco2": _full(c),
            "dT_low_c": _full(lo),
            "dT_mean_c": _full(mid),
            "dT_high_c": _full(hi),
        }
        for year, a, c, lo, mid, hi in zip(
            traj.years, traj.annual, traj.cumulative, bands.low, bands.mean, bands.high
        )
    ]
    crossings: dict[str, Any] = {}
    for band in ("low", "mean", "high"):
        series = getattr(bands, band)
        hit = crossing_year(series, traj.start_year, cfg.threshold_c) if series else None
        crossings[band] = None if hit is None else hit.year
    _emit(
        args,
        PROJECTION_COLUMNS,
        rows,
        extra={"model": model, "threshold_c": cfg.threshold_c, "crossing_year": crossings},
    )
    summary = ", ".join(
        f"{band}={'never' if year is None else year}" for band, year in crossings.items()
    )
    print(f"{cfg.threshold_c:g} degC crossing year: {summary}", file=sys.stderr)
    return 0


def cmd_equilibrium(args: argparse.Namespace, scenario: Scenario) -> int:
    base = _pos_scenario(args, scenario)
    hw_cfg = scenario.pos.upper_hardware if args.bound == "upper" else scenario.pos.lower_hardware
    pos_scn = base.with_hardware(hw_cfg.spec())
    outcome = simulate_equilibrium(
        SimConfig(pos_scn, entry_batch=args.batch, max_steps=args.max_steps, seed=args.seed)
    )
    closed, _, _ = pos_closed_form(pos_scn)
    rel = abs(outcome.node_count - closed) / closed if closed else 0.0
    row = {
        "bound": args.bound,
        "seed": str(args.seed),
        "entry_batch": str(args.batch),
        "node_count": str(outcome.node_count),
        "validators_per_node": _sig(outcome.validators_assigned),
        "energy_twh": _energy(outcome.total_energy),
        "converged": str(outcome.converged),
        "steps_used": str(outcome.steps_used),
        "closed_form_node_count": _count(closed),
        "relative_error": _sig(rel, 4),
    }
    _emit(args, EQUILIBRIUM_COLUMNS, [row])
    return 0


def cmd_fit_logistic(args: argparse.Namespace, scenario: Scenario | None) -> int:
    if args.transactions is not None:
        path = args.transactions
    else:
        assert scenario is not None
        path = scenario.dataset_path("transactions")
    try:
        series = load_transaction_series(path)
    except FileNotFoundError:
        raise ConfigError(f"transactions file not found: {path}") from None
    fit = fit_logistic(series, args.K, t0_year=args.t0_year)
    p = fit.params
    row = {
        "K": _full(p.K),
        "P0": _full(p.P0),
        "r0": _full(p.r0),
        "t0_year": str(p.t0_year),
        "residual": _sig(fit.residual, 6),
    }
    _emit(args, FIT_COLUMNS, [row])
    return 0


# -- argument parsing ---------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainprint",
        description="Energy and carbon footprint of PoW/PoS blockchains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--scenario",
        default=None,
        help="scenario JSON file, or a bundled name: eth, btc, eth_btc_logistic (default: eth)",
    )
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--jobs", type=_positive_int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pow", parents=[common], help="annual PoW energy/carbon bounds")
    p.set_defaults(func=cmd_pow)

    for name, func, helptext in (
        ("pos", cmd_pos, "PoS lower/upper footprint"),
        ("equilibrium", cmd_equilibrium, "agent-based staker entry vs closed form"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--stake", type=float, default=None, help="total stake, tokens")
        p.add_argument("--price", type=float, default=None, help="token price, USD")
        p.set_defaults(func=func)
        if name == "equilibrium":
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--batch", type=_positive_int, default=100)
            p.add_argument("--max-steps", type=_positive_int, default=100_000)
            p.add_argument("--bound", choices=["lower", "upper"], default="lower")

    p = sub.add_parser("project", parents=[common], help="emission and warming projection")
    p.add_argument("--model", choices=["adoption", "logistic"], default=None)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("fit-logistic", parents=[common], help="fit P0 and r0 with K fixed")
    p.add_argument("--transactions", default=None, help="transactions CSV (year,transactions)")
    p.add_argument("--K", type=float, default=779.1e9, help="carrying capacity")
    p.add_argument("--t0-year", type=int, default=None, help="calendar year of t=0")
    p.set_defaults(func=cmd_fit_logistic)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "fit-logistic" and args.transactions is not None:
            scenario = None
        else:
            scenario = load_scenario(args.scenario)
        return args.func(args, scenario)
    except ConfigError as exc:
        print(f"chainprint: configuration error: {exc}", file=sys.stderr)
        return 2
    except ChainprintError as exc:
        print(f"chainprint: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"chainprint: configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
