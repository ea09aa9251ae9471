"""Proof-of-work energy and carbon bounds.

The lower bound assumes every miner runs the most efficient hardware on the
market; the upper bound is the break-even point where the electricity bill
eats the whole mining revenue.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import (
    MissingFactorError,
    NoHardwareAvailableError,
    NonPositiveEfficiencyError,
    ZeroElectricityPriceError,
)
from .ingest import HardwareCatalog, NetworkDay, NetworkDaySeries
from .units import CarbonQuantity, EmissionFactor, EnergyQuantity, carbon_from_energy

log = logging.getLogger(__name__)

__all__ = [
    "AnnualFootprint",
    "PowDayEstimate",
    "annual_series",
    "best_efficiency_by_year",
    "carbon_from_energy",
    "lower_limit_daily_energy",
    "upper_limit_daily_energy",
]


@dataclass(frozen=True)
class PowDayEstimate:
    date: object
    lower_energy: float  # MWh/day
    upper_energy: float  # MWh/day
    lower_carbon: float  # tCO2/day
    upper_carbon: float  # tCO2/day


@dataclass(frozen=True)
class AnnualFootprint:
    year: int
    bound: str  # "lower" | "upper"
    energy: EnergyQuantity  # TWh
    carbon: CarbonQuantity  # MtCO2
    emission_factor: float


def lower_limit_daily_energy(hash_rate_ghs: float, efficiency_j_per_mh: float) -> float:
    """Daily energy in MWh when the whole hash rate runs on hardware of the given efficiency.

    GH/s x J/MH = kW, hence the 10^-3 to get MW, times 24 h.
    """
    if not efficiency_j_per_mh > 0:
        raise NonPositiveEfficiencyError(
            f"hardware efficiency must be positive, got {efficiency_j_per_mh!r} J/MH"
        )
    if hash_rate_ghs < 0:
        raise ValueError(f"hash rate must be non-negative, got {hash_rate_ghs!r}")
    return hash_rate_ghs * efficiency_j_per_mh * 1e-3 * 24


def upper_limit_daily_energy(
    block_reward: float,
    tx_fees: float,
    uncle_reward: float,
    uncle_incl_reward: float,
    market_price: float,
    electricity_price: float,
) -> float:
    """Break-even daily energy in MWh: revenue (USD/day) divided by the power price."""
    if not electricity_price > 0:
        raise ZeroElectricityPriceError(
            f"electricity price must be positive, got {electricity_price!r} USD/kWh"
        )
    rewards = (block_reward, tx_fees, uncle_reward, uncle_incl_reward, market_price)
    if any(v < 0 for v in rewards):
        raise ValueError("rewards and market price must be non-negative")
    total = block_reward + tx_fees + uncle_reward + uncle_incl_reward
    return total * market_price / electricity_price / 1000


def best_efficiency_by_year(catalog: HardwareCatalog, year: int) -> float:
    """Lowest J/MH among mining hardware released in or before ``year``."""
    candidates = [
        h.efficiency_j_per_mh
        for h in catalog.entries
        if h.efficiency_j_per_mh is not None and h.release_year <= year
    ]
    if not candidates:
        raise NoHardwareAvailableError(f"no mining hardware with known efficiency released by {year}")
    return min(candidates)


def daily_estimate(
    day: NetworkDay,
    efficiency: float,
    electricity_price: float,
    lower_factor: float,
    upper_factor: float,
) -> PowDayEstimate:
    lower = lower_limit_daily_energy(day.hash_rate, efficiency)
    upper = upper_limit_daily_energy(
        day.block_reward,
        day.tx_fees,
        day.uncle_reward,
        day.uncle_incl_reward,
        day.market_price,
        electricity_price,
    )
    # MWh x kg/kWh = t
    return PowDayEstimate(day.date, lower, upper, lower * lower_factor, upper * upper_factor)


def _lookup(mapping: Mapping[int, float], year: int, what: str) -> float:
    try:
        return mapping[year]
    except KeyError:
        raise MissingFactorError(f"no {what} given for {year}") from None


def _year_footprints(
    year: int,
    days: Sequence[NetworkDay],
    efficiency: Optional[float],
    electricity_price: float,
    lower_factor: float,
    upper_factor: float,
) -> list[AnnualFootprint]:
    lower_mwh = []
    upper_mwh = []
    for day in days:
        if efficiency is None:
            lower_mwh.append(0.0)
        else:
            lower_mwh.append(lower_limit_daily_energy(day.hash_rate, efficiency))
        upper_mwh.append(
            upper_limit_daily_energy(
                day.block_reward,
                day.tx_fees,
                day.uncle_reward,
                day.uncle_incl_reward,
                day.market_price,
                electricity_price,
            )
        )
    out = []
    for bound, daily, factor in (
        ("lower", lower_mwh, lower_factor),
        ("upper", upper_mwh, upper_factor),
    ):
        energy = EnergyQuantity(math.fsum(daily), "MWh").to("TWh")
        carbon = carbon_from_energy(energy, EmissionFactor(factor), "MtCO2")
        out.append(AnnualFootprint(year, bound, energy, carbon, factor))
    if out[0].energy.value > out[1].energy.value:
        log.warning(
            "%d: lower bound %.4g TWh exceeds upper bound %.4g TWh",
            year,
            out[0].energy.value,
            out[1].energy.value,
        )
    return out


def _year_task(args: tuple) -> list[AnnualFootprint]:
    return _year_footprints(*args)


def annual_series(
    series: NetworkDaySeries,
    catalog: HardwareCatalog,
    factors_by_year: Mapping[int, float],
    electricity_price_by_year: Mapping[int, float],
    upper_factors_by_year: Optional[Mapping[int, float]] = None,
    jobs: int = 1,
) -> list[AnnualFootprint]:
    """Sum daily lower/upper energy per calendar year and attach carbon.

    ``factors_by_year`` maps year -> kgCO2/kWh. When the upper bound needs a
    different factor (the Bitcoin figures imply one), pass
    ``upper_factors_by_year``; otherwise both bounds share the lower map.

    Returns two rows per year (lower first), energy in TWh and carbon in MtCO2.
    """
    if upper_factors_by_year is None:
        upper_factors_by_year = factors_by_year
    by_year: dict[int, list[NetworkDay]] = {}
    for day in series.rows:
        by_year.setdefault(day.date.year, []).append(day)

    tasks = []
    for year, days in sorted(by_year.items()):
        lower_factor = _lookup(factors_by_year, year, "emission factor")
        upper_factor = _lookup(upper_factors_by_year, year, "upper-bound emission factor")
        price = _lookup(electricity_price_by_year, year, "electricity price")
        # A year of zero hash rate needs no hardware to be defined.
        if all(d.hash_rate == 0 for d in days):
            try:
                efficiency: Optional[float] = best_efficiency_by_year(catalog, year)
            except NoHardwareAvailableError:
                efficiency = None
        else:
            efficiency = best_efficiency_by_year(catalog, year)
        tasks.append((year, tuple(days), efficiency, price, lower_factor, upper_factor))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_year_task, tasks))
    else:
        chunks = [_year_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]
