"""Regenerate the bundled calibration datasets and scenarios.

The per-country and per-day source tables are not public, so the bundled
files are built backwards from published aggregates:

* network series: one row per day for 2016 and 2020, scaled so the yearly
  lower/upper energy sums land on the published annual totals;
* country profiles: a single pseudo-country ("ZZ") holding the weighted
  averages;
* adoption curves: 36 synthetic logistic S-curves (NOT historical data).

Run from the repository root:  python scripts/make_fixtures.py
"""

from __future__ import annotations

import datetime as dt
import json
import math
from pathlib import Path

from chainprint.ingest import (
    AdoptionCurveSet,
    AdoptionPoint,
    CountryProfile,
    CountryProfileTable,
    HardwareCatalog,
    NetworkDay,
    NetworkDaySeries,
    TransactionSeries,
    write_adoption_curves,
    write_country_profiles,
    write_hardware_catalog,
    write_network_series,
    write_transaction_series,
)
from chainprint.projection import adoption_quantiles, calibrate_current_fraction
from chainprint.units import HardwareSpec

DATA = Path(__file__).resolve().parents[1] / "src" / "chainprint" / "data"

# year -> (lower TWh, lower MtCO2, upper TWh, upper MtCO2)
ETH_TARGETS = {2016: (0.27, 0.13, 0.67, 0.32), 2020: (2.22, 0.96, 11.91, 5.15)}
BTC_TARGETS = {2016: (1.31, 0.63, 5.60, 4.04), 2020: (31.50, 13.61, 56.42, 38.61)}

# Plausible yearly averages; only their products with the derived values matter.
ETH_MARKET = {2016: 10.0, 2020: 307.5429}  # USD/ETH
ETH_HASH = {2016: 4.0e3, 2020: 2.0e5}  # GH/s
ETH_POWER_PRICE = 0.1783  # USD/kWh
ETH_FACTORS = {2016: 0.48, 2020: 0.4323}  # 0.32/0.67 ~ 0.13/0.27 ~ 0.48; 5.15/11.91 ~ 0.4323
ETH_REWARD_SPLIT = (0.80, 0.12, 0.07, 0.01)  # block, fees, uncle, uncle inclusion

BTC_MARKET = {2016: 568.0, 2020: 11100.0}
BTC_HASH = {2016: 1.5e9, 2020: 1.2e11}
BTC_POWER_PRICE = 0.07
BTC_REWARD_SPLIT = (0.95, 0.05, 0.0, 0.0)

POS_ETH_CUMULATIVE_TARGET_GT = 17.0
POS_ETH_UPPER_MT = 0.1348


def _days(year: int) -> list[dt.date]:
    start = dt.date(year, 1, 1)
    n = (dt.date(year + 1, 1, 1) - start).days
    return [start + dt.timedelta(days=i) for i in range(n)]


def _chain(targets, market, hashes, power_price, split, prefix):
    rows = []
    hardware = []
    for year, (lower_twh, _, upper_twh, _) in sorted(targets.items()):
        days = _days(year)
        n = len(days)
        # hash rate ramps 0.8x -> 1.2x of the yearly mean
        ramp = [0.8 + 0.4 * i / (n - 1) for i in range(n)]
        mean_ramp = math.fsum(ramp) / n
        h_mean = hashes[year]
        hash_series = [h_mean * r / mean_ramp for r in ramp]
        efficiency = lower_twh * 1e6 / (math.fsum(hash_series) * 1e-3 * 24)
        hardware.append(
            HardwareSpec(f"{prefix}-calib-{year}", 1000.0, 2000.0, efficiency, year)
        )
        tokens_per_day = upper_twh * 1e6 / n * 1000 * power_price / market[year]
        parts = [tokens_per_day * s for s in split]
        for d, h in zip(days, hash_series):
            rows.append(NetworkDay(d, h, parts[0], parts[1], parts[2], parts[3], market[year]))
    return NetworkDaySeries(tuple(rows)), hardware


def _synthetic_adoption() -> AdoptionCurveSet:
    curves = {}
    for i in range(36):
        midpoint = 15 + 60 * i / 35
        steepness = (0.06, 0.09, 0.12, 0.18)[i % 4]
        start = 0.005 * (i % 3)
        points = []
        for y in range(0, 131):
            f = start + (1 - start) / (1 + math.exp(-steepness * (y - midpoint)))
            points.append(AdoptionPoint(y, round(f, 6)))
        curves[f"synthetic-{i + 1:02d}"] = tuple(points)
    return AdoptionCurveSet(curves)


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)

    write_country_profiles(
        CountryProfileTable((CountryProfile("ZZ", 1.0, 0.1783, 39.5777, 0.4323),)),
        DATA / "pos_eth_profiles.csv",
    )
    write_country_profiles(
        CountryProfileTable((CountryProfile("ZZ", 1.0, ETH_POWER_PRICE, 39.5777, 0.4592),)),
        DATA / "pow_eth_profiles.csv",
    )

    eth, eth_hw = _chain(ETH_TARGETS, ETH_MARKET, ETH_HASH, ETH_POWER_PRICE, ETH_REWARD_SPLIT, "eth")
    btc, btc_hw = _chain(BTC_TARGETS, BTC_MARKET, BTC_HASH, BTC_POWER_PRICE, BTC_REWARD_SPLIT, "btc")
    write_network_series(eth, DATA / "eth_network.csv")
    write_network_series(btc, DATA / "btc_network.csv")
    beacon = [
        HardwareSpec("Jetson TX2", 5.0, 490.64, None, 2017),
        HardwareSpec("Intel Xeon server", 81.0, 2181.72, None, 2019),
    ]
    write_hardware_catalog(HardwareCatalog(tuple(eth_hw + beacon)), DATA / "eth_hardware.csv")
    write_hardware_catalog(HardwareCatalog(tuple(btc_hw)), DATA / "btc_hardware.csv")

    write_transaction_series(
        TransactionSeries((2009, 2020), (31_332.0, 112_559_843.0)), DATA / "btc_transactions.csv"
    )

    adoption = _synthetic_adoption()
    write_adoption_curves(adoption, DATA / "adoption_synthetic.csv")

    median = adoption_quantiles(adoption, 0.5)
    current_fraction = calibrate_current_fraction(
        POS_ETH_UPPER_MT, median, 100, POS_ETH_CUMULATIVE_TARGET_GT, start_offset=5
    )

    eth_scenario = {
        "datasets": {
            "network_series": "eth_network.csv",
            "hardware": "eth_hardware.csv",
            "pow_country_profiles": "pow_eth_profiles.csv",
            "pos_country_profiles": "pos_eth_profiles.csv",
            "adoption": "adoption_synthetic.csv",
            "transactions": "btc_transactions.csv",
        },
        "pow": {
            "factors_by_year": {str(y): f for y, f in ETH_FACTORS.items()},
            "electricity_price_by_year": {str(y): ETH_POWER_PRICE for y in ETH_TARGETS},
        },
        "projection": {
            "model": "adoption",
            "start_year": 2020,
            "horizon_years": 100,
            "baseline_annual_mtco2": POS_ETH_UPPER_MT,
            "adoption": {
                "quantile": 0.5,
                "start_offset": 5,
                "current_fraction": float(f"{current_fraction:.6g}"),
            },
        },
    }
    btc_scenario = {
        "datasets": {"network_series": "btc_network.csv", "hardware": "btc_hardware.csv"},
        "pow": {
            "factors_by_year": {
                str(y): round(t[1] / t[0], 4) for y, t in BTC_TARGETS.items()
            },
            "upper_factors_by_year": {
                str(y): round(t[3] / t[2], 4) for y, t in BTC_TARGETS.items()
            },
            "electricity_price_by_year": {str(y): BTC_POWER_PRICE for y in BTC_TARGETS},
        },
    }
    pow_eth_btc_2020 = ETH_TARGETS[2020][3] + BTC_TARGETS[2020][3]
    logistic_scenario = {
        "datasets": {"transactions": "btc_transactions.csv"},
        "projection": {
            "model": "logistic",
            "start_year": 2020,
            "horizon_years": 100,
            "baseline_annual_mtco2": round(pow_eth_btc_2020, 4),
        },
    }
    for name, doc in (
        ("eth.json", eth_scenario),
        ("btc.json", btc_scenario),
        ("eth_btc_logistic.json", logistic_scenario),
    ):
        (DATA / name).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"median adoption at offset 5: {median.at(5):.4f}, at 55: {median.at(55):.4f}")
    print(f"calibrated current_fraction: {current_fraction:.6g}")


if __name__ == "__main__":
    main()
