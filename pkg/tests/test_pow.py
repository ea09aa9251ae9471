import datetime as dt
import logging
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainprint.errors import (
    MissingFactorError,
    NoHardwareAvailableError,
    NonPositiveEfficiencyError,
    ZeroElectricityPriceError,
)
from chainprint.ingest import (
    HardwareCatalog,
    NetworkDay,
    NetworkDaySeries,
    load_hardware_catalog,
    load_network_series,
)
from chainprint.pow import (
    annual_series,
    best_efficiency_by_year,
    carbon_from_energy,
    lower_limit_daily_energy,
    upper_limit_daily_energy,
)
from chainprint.units import EmissionFactor, EnergyQuantity, HardwareSpec


def _lower_oracle(hash_ghs, eff_j_per_mh):
    # GH/s -> MH/s (x1000), x J/MH = W, / 1e6 = MW, x 24 h = MWh
    watts = Fraction(hash_ghs) * 1000 * Fraction(eff_j_per_mh)
    return watts / 10**6 * 24


def _upper_oracle(tokens, price, power_price):
    usd = Fraction(tokens) * Fraction(price)
    kwh = usd / Fraction(power_price)
    return kwh / 1000


# -- lower bound --------------------------------------------------------------


def test_lower_zero_hash_rate():
    assert lower_limit_daily_energy(0, 0.25) == 0


@pytest.mark.parametrize("hash_ghs, eff", [(500_000, 0.20), (1000, 1)])
def test_lower_against_unit_analysis(hash_ghs, eff):
    expected = _lower_oracle(hash_ghs, Fraction(str(eff)))
    assert lower_limit_daily_energy(hash_ghs, eff) == pytest.approx(float(expected), rel=1e-15)


def test_lower_frozen_values():
    assert lower_limit_daily_energy(500_000, 0.20) == pytest.approx(2400.0, rel=1e-15)
    assert lower_limit_daily_energy(1000, 1) == pytest.approx(24.0, rel=1e-15)


@pytest.mark.parametrize("eff", [0, -0.1])
def test_lower_needs_positive_efficiency(eff):
    with pytest.raises(NonPositiveEfficiencyError):
        lower_limit_daily_energy(100, eff)


# -- upper bound --------------------------------------------------------------


def test_upper_zero_revenue():
    assert upper_limit_daily_energy(0, 0, 0, 0, 300, 0.15) == 0


def test_upper_against_hand_evaluation():
    assert _upper_oracle(1000, 300, Fraction("0.15")) == 2000
    assert upper_limit_daily_energy(1000, 0, 0, 0, 300, 0.15) == pytest.approx(2000, rel=1e-15)


def test_upper_with_pos_constants():
    expected = float(_upper_oracle(13000, Fraction("307.5429"), Fraction("0.1783")))
    assert expected == pytest.approx(22423.2064, abs=1e-4)
    got = upper_limit_daily_energy(10000, 2000, 900, 100, 307.5429, 0.1783)
    assert got == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("price", [0, -0.1])
def test_upper_needs_positive_power_price(price):
    with pytest.raises(ZeroElectricityPriceError):
        upper_limit_daily_energy(1, 1, 1, 1, 1, price)


# -- hardware -----------------------------------------------------------------

CATALOG = HardwareCatalog(
    (
        HardwareSpec("A", 100, 100, 0.3, 2018),
        HardwareSpec("B", 100, 100, 0.2, 2020),
        HardwareSpec("node", 5, 490.64, None, 2010),
    )
)


@pytest.mark.parametrize("year, expected", [(2019, 0.3), (2020, 0.2), (2030, 0.2)])
def test_best_efficiency(year, expected):
    assert best_efficiency_by_year(CATALOG, year) == expected


def test_no_hardware_yet():
    with pytest.raises(NoHardwareAvailableError):
        best_efficiency_by_year(CATALOG, 2017)


# -- carbon -------------------------------------------------------------------


def test_carbon_zero_energy():
    assert carbon_from_energy(EnergyQuantity(0, "TWh"), EmissionFactor(0.4592)).value == 0


def test_carbon_fig3_eth_2020_lower():
    c = carbon_from_energy(EnergyQuantity(2.22, "TWh"), EmissionFactor(0.4323))
    assert c.unit == "MtCO2"
    assert c.value == pytest.approx(0.959706, rel=1e-12)
    assert round(c.value, 2) == 0.96


def test_carbon_one_twh():
    assert carbon_from_energy(EnergyQuantity(1, "TWh"), EmissionFactor(0.4592)).value == pytest.approx(
        0.4592, rel=1e-15
    )


def test_carbon_other_units():
    c = carbon_from_energy(EnergyQuantity(1000, "kWh"), EmissionFactor(0.5), unit="tCO2")
    assert c.value == pytest.approx(0.5, rel=1e-15)


@given(
    st.floats(0, 1e3),
    st.floats(0, 2),
    st.sampled_from([0.5, 2.0, 4.0]),
)
def test_carbon_bilinear(e, f, k):
    base = carbon_from_energy(EnergyQuantity(e, "TWh"), EmissionFactor(f)).value
    scaled_e = carbon_from_energy(EnergyQuantity(e * k, "TWh"), EmissionFactor(f)).value
    assert scaled_e == pytest.approx(base * k, rel=1e-15, abs=1e-300)
    if f * k <= 2:
        scaled_f = carbon_from_energy(EnergyQuantity(e, "TWh"), EmissionFactor(f * k)).value
        assert scaled_f == pytest.approx(base * k, rel=1e-15, abs=1e-300)


# -- linearity ------------------------------------------------------------------


def test_linearity_random():
    rnd = random.Random(42)
    for _ in range(1000):
        h, e = rnd.uniform(0, 1e9), rnd.uniform(1e-6, 10)
        assert lower_limit_daily_energy(2 * h, e) == pytest.approx(2 * lower_limit_daily_energy(h, e), rel=1e-12)
        r, m, p = rnd.uniform(0, 1e5), rnd.uniform(0, 1e5), rnd.uniform(0.01, 1)
        base = upper_limit_daily_energy(r, 0, 0, 0, m, p)
        assert upper_limit_daily_energy(r, 0, 0, 0, 2 * m, p) == pytest.approx(2 * base, rel=1e-12)
        assert upper_limit_daily_energy(r, 0, 0, 0, m, 2 * p) == pytest.approx(base / 2, rel=1e-12)


# -- annual series ------------------------------------------------------------------


def _days(year, n, **kw):
    start = dt.date(year, 1, 1)
    fields = dict(hash_rate=0.0, block_reward=0.0, tx_fees=0.0, uncle_reward=0.0, uncle_incl_reward=0.0, market_price=0.0)
    fields.update(kw)
    return [NetworkDay(start + dt.timedelta(days=i), **fields) for i in range(n)]


def test_single_empty_day():
    series = NetworkDaySeries(tuple(_days(2020, 1)))
    rows = annual_series(series, CATALOG, {2020: 0.4592}, {2020: 0.15})
    assert [(r.bound, r.energy.value, r.carbon.value) for r in rows] == [("lower", 0, 0), ("upper", 0, 0)]


def test_zero_hash_year_without_hardware():
    series = NetworkDaySeries(tuple(_days(2000, 3)))
    rows = annual_series(series, CATALOG, {2000: 0.5}, {2000: 0.1})
    assert rows[0].energy.value == 0


def test_365_days_of_2400_mwh():
    # 500000 GH/s on 0.2 J/MH hardware is 2400 MWh/day
    series = NetworkDaySeries(tuple(_days(2021, 365, hash_rate=500_000.0)))
    catalog = HardwareCatalog((HardwareSpec("X", 1, 1, 0.2, 2020),))
    lower = annual_series(series, catalog, {2021: 0.5}, {2021: 0.1})[0]
    assert lower.energy.unit == "TWh"
    assert lower.energy.value == pytest.approx(0.876, rel=1e-13)
    assert lower.carbon.value == pytest.approx(0.438, rel=1e-13)


def test_missing_factor_year():
    series = NetworkDaySeries(tuple(_days(2020, 2)))
    with pytest.raises(MissingFactorError):
        annual_series(series, CATALOG, {2019: 0.5}, {2020: 0.1})
    with pytest.raises(MissingFactorError):
        annual_series(series, CATALOG, {2020: 0.5}, {2019: 0.1})


def test_lower_above_upper_only_warns(caplog):
    series = NetworkDaySeries(tuple(_days(2020, 2, hash_rate=1e6, block_reward=1.0, market_price=1.0)))
    with caplog.at_level(logging.WARNING, logger="chainprint.pow"):
        rows = annual_series(series, CATALOG, {2020: 0.5}, {2020: 0.1})
    assert rows[0].energy.value > rows[1].energy.value
    assert "exceeds upper bound" in caplog.text


def test_per_bound_factors():
    series = NetworkDaySeries(tuple(_days(2020, 10, hash_rate=1e3, block_reward=10.0, market_price=100.0)))
    rows = annual_series(series, CATALOG, {2020: 0.4321}, {2020: 0.1}, upper_factors_by_year={2020: 0.6843})
    assert rows[0].emission_factor == 0.4321 and rows[1].emission_factor == 0.6843
    for r in rows:
        assert r.carbon.value == pytest.approx(r.energy.value * r.emission_factor, rel=1e-14)


def _random_series(rnd, years):
    rows = []
    for year in years:
        start = dt.date(year, 1, 1)
        n = (dt.date(year + 1, 1, 1) - start).days
        for i in range(n):
            rows.append(
                NetworkDay(
                    start + dt.timedelta(days=i),
                    rnd.uniform(0, 5e5),
                    rnd.uniform(0, 2e4),
                    rnd.uniform(0, 3e3),
                    rnd.uniform(0, 1e3),
                    rnd.uniform(0, 50),
                    rnd.uniform(1, 2000),
                )
            )
    return NetworkDaySeries(tuple(rows))


def test_annual_series_matches_day_loop():
    rnd = random.Random(3)
    series = _random_series(rnd, [2018, 2019, 2020])
    factors = {2018: 0.47, 2019: 0.45, 2020: 0.4323}
    prices = {2018: 0.16, 2019: 0.17, 2020: 0.1783}
    rows = annual_series(series, CATALOG, factors, prices)

    for year in (2018, 2019, 2020):
        eff = 0.3 if year < 2020 else 0.2
        lower_days, upper_days = [], []
        for d in series.rows:
            if d.date.year != year:
                continue
            lower_days.append(d.hash_rate * eff * 1e-3 * 24)
            tokens = d.block_reward + d.tx_fees + d.uncle_reward + d.uncle_incl_reward
            upper_days.append(tokens * d.market_price / prices[year] / 1000)
        lower_twh = math.fsum(lower_days) / 1e6
        upper_twh = math.fsum(upper_days) / 1e6
        got = {r.bound: r for r in rows if r.year == year}
        assert got["lower"].energy.value == lower_twh
        assert got["upper"].energy.value == upper_twh


def test_parallel_years_equal_serial():
    series = _random_series(random.Random(5), [2018, 2019, 2020])
    factors = {2018: 0.47, 2019: 0.45, 2020: 0.4323}
    prices = {2018: 0.16, 2019: 0.17, 2020: 0.1783}
    assert annual_series(series, CATALOG, factors, prices, jobs=3) == annual_series(
        series, CATALOG, factors, prices
    )


def test_bundled_eth_fixture_hits_published_2020(bundled):
    series = load_network_series(bundled / "eth_network.csv")
    catalog = load_hardware_catalog(bundled / "eth_hardware.csv")
    rows = annual_series(series, catalog, {2016: 0.48, 2020: 0.4323}, {2016: 0.1783, 2020: 0.1783})
    got = {(r.year, r.bound): r for r in rows}
    for (year, bound), (twh, mt) in {
        (2020, "upper"): (11.91, 5.15),
        (2020, "lower"): (2.22, 0.96),
        (2016, "upper"): (0.67, 0.32),
        (2016, "lower"): (0.27, 0.13),
    }.items():
        r = got[(year, bound)]
        assert r.energy.value == pytest.approx(twh, rel=0.01)
        assert r.carbon.value == pytest.approx(mt, rel=0.01)
