import datetime as dt
import math

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from chainprint import ingest
from chainprint.errors import (
    DuplicateCountryError,
    DuplicateHardwareError,
    NegativeValueError,
    NonMonotoneDateError,
    NonMonotoneError,
    RangeError,
    SchemaError,
    ShareSumError,
)

PROFILE_HEADER = (
    "country_code,node_share,electricity_price_usd_per_kwh,"
    "internet_price_usd_per_month,emission_factor_kgco2_per_kwh\n"
)
NETWORK_HEADER = "date,hash_rate_ghs,block_reward,tx_fees,uncle_reward,uncle_incl_reward,market_price_usd\n"


# -- country profiles -----------------------------------------------------------


def test_single_country(write_csv):
    table = ingest.load_country_profiles(write_csv(PROFILE_HEADER + "US,1.0,0.15,40,0.45\n"))
    assert len(table) == 1
    assert table.rows[0] == ingest.CountryProfile("US", 1.0, 0.15, 40.0, 0.45)


def test_exact_two_way_split(write_csv):
    table = ingest.load_country_profiles(
        write_csv(PROFILE_HEADER + "US,0.6,0.15,40,0.45\nDE,0.4,0.3,35,0.3\n")
    )
    assert math.fsum(r.node_share for r in table.rows) == 1.0


def test_shares_far_from_one_rejected(write_csv):
    with pytest.raises(ShareSumError):
        ingest.load_country_profiles(
            write_csv(PROFILE_HEADER + "US,0.6,0.15,40,0.45\nDE,0.6,0.3,35,0.3\n")
        )


def test_shares_slightly_off_are_renormalised(write_csv):
    table = ingest.load_country_profiles(
        write_csv(PROFILE_HEADER + "US,0.605,0.15,40,0.45\nDE,0.4,0.3,35,0.3\n")
    )
    total = math.fsum(r.node_share for r in table.rows)
    assert abs(total - 1) <= 1e-6
    assert table.rows[0].node_share == pytest.approx(0.605 / 1.005)


def test_node_counts_become_shares(write_csv):
    text = (
        "country_code,node_count,electricity_price_usd_per_kwh,"
        "internet_price_usd_per_month,emission_factor_kgco2_per_kwh\n"
        "US,300,0.15,40,0.45\nDE,100,0.3,35,0.3\n"
    )
    table = ingest.load_country_profiles(write_csv(text))
    assert [r.node_share for r in table.rows] == [0.75, 0.25]


def test_duplicate_country(write_csv):
    with pytest.raises(DuplicateCountryError):
        ingest.load_country_profiles(
            write_csv(PROFILE_HEADER + "US,0.5,0.15,40,0.45\nUS,0.5,0.3,35,0.3\n")
        )


@pytest.mark.parametrize(
    "body, error",
    [
        ("US,1.0,-0.15,40,0.45\n", NegativeValueError),
        ("US,1.0,abc,40,0.45\n", SchemaError),
        ("US,1.5,0.15,40,0.45\n", RangeError),
        (",1.0,0.15,40,0.45\n", SchemaError),
    ],
)
def test_bad_profile_rows(write_csv, body, error):
    with pytest.raises(error):
        ingest.load_country_profiles(write_csv(PROFILE_HEADER + body))


def test_missing_profile_column(write_csv):
    with pytest.raises(SchemaError, match="emission_factor"):
        ingest.load_country_profiles(
            write_csv("country_code,node_share,electricity_price_usd_per_kwh,internet_price_usd_per_month\n")
        )


def test_synthetic_profiles_load(synthetic_profiles):
    table = ingest.load_country_profiles(synthetic_profiles)
    assert len(table) == 9
    assert abs(math.fsum(r.node_share for r in table.rows) - 1) <= 1e-12


# -- network series -------------------------------------------------------------


def test_empty_network_series(write_csv):
    assert len(ingest.load_network_series(write_csv(NETWORK_HEADER))) == 0


def test_all_zero_day_accepted(write_csv):
    series = ingest.load_network_series(write_csv(NETWORK_HEADER + "2020-01-01,0,0,0,0,0,0\n"))
    assert series.rows[0].total_reward == 0
    assert series.rows[0].date == dt.date(2020, 1, 1)


def test_dates_must_increase(write_csv):
    text = NETWORK_HEADER + "2020-01-02,1,1,1,0,0,1\n2020-01-01,1,1,1,0,0,1\n"
    with pytest.raises(NonMonotoneDateError):
        ingest.load_network_series(write_csv(text))


def test_repeated_date_rejected(write_csv):
    text = NETWORK_HEADER + "2020-01-01,1,1,1,0,0,1\n2020-01-01,1,1,1,0,0,1\n"
    with pytest.raises(NonMonotoneDateError):
        ingest.load_network_series(write_csv(text))


def test_negative_reward_rejected(write_csv):
    with pytest.raises(NegativeValueError):
        ingest.load_network_series(write_csv(NETWORK_HEADER + "2020-01-01,1,-1,1,0,0,1\n"))


def test_bitcoin_style_series_without_uncles(write_csv):
    text = "date,hash_rate_ghs,block_reward,tx_fees,market_price_usd\n2020-05-01,1e11,900,40,9000\n"
    day = ingest.load_network_series(write_csv(text)).rows[0]
    assert (day.uncle_reward, day.uncle_incl_reward) == (0.0, 0.0)
    assert day.total_reward == 940


def test_bad_date(write_csv):
    with pytest.raises(SchemaError):
        ingest.load_network_series(write_csv(NETWORK_HEADER + "2020-13-01,1,1,1,0,0,1\n"))


# -- hardware / adoption / transactions ----------------------------------------


def test_hardware_pass_through(write_csv):
    text = "name,power_w,price_usd,efficiency_j_per_mh,release_year\nAntminerX,1500,2000,0.10,2020\n"
    catalog = ingest.load_hardware_catalog(write_csv(text))
    assert len(catalog) == 1
    hw = catalog.entries[0]
    assert (hw.name, hw.power_w, hw.price_usd, hw.efficiency_j_per_mh, hw.release_year) == (
        "AntminerX",
        1500.0,
        2000.0,
        0.10,
        2020,
    )


def test_hardware_blank_efficiency_and_duplicates(write_csv):
    header = "name,power_w,price_usd,efficiency_j_per_mh,release_year\n"
    catalog = ingest.load_hardware_catalog(write_csv(header + "Jetson TX2,5,490.64,,2017\n"))
    assert catalog.entries[0].efficiency_j_per_mh is None
    with pytest.raises(DuplicateHardwareError):
        ingest.load_hardware_catalog(write_csv(header + "A,1,1,1,2019\nA,2,2,2,2020\n"))
    with pytest.raises(RangeError):
        ingest.load_hardware_catalog(write_csv(header + "A,0,1,1,2019\n"))


def test_adoption_fraction_out_of_range(write_csv):
    text = "technology,years_since_introduction,adoption_fraction\nradio,3,1.2\n"
    with pytest.raises(RangeError):
        ingest.load_adoption_curves(write_csv(text))


def test_adoption_dips_allowed_but_years_must_increase(write_csv):
    header = "technology,years_since_introduction,adoption_fraction\n"
    curves = ingest.load_adoption_curves(write_csv(header + "tv,0,0.1\ntv,1,0.3\ntv,2,0.2\n"))
    assert [p.adoption_fraction for p in curves.curves["tv"]] == [0.1, 0.3, 0.2]
    with pytest.raises(NonMonotoneError):
        ingest.load_adoption_curves(write_csv(header + "tv,1,0.1\ntv,1,0.3\n"))


def test_bitcoin_transactions(write_csv):
    series = ingest.load_transaction_series(
        write_csv("year,transactions\n2009,31332\n2020,112559843\n")
    )
    assert series.years == (2009, 2020)
    assert series.transactions == (31332.0, 112559843.0)


def test_transaction_years_must_increase(write_csv):
    with pytest.raises(NonMonotoneError):
        ingest.load_transaction_series(write_csv("year,transactions\n2010,5\n2009,4\n"))


def test_bundled_datasets_load(bundled):
    assert len(ingest.load_network_series(bundled / "eth_network.csv")) == 366 * 2
    assert len(ingest.load_adoption_curves(bundled / "adoption_synthetic.csv")) == 36
    assert ingest.load_country_profiles(bundled / "pos_eth_profiles.csv").rows[0].emission_factor == 0.4323


# -- round trips --------------------------------------------------------------------

finite = st.floats(min_value=0, max_value=1e12, allow_nan=False, allow_infinity=False)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture], max_examples=50)
@given(
    st.lists(st.tuples(st.floats(0.01, 1.0), finite, finite, st.floats(0, 2)), min_size=1, max_size=8)
)
def test_profiles_round_trip(tmp_path, rows):
    total = math.fsum(r[0] for r in rows)
    table = ingest.CountryProfileTable(
        tuple(ingest.CountryProfile(f"C{i}", s / total, *rest) for i, (s, *rest) in enumerate(rows))
    )
    path = tmp_path / "p.csv"
    ingest.write_country_profiles(table, path)
    once = ingest.load_country_profiles(path)
    ingest.write_country_profiles(once, path)
    assert ingest.load_country_profiles(path) == once


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture], max_examples=30)
@given(st.lists(st.tuples(*[finite] * 6), max_size=20))
def test_network_round_trip(tmp_path, rows):
    start = dt.date(2019, 12, 30)
    series = ingest.NetworkDaySeries(
        tuple(ingest.NetworkDay(start + dt.timedelta(days=i), *r) for i, r in enumerate(rows))
    )
    path = tmp_path / "n.csv"
    ingest.write_network_series(series, path)
    assert ingest.load_network_series(path) == series


def test_other_round_trips(tmp_path, bundled):
    for load, write, name in (
        (ingest.load_hardware_catalog, ingest.write_hardware_catalog, "eth_hardware.csv"),
        (ingest.load_adoption_curves, ingest.write_adoption_curves, "adoption_synthetic.csv"),
        (ingest.load_transaction_series, ingest.write_transaction_series, "btc_transactions.csv"),
    ):
        first = load(bundled / name)
        write(first, tmp_path / name)
        assert load(tmp_path / name) == first
