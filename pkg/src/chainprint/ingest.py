"""CSV loaders (and writers) for the model datasets.

All files are UTF-8 CSV with a header row and '.' as decimal separator.
Each loader validates the invariants of its table and raises the matching
:mod:`chainprint.errors` subclass instead of a generic failure.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .errors import (
    DuplicateCountryError,
    DuplicateHardwareError,
    NegativeValueError,
    NonMonotoneDateError,
    NonMonotoneError,
    RangeError,
    SchemaError,
    ShareSumError,
)
from .units import HardwareSpec

PathLike = Union[str, Path]

SHARE_TOLERANCE = 0.01  # raw shares may be off by this much and still get renormalised
NORMALISED_EPS = 1e-12

COUNTRY_COLUMNS = (
    "country_code",
    "node_share",
    "electricity_price_usd_per_kwh",
    "internet_price_usd_per_month",
    "emission_factor_kgco2_per_kwh",
)
NETWORK_COLUMNS = (
    "date",
    "hash_rate_ghs",
    "block_reward",
    "tx_fees",
    "uncle_reward",
    "uncle_incl_reward",
    "market_price_usd",
)
NETWORK_OPTIONAL = ("uncle_reward", "uncle_incl_reward")
HARDWARE_COLUMNS = ("name", "power_w", "price_usd", "efficiency_j_per_mh", "release_year")
ADOPTION_COLUMNS = ("technology", "years_since_introduction", "adoption_fraction")
TRANSACTION_COLUMNS = ("year", "transactions")


@dataclass(frozen=True)
class CountryProfile:
    country_code: str
    node_share: float
    electricity_price: float  # USD/kWh
    internet_price: float  # USD/month
    emission_factor: float  # kgCO2eq/kWh


@dataclass(frozen=True)
class CountryProfileTable:
    rows: tuple[CountryProfile, ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class NetworkDay:
    date: dt.date
    hash_rate: float  # GH/s
    block_reward: float  # token/day
    tx_fees: float
    uncle_reward: float
    uncle_incl_reward: float
    market_price: float  # USD/token

    @property
    def total_reward(self) -> float:
        return self.block_reward + self.tx_fees + self.uncle_reward + self.uncle_incl_reward


@dataclass(frozen=True)
class NetworkDaySeries:
    rows: tuple[NetworkDay, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def years(self) -> list[int]:
        return sorted({r.date.year for r in self.rows})


@dataclass(frozen=True)
class HardwareCatalog:
    entries: tuple[HardwareSpec, ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AdoptionPoint:
    years_since_introduction: int
    adoption_fraction: float


@dataclass(frozen=True)
class AdoptionCurveSet:
    curves: dict[str, tuple[AdoptionPoint, ...]]

    def __len__(self) -> int:
        return len(self.curves)


@dataclass(frozen=True)
class TransactionSeries:
    years: tuple[int, ...]
    transactions: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.years)


# -- helpers ------------------------------------------------------------------


def _read(path: PathLike, required: Iterable[str]) -> tuple[list[str], list[dict[str, str]]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        reader.fieldnames = header
        rows = [{k: (v or "").strip() for k, v in row.items() if k is not None} for row in reader]
    return header, rows


def _float(raw: str, column: str, lineno: int, path: PathLike) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: column {column!r} is not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise SchemaError(f"{path}:{lineno}: column {column!r} is not finite: {raw!r}")
    return value


def _non_negative(raw: str, column: str, lineno: int, path: PathLike) -> float:
    value = _float(raw, column, lineno, path)
    if value < 0:
        raise NegativeValueError(f"{path}:{lineno}: column {column!r} is negative ({value})")
    return value


def _int(raw: str, column: str, lineno: int, path: PathLike) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"{path}:{lineno}: column {column!r} is not an integer: {raw!r}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _write(path: PathLike, header: Iterable[str], rows: Iterable[Iterable[object]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- country profiles -----------------------------------------------------------


def load_country_profiles(path: PathLike) -> CountryProfileTable:
    """Load per-country node shares, prices and emission factors.

    Either ``node_share`` or ``node_count`` must be filled in for every row;
    counts are converted to shares. Shares whose raw sum is within 1% of one
    are renormalised to sum to exactly one.
    """
    value_cols = COUNTRY_COLUMNS[2:]
    header, raw_rows = _read(path, ("country_code",) + value_cols)
    has_share = "node_share" in header
    has_count = "node_count" in header
    if not (has_share or has_count):
        raise SchemaError(f"{path}: need a node_share or node_count column")

    codes: set[str] = set()
    parsed = []
    use_counts = False
    for lineno, row in enumerate(raw_rows, start=2):
        code = row["country_code"]
        if not code:
            raise SchemaError(f"{path}:{lineno}: empty country_code")
        if code in codes:
            raise DuplicateCountryError(f"{path}:{lineno}: duplicate country {code!r}")
        codes.add(code)
        share_raw = row.get("node_share", "") if has_share else ""
        if share_raw:
            weight = _non_negative(share_raw, "node_share", lineno, path)
            if weight > 1:
                raise RangeError(f"{path}:{lineno}: node_share {weight} outside [0, 1]")
        elif has_count and row.get("node_count", ""):
            weight = _non_negative(row["node_count"], "node_count", lineno, path)
            use_counts = True
        else:
            raise SchemaError(f"{path}:{lineno}: neither node_share nor node_count given")
        values = [_non_negative(row[c], c, lineno, path) for c in value_cols]
        parsed.append((code, weight, values))

    if use_counts and any(row.get("node_share", "") for row in raw_rows):
        raise SchemaError(f"{path}: mix of node_share and node_count rows")

    total = math.fsum(w for _, w, _ in parsed)
    if parsed:
        if use_counts:
            if total <= 0:
                raise ShareSumError(f"{path}: node counts sum to zero")
        elif abs(total - 1.0) > SHARE_TOLERANCE:
            raise ShareSumError(f"{path}: node shares sum to {total:.6g}, expected 1 +/- 1%")

    if not use_counts and abs(total - 1.0) <= NORMALISED_EPS:
        total = 1.0  # already normalised; keeps load/write/load an identity
    rows = tuple(CountryProfile(code, w / total, *values) for code, w, values in parsed)
    return CountryProfileTable(rows)


def write_country_profiles(table: CountryProfileTable, path: PathLike) -> None:
    _write(
        path,
        COUNTRY_COLUMNS,
        (
            (
                r.country_code,
                _fmt(r.node_share),
                _fmt(r.electricity_price),
                _fmt(r.internet_price),
                _fmt(r.emission_factor),
            )
            for r in table.rows
        ),
    )


# -- network series -------------------------------------------------------------


def load_network_series(path: PathLike) -> NetworkDaySeries:
    required = tuple(c for c in NETWORK_COLUMNS if c not in NETWORK_OPTIONAL)
    header, raw_rows = _read(path, required)
    rows = []
    prev = None
    for lineno, row in enumerate(raw_rows, start=2):
        try:
            date = dt.date.fromisoformat(row["date"])
        except ValueError:
            raise SchemaError(f"{path}:{lineno}: bad date {row['date']!r}") from None
        if prev is not None and date <= prev:
            raise NonMonotoneDateError(f"{path}:{lineno}: {date} does not follow {prev}")
        prev = date
        nums = {}
        for col in NETWORK_COLUMNS[1:]:
            raw = row.get(col, "")
            if col in NETWORK_OPTIONAL and not raw:
                nums[col] = 0.0  # chains without uncles
            else:
                nums[col] = _non_negative(raw, col, lineno, path)
        rows.append(
            NetworkDay(
                date=date,
                hash_rate=nums["hash_rate_ghs"],
                block_reward=nums["block_reward"],
                tx_fees=nums["tx_fees"],
                uncle_reward=nums["uncle_reward"],
                uncle_incl_reward=nums["uncle_incl_reward"],
                market_price=nums["market_price_usd"],
            )
        )
    return NetworkDaySeries(tuple(rows))


def write_network_series(series: NetworkDaySeries, path: PathLike) -> None:
    _write(
        path,
        NETWORK_COLUMNS,
        (
            (
                r.date.isoformat(),
                _fmt(r.hash_rate),
                _fmt(r.block_reward),
                _fmt(r.tx_fees),
                _fmt(r.uncle_reward),
                _fmt(r.uncle_incl_reward),
                _fmt(r.market_price),
            )
            for r in series.rows
        ),
    )


# -- hardware -------------------------------------------------------------------


def load_hardware_catalog(path: PathLike) -> HardwareCatalog:
    _, raw_rows = _read(path, HARDWARE_COLUMNS)
    names: set[str] = set()
    entries = []
    for lineno, row in enumerate(raw_rows, start=2):
        name = row["name"]
        if not name:
            raise SchemaError(f"{path}:{lineno}: empty hardware name")
        if name in names:
            raise DuplicateHardwareError(f"{path}:{lineno}: duplicate hardware {name!r}")
        names.add(name)
        power = _float(row["power_w"], "power_w", lineno, path)
        price = _float(row["price_usd"], "price_usd", lineno, path)
        eff_raw = row["efficiency_j_per_mh"]
        eff = _float(eff_raw, "efficiency_j_per_mh", lineno, path) if eff_raw else None
        for col, v in (("power_w", power), ("price_usd", price), ("efficiency_j_per_mh", eff)):
            if v is not None and v <= 0:
                raise RangeError(f"{path}:{lineno}: {col} must be positive, got {v}")
        year = _int(row["release_year"], "release_year", lineno, path)
        entries.append(HardwareSpec(name, power, price, eff, year))
    return HardwareCatalog(tuple(entries))


def write_hardware_catalog(catalog: HardwareCatalog, path: PathLike) -> None:
    _write(
        path,
        HARDWARE_COLUMNS,
        (
            (
                h.name,
                _fmt(h.power_w),
                _fmt(h.price_usd),
                "" if h.efficiency_j_per_mh is None else _fmt(h.efficiency_j_per_mh),
                h.release_year,
            )
            for h in catalog.entries
        ),
    )


# -- adoption curves --------------------------------------------------------------


def load_adoption_curves(path: PathLike) -> AdoptionCurveSet:
    _, raw_rows = _read(path, ADOPTION_COLUMNS)
    curves: dict[str, list[AdoptionPoint]] = {}
    for lineno, row in enumerate(raw_rows, start=2):
        tech = row["technology"]
        if not tech:
            raise SchemaError(f"{path}:{lineno}: empty technology name")
        year = _int(row["years_since_introduction"], "years_since_introduction", lineno, path)
        if year < 0:
            raise RangeError(f"{path}:{lineno}: years_since_introduction is negative ({year})")
        frac = _float(row["adoption_fraction"], "adoption_fraction", lineno, path)
        if not 0.0 <= frac <= 1.0:
            raise RangeError(f"{path}:{lineno}: adoption_fraction {frac} outside [0, 1]")
        points = curves.setdefault(tech, [])
        if points and year <= points[-1].years_since_introduction:
            raise NonMonotoneError(
                f"{path}:{lineno}: {tech}: year {year} does not follow "
                f"{points[-1].years_since_introduction}"
            )
        points.append(AdoptionPoint(year, frac))
    return AdoptionCurveSet({k: tuple(v) for k, v in curves.items()})


def write_adoption_curves(curves: AdoptionCurveSet, path: PathLike) -> None:
    _write(
        path,
        ADOPTION_COLUMNS,
        (
            (tech, p.years_since_introduction, _fmt(p.adoption_fraction))
            for tech, points in curves.curves.items()
            for p in points
        ),
    )


# -- transactions -----------------------------------------------------------------


def load_transaction_series(path: PathLike) -> TransactionSeries:
    _, raw_rows = _read(path, TRANSACTION_COLUMNS)
    years: list[int] = []
    counts: list[float] = []
    for lineno, row in enumerate(raw_rows, start=2):
        year = _int(row["year"], "year", lineno, path)
        if years and year <= years[-1]:
            raise NonMonotoneError(f"{path}:{lineno}: year {year} does not follow {years[-1]}")
        years.append(year)
        counts.append(_non_negative(row["transactions"], "transactions", lineno, path))
    return TransactionSeries(tuple(years), tuple(counts))


def write_transaction_series(series: TransactionSeries, path: PathLike) -> None:
    _write(
        path,
        TRANSACTION_COLUMNS,
        ((y, _fmt(n)) for y, n in zip(series.years, series.transactions)),
    )
