"""Node-share weighted electricity price, internet price and emission factor."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyTableError
from .ingest import CountryProfileTable


@dataclass(frozen=True)
class WeightedFactors:
    electricity_price: float  # USD/kWh
    internet_price: float  # USD/month
    emission_factor: float  # kgCO2eq/kWh


def _weighted(shares: list[float], values: list[float]) -> float:
    avg = math.fsum(s * v for s, v in zip(shares, values))
    # rounding can push the sum a hair outside the hull of the inputs
    return min(max(avg, min(values)), max(values))


def weighted_factors(table: CountryProfileTable) -> WeightedFactors:
    """Average each per-country value with the node shares as weights."""
    if not table.rows:
        raise EmptyTableError("country profile table is empty")
    shares = [r.node_share for r in table.rows]
    return WeightedFactors(
        electricity_price=_weighted(shares, [r.electricity_price for r in table.rows]),
        internet_price=_weighted(shares, [r.internet_price for r in table.rows]),
        emission_factor=_weighted(shares, [r.emission_factor for r in table.rows]),
    )
