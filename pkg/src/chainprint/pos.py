"""Closed-form proof-of-stake (beacon chain) economics and footprint.

Stakers run one beacon node plus as many 32-token validator clients as it
takes for the staking income to cover the cost of the machine, its power
and its internet line. Validator clients themselves draw no energy and
never go offline. That break-even ratio fixes the number of beacon nodes,
and the node count times the machine power gives the network energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .errors import ConfigError, ZeroReturnError
from .units import HOURS_PER_YEAR, CarbonQuantity, EmissionFactor, EnergyQuantity, HardwareSpec
from .weighting import WeightedFactors

ETH_TOTAL_STAKE = 110_030_966.0  # all ETH supply, 10 March 2020
STAKE_PER_VALIDATOR = 32.0
ETH_PRICE_2020 = 307.5429  # USD/ETH, 2020 average
REWARD_CONSTANT = 5792.6176
DEPRECIATION_YEARS = 3.0

ETH2_WEIGHTED = WeightedFactors(
    electricity_price=0.1783, internet_price=39.5777, emission_factor=0.4323
)
JETSON_TX2 = HardwareSpec("Jetson TX2", power_w=5.0, price_usd=490.64)
XEON_SERVER = HardwareSpec("Intel Xeon server", power_w=81.0, price_usd=2181.72)


@dataclass(frozen=True)
class PosScenario:
    total_stake: float = ETH_TOTAL_STAKE  # tokens
    stake_per_validator: float = STAKE_PER_VALIDATOR
    token_price: float = ETH_PRICE_2020  # USD/token
    hardware: HardwareSpec = JETSON_TX2
    weighted: WeightedFactors = field(default=ETH2_WEIGHTED)
    depreciation_years: float = DEPRECIATION_YEARS
    reward_constant: float = REWARD_CONSTANT

    def __post_init__(self) -> None:
        for name in ("total_stake", "stake_per_validator", "depreciation_years", "reward_constant"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.token_price) and self.token_price >= 0):
            raise ConfigError(f"token_price must be non-negative, got {self.token_price!r}")
        w = self.weighted
        if min(w.electricity_price, w.internet_price, w.emission_factor) < 0:
            raise ConfigError("weighted prices and emission factor must be non-negative")
        EmissionFactor(w.emission_factor)

    def with_hardware(self, hardware: HardwareSpec) -> "PosScenario":
        return replace(self, hardware=hardware)


@dataclass(frozen=True)
class PosResult:
    validator_count: float
    annual_return_per_validator: float  # USD/yr
    staker_annual_cost: float  # USD/yr
    validators_per_node: float
    node_count: float
    annual_energy: EnergyQuantity  # TWh
    annual_carbon: CarbonQuantity  # MtCO2


class PosBounds(NamedTuple):
    lower: PosResult
    upper: PosResult


def validator_count(total_stake: float, stake_per_validator: float = STAKE_PER_VALIDATOR) -> float:
    if not stake_per_validator > 0:
        raise ConfigError(f"stake_per_validator must be positive, got {stake_per_validator!r}")
    return total_stake / stake_per_validator


def validator_annual_return(
    total_stake: float, token_price: float, reward_constant: float = REWARD_CONSTANT
) -> float:
    """USD a single validator earns per year; falls with the square root of total stake."""
    if not total_stake > 0:
        raise ConfigError(f"total_stake must be positive, got {total_stake!r}")
    return reward_constant * token_price / math.sqrt(total_stake)


def staker_annual_cost(
    hardware: HardwareSpec,
    weighted: WeightedFactors,
    depreciation_years: float = DEPRECIATION_YEARS,
) -> float:
    """Depreciation + electricity + twelve months of internet, in USD/yr."""
    return (
        hardware.price_usd / depreciation_years
        + HOURS_PER_YEAR * hardware.power_w * weighted.electricity_price / 1000
        + 12 * weighted.internet_price
    )


def pos_model(scenario: PosScenario) -> PosResult:
    n_val = validator_count(scenario.total_stake, scenario.stake_per_validator)
    g_val = validator_annual_return(
        scenario.total_stake, scenario.token_price, scenario.reward_constant
    )
    if g_val == 0:
        raise ZeroReturnError("validator return is zero (token price 0); break-even ratio undefined")
    c_stake = staker_annual_cost(scenario.hardware, scenario.weighted, scenario.depreciation_years)
    r_val = c_stake / g_val
    n_node = n_val / r_val
    # W x h = Wh; 10^12 Wh per TWh
    energy_twh = HOURS_PER_YEAR * scenario.hardware.power_w * n_node / 1e12
    carbon_mt = energy_twh * scenario.weighted.emission_factor
    return PosResult(
        validator_count=n_val,
        annual_return_per_validator=g_val,
        staker_annual_cost=c_stake,
        validators_per_node=r_val,
        node_count=n_node,
        annual_energy=EnergyQuantity(energy_twh, "TWh"),
        annual_carbon=CarbonQuantity(carbon_mt, "MtCO2"),
    )


def pos_closed_form(scenario: PosScenario) -> tuple[float, float, float]:
    """Node count, TWh/yr and MtCO2/yr from the fully substituted expressions.

    Kept separate from :func:`pos_model` so the two routes can be checked
    against each other.
    """
    s = scenario
    hw = s.hardware
    w = s.weighted
    if s.token_price == 0:
        raise ZeroReturnError("validator return is zero (token price 0)")
    denom = (
        hw.price_usd / s.depreciation_years
        + HOURS_PER_YEAR / 1000 * hw.power_w * w.electricity_price
        + 12 * w.internet_price
    )
    # N_val * g_val collapses to sqrt(stake) / stake_per_validator * k * p
    numer = math.sqrt(s.total_stake) / s.stake_per_validator * s.reward_constant * s.token_price
    n_node = numer / denom
    energy = HOURS_PER_YEAR * hw.power_w * numer / (1e12 * denom)
    carbon = HOURS_PER_YEAR * hw.power_w * numer * w.emission_factor / (1e12 * denom)
    return n_node, energy, carbon


def pos_bounds(
    lower_hw: HardwareSpec = JETSON_TX2,
    upper_hw: HardwareSpec = XEON_SERVER,
    scenario: PosScenario | None = None,
) -> PosBounds:
    """Evaluate the model once per hardware choice; shared parameters come from ``scenario``."""
    base = scenario or PosScenario()
    return PosBounds(
        lower=pos_model(base.with_hardware(lower_hw)),
        upper=pos_model(base.with_hardware(upper_hw)),
    )
