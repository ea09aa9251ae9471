"""Physical quantities and unit conversion shared by every model.

Energy and carbon are carried as small immutable value objects so that the
10^-3 / 10^12 style bookkeeping of the footprint formulas lives in one place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidQuantityError

# unit -> power of ten relative to the base unit (Wh, kgCO2)
ENERGY_UNITS = {"Wh": 0, "kWh": 3, "MWh": 6, "TWh": 12}
CARBON_UNITS = {"kgCO2": 0, "tCO2": 3, "MtCO2": 9, "GtCO2": 12}
MONEY_UNITS = ("USD/kWh", "USD/month", "USD", "USD/token")

HOURS_PER_YEAR = 365 * 24
MAX_EMISSION_FACTOR = 2.0


def _rescale(value: float, from_exp: int, to_exp: int) -> float:
    # Dividing by an exact power of ten rounds once; multiplying by 10**-k would not.
    shift = from_exp - to_exp
    if shift >= 0:
        return value * float(10**shift)
    return value / float(10**-shift)


def _check_non_negative(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise InvalidQuantityError(f"{what} must be a finite non-negative number, got {value!r}")
    return value


@dataclass(frozen=True)
class EnergyQuantity:
    value: float
    unit: str = "kWh"

    def __post_init__(self) -> None:
        if self.unit not in ENERGY_UNITS:
            raise InvalidQuantityError(f"unknown energy unit {self.unit!r}")
        object.__setattr__(self, "value", _check_non_negative(self.value, "energy"))

    def to(self, unit: str) -> "EnergyQuantity":
        return convert_energy(self, unit)

    def __add__(self, other: "EnergyQuantity") -> "EnergyQuantity":
        return EnergyQuantity(self.value + other.to(self.unit).value, self.unit)


@dataclass(frozen=True)
class CarbonQuantity:
    value: float
    unit: str = "kgCO2"

    def __post_init__(self) -> None:
        if self.unit not in CARBON_UNITS:
            raise InvalidQuantityError(f"unknown carbon unit {self.unit!r}")
        object.__setattr__(self, "value", _check_non_negative(self.value, "carbon"))

    def to(self, unit: str) -> "CarbonQuantity":
        return convert_carbon(self, unit)

    def __add__(self, other: "CarbonQuantity") -> "CarbonQuantity":
        return CarbonQuantity(self.value + other.to(self.unit).value, self.unit)


@dataclass(frozen=True)
class EmissionFactor:
    """Grid emission factor in kgCO2eq per kWh."""

    value: float

    def __post_init__(self) -> None:
        value = _check_non_negative(self.value, "emission factor")
        if value > MAX_EMISSION_FACTOR:
            raise InvalidQuantityError(
                f"emission factor {value} kg/kWh exceeds sanity bound {MAX_EMISSION_FACTOR}"
            )
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class MoneyRate:
    value: float
    unit: str = "USD"

    def __post_init__(self) -> None:
        if self.unit not in MONEY_UNITS:
            raise InvalidQuantityError(f"unknown money unit {self.unit!r}")
        object.__setattr__(self, "value", _check_non_negative(self.value, "money"))


@dataclass(frozen=True)
class HardwareSpec:
    name: str
    power_w: float
    price_usd: float
    efficiency_j_per_mh: Optional[float] = None
    release_year: int = 0

    def __post_init__(self) -> None:
        for field in ("power_w", "price_usd"):
            v = float(getattr(self, field))
            if not math.isfinite(v) or v <= 0:
                raise InvalidQuantityError(f"{self.name}: {field} must be positive, got {v!r}")
            object.__setattr__(self, field, v)
        eff = self.efficiency_j_per_mh
        if eff is not None:
            eff = float(eff)
            if not math.isfinite(eff) or eff <= 0:
                raise InvalidQuantityError(
                    f"{self.name}: efficiency_j_per_mh must be positive, got {eff!r}"
                )
            object.__setattr__(self, "efficiency_j_per_mh", eff)
        object.__setattr__(self, "release_year", int(self.release_year))


def convert_energy(q: EnergyQuantity, target_unit: str) -> EnergyQuantity:
    if target_unit not in ENERGY_UNITS:
        raise InvalidQuantityError(f"unknown energy unit {target_unit!r}")
    value = _rescale(q.value, ENERGY_UNITS[q.unit], ENERGY_UNITS[target_unit])
    return EnergyQuantity(value, target_unit)


def convert_carbon(q: CarbonQuantity, target_unit: str) -> CarbonQuantity:
    if target_unit not in CARBON_UNITS:
        raise InvalidQuantityError(f"unknown carbon unit {target_unit!r}")
    value = _rescale(q.value, CARBON_UNITS[q.unit], CARBON_UNITS[target_unit])
    return CarbonQuantity(value, target_unit)


def carbon_from_energy(
    energy: EnergyQuantity, factor: EmissionFactor, unit: str = "MtCO2"
) -> CarbonQuantity:
    """Carbon emitted by ``energy`` on a grid with the given emission factor."""
    kg = energy.to("kWh").value * factor.value
    return CarbonQuantity(kg, "kgCO2").to(unit)
