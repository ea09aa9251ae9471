"""Scenario files: JSON documents that parameterise every model run.

Top-level sections are ``datasets``, ``pow``, ``pos``, ``projection`` and
``climate``. Every key is optional and falls back to the published
constants; unknown keys are rejected so that typos do not silently fall
back to a default. Dataset paths are resolved relative to the scenario file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Optional

from . import pos as posmod
from . import projection as proj
from .errors import ConfigError
from .units import HardwareSpec
from .weighting import WeightedFactors

BUNDLED = ("eth", "btc", "eth_btc_logistic")
DEFAULT_SCENARIO = "eth"


@dataclass(frozen=True)
class DatasetsConfig:
    network_series: Optional[str] = None
    hardware: Optional[str] = None
    pow_country_profiles: Optional[str] = None
    pos_country_profiles: Optional[str] = None
    adoption: Optional[str] = None
    transactions: Optional[str] = None


@dataclass(frozen=True)
class PowConfig:
    factors_by_year: Optional[dict[int, float]] = None
    upper_factors_by_year: Optional[dict[int, float]] = None
    electricity_price_by_year: Optional[dict[int, float]] = None


@dataclass(frozen=True)
class HardwareConfig:
    name: str
    power_w: float
    price_usd: float

    def spec(self) -> HardwareSpec:
        return HardwareSpec(self.name, self.power_w, self.price_usd)


@dataclass(frozen=True)
class WeightedConfig:
    electricity_price: float
    internet_price: float
    emission_factor: float


@dataclass(frozen=True)
class PosConfig:
    total_stake: float = posmod.ETH_TOTAL_STAKE
    stake_per_validator: float = posmod.STAKE_PER_VALIDATOR
    token_price: float = posmod.ETH_PRICE_2020
    depreciation_years: float = posmod.DEPRECIATION_YEARS
    reward_constant: float = posmod.REWARD_CONSTANT
    lower_hardware: HardwareConfig = HardwareConfig("Jetson TX2", 5.0, 490.64)
    upper_hardware: HardwareConfig = HardwareConfig("Intel Xeon server", 81.0, 2181.72)
    # None: take the pos country-profile table if given, else the published averages
    weighted: Optional[WeightedConfig] = None


@dataclass(frozen=True)
class AdoptionConfig:
    quantile: float = 0.5
    start_offset: int = 0
    current_fraction: float = 1.0


@dataclass(frozen=True)
class LogisticConfig:
    K: float = proj.BTC_LOGISTIC_K
    P0: float = proj.BTC_LOGISTIC_P0
    r0: float = proj.BTC_LOGISTIC_R0
    t0_year: int = proj.BTC_LOGISTIC_T0
    baseline_tx: float = proj.BTC_TX_2020

    def params(self) -> proj.LogisticParams:
        return proj.LogisticParams(self.K, self.P0, self.r0, self.t0_year)


@dataclass(frozen=True)
class ProjectionConfig:
    model: str = "adoption"
    start_year: int = 2020
    horizon_years: int = 100
    threshold_c: float = 1.5
    baseline_annual_mtco2: float = 0.0
    adoption: AdoptionConfig = field(default_factory=AdoptionConfig)
    logistic: LogisticConfig = field(default_factory=LogisticConfig)


@dataclass(frozen=True)
class ClimateConfig:
    lambda_low: float = proj.LAMBDA_LOW
    lambda_mean: float = proj.LAMBDA_MEAN
    lambda_high: float = proj.LAMBDA_HIGH

    def params(self) -> proj.ClimateParams:
        return proj.ClimateParams(self.lambda_low, self.lambda_mean, self.lambda_high)


@dataclass(frozen=True)
class Scenario:
    datasets: DatasetsConfig = field(default_factory=DatasetsConfig)
    pow: PowConfig = field(default_factory=PowConfig)
    pos: PosConfig = field(default_factory=PosConfig)
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    climate: ClimateConfig = field(default_factory=ClimateConfig)
    base_dir: Path = Path(".")

    def dataset_path(self, key: str) -> Path:
        """Resolved path of a dataset; ConfigError if unset or missing on disk."""
        raw = getattr(self.datasets, key)
        if raw is None:
            raise ConfigError(f"scenario does not name a datasets.{key} file")
        path = Path(raw)
        if not path.is_absolute():
            path = self.base_dir / path
        if not path.is_file():
            raise ConfigError(f"datasets.{key}: file not found: {path}")
        return path

    def pos_scenario(self) -> posmod.PosScenario:
        from .ingest import load_country_profiles
        from .weighting import weighted_factors

        p = self.pos
        if p.weighted is not None:
            weighted = WeightedFactors(
                p.weighted.electricity_price, p.weighted.internet_price, p.weighted.emission_factor
            )
        elif self.datasets.pos_country_profiles is not None:
            weighted = weighted_factors(
                load_country_profiles(self.dataset_path("pos_country_profiles"))
            )
        else:
            weighted = posmod.ETH2_WEIGHTED
        return posmod.PosScenario(
            total_stake=p.total_stake,
            stake_per_validator=p.stake_per_validator,
            token_price=p.token_price,
            hardware=p.lower_hardware.spec(),
            weighted=weighted,
            depreciation_years=p.depreciation_years,
            reward_constant=p.reward_constant,
        )


# -- parsing ------------------------------------------------------------------

_NESTED = {
    "datasets": DatasetsConfig,
    "pow": PowConfig,
    "pos": PosConfig,
    "projection": ProjectionConfig,
    "climate": ClimateConfig,
    "lower_hardware": HardwareConfig,
    "upper_hardware": HardwareConfig,
    "weighted": WeightedConfig,
    "adoption": AdoptionConfig,
    "logistic": LogisticConfig,
}
_YEAR_MAPS = {"factors_by_year", "upper_factors_by_year", "electricity_price_by_year"}
_STRINGS = {"name", "model"}
_INTS = {"start_year", "horizon_years", "start_offset", "t0_year"}


def _year_map(value: Any, where: str) -> dict[int, float]:
    if not isinstance(value, Mapping):
        raise ConfigError(f"{where}: expected an object mapping year -> number")
    out = {}
    for k, v in value.items():
        try:
            year = int(k)
        except ValueError:
            raise ConfigError(f"{where}: {k!r} is not a year") from None
        out[year] = _number(v, f"{where}.{k}")
    return out


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _build(cls: type, data: Any, where: str) -> Any:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{where}: expected an object")
    known = {f.name for f in fields(cls)} - {"base_dir"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    kwargs = {}
    for key, value in data.items():
        path = f"{where}.{key}" if where else key
        if cls is DatasetsConfig or key in _STRINGS:
            if not isinstance(value, str):
                raise ConfigError(f"{path}: expected a string, got {value!r}")
            kwargs[key] = value
        elif key in _NESTED:
            kwargs[key] = _build(_NESTED[key], value, path)
        elif key in _YEAR_MAPS:
            kwargs[key] = _year_map(value, path)
        elif key in _INTS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{path}: expected an integer, got {value!r}")
            kwargs[key] = value
        else:
            kwargs[key] = _number(value, path)
    try:
        return cls(**kwargs)
    except TypeError as exc:  # missing required nested keys, e.g. hardware without a name
        raise ConfigError(f"{where or 'scenario'}: {exc}") from None


def parse_scenario(data: Mapping[str, Any], base_dir: Path | str = ".") -> Scenario:
    scenario = _build(Scenario, data, "")
    scenario = Scenario(
        scenario.datasets,
        scenario.pow,
        scenario.pos,
        scenario.projection,
        scenario.climate,
        Path(base_dir),
    )
    if scenario.projection.model not in ("adoption", "logistic"):
        raise ConfigError(
            f"projection.model must be 'adoption' or 'logistic', got {scenario.projection.model!r}"
        )
    return scenario


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("chainprint") / "data" / f"{name}.json"))


def load_scenario(path: str | Path | None = None) -> Scenario:
    """Read a scenario file, or a bundled scenario by name (``eth``, ``btc``, ...)."""
    if path is None:
        path = bundled_path(DEFAULT_SCENARIO)
    path = Path(path)
    if not path.exists() and str(path) in BUNDLED:
        path = bundled_path(str(path))
    if not path.is_file():
        raise ConfigError(f"scenario file not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return parse_scenario(data, path.parent)
