"""Emission projections and their temperature response.

Two growth models drive the projections:

* adoption quantiles: today's footprint is scaled up to full adoption and
  then follows the q-quantile adoption curve of historical technologies;
* logistic: the footprint scales with transaction volume P(t), a logistic
  curve with capacity K, initial value P0 and growth rate r0.

Cumulative emissions map to warming through a linear coefficient (degC per
GtCO2) with low/mean/high bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import accumulate
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    ConfigError,
    EmptySetError,
    FitDivergenceError,
    HorizonError,
    InsufficientDataError,
    ZeroBaselineTxError,
    ZeroCurrentFractionError,
)
from .ingest import AdoptionCurveSet, TransactionSeries

# Bitcoin transactions, fitted over 2009-2020
BTC_LOGISTIC_K = 779.1e9  # worldwide cashless transactions in 2020
BTC_LOGISTIC_P0 = 9_714_478.0
BTC_LOGISTIC_R0 = 0.219
BTC_LOGISTIC_T0 = 2009
BTC_TX_2020 = 112_559_843.0

ETH_INTRODUCED = 2015
BTC_INTRODUCED = 2009

# Calibration values, not measurements: 17 GtCO2 -> ~0.008 degC at the mean.
LAMBDA_MEAN = 4.5e-4  # degC per GtCO2
LAMBDA_LOW = 0.6 * LAMBDA_MEAN
LAMBDA_HIGH = 1.6 * LAMBDA_MEAN


@dataclass(frozen=True)
class AdoptionProjection:
    years: tuple[int, ...]  # years since introduction
    fraction: tuple[float, ...]
    quantile_label: str

    def __post_init__(self) -> None:
        if len(self.years) != len(self.fraction):
            raise ValueError("years and fraction must have the same length")
        if any(not 0.0 <= f <= 1.0 for f in self.fraction):
            raise ValueError("adoption fractions must lie in [0, 1]")

    def at(self, offset: int) -> float:
        try:
            return self.fraction[self.years.index(offset)]
        except ValueError:
            raise HorizonError(f"no adoption data {offset} years after introduction") from None


@dataclass(frozen=True)
class LogisticParams:
    K: float
    P0: float
    r0: float
    t0_year: int = BTC_LOGISTIC_T0

    def __post_init__(self) -> None:
        if not (self.K > self.P0 > 0):
            raise ConfigError(f"logistic parameters need K > P0 > 0 (K={self.K}, P0={self.P0})")
        if not self.r0 > 0:
            raise ConfigError(f"logistic growth rate must be positive, got {self.r0}")


BTC_LOGISTIC = LogisticParams(BTC_LOGISTIC_K, BTC_LOGISTIC_P0, BTC_LOGISTIC_R0, BTC_LOGISTIC_T0)


@dataclass(frozen=True)
class EmissionTrajectory:
    start_year: int
    annual: tuple[float, ...]  # MtCO2/yr
    cumulative: tuple[float, ...]  # GtCO2

    @classmethod
    def from_annual(cls, start_year: int, annual: Sequence[float]) -> "EmissionTrajectory":
        annual = tuple(float(a) for a in annual)
        if any(a < 0 for a in annual):
            raise ValueError("annual emissions must be non-negative")
        cumulative = tuple(c / 1000 for c in accumulate(annual))
        return cls(start_year, annual, cumulative)

    @property
    def years(self) -> list[int]:
        return [self.start_year + i for i in range(len(self.annual))]


@dataclass(frozen=True)
class ClimateParams:
    lambda_low: float = LAMBDA_LOW
    lambda_mean: float = LAMBDA_MEAN
    lambda_high: float = LAMBDA_HIGH

    def __post_init__(self) -> None:
        if not 0 < self.lambda_low <= self.lambda_mean <= self.lambda_high:
            raise ConfigError(
                "climate coefficients must satisfy 0 < low <= mean <= high, got "
                f"{self.lambda_low}, {self.lambda_mean}, {self.lambda_high}"
            )


@dataclass(frozen=True)
class TemperatureBands:
    low: tuple[float, ...]
    mean: tuple[float, ...]
    high: tuple[float, ...]


@dataclass(frozen=True)
class Crossing:
    year: int
    fractional_year: float


# -- adoption model -----------------------------------------------------------


def adoption_quantiles(curves: AdoptionCurveSet, q: float) -> AdoptionProjection:
    """q-quantile of adoption across technologies, per year since introduction.

    At each offset only the technologies with data there take part; order
    statistics are linearly interpolated.
    """
    if not curves.curves:
        raise EmptySetError("no adoption curves given")
    if not 0.0 <= q <= 1.0:
        raise ConfigError(f"quantile must lie in [0, 1], got {q}")
    by_offset: dict[int, list[float]] = {}
    for points in curves.curves.values():
        for p in points:
            by_offset.setdefault(p.years_since_introduction, []).append(p.adoption_fraction)
    years = tuple(sorted(by_offset))
    fractions = tuple(float(np.quantile(by_offset[y], q)) for y in years)
    label = {0.25: "p25", 0.5: "median", 0.75: "p75"}.get(q, f"q{q:g}")
    if len(curves.curves) == 1:
        label = next(iter(curves.curves))
    return AdoptionProjection(years, fractions, label)


def project_adoption_emissions(
    baseline_annual: float,
    current_fraction: float,
    adoption: AdoptionProjection,
    horizon_years: int,
    start_year: int = 2020,
    start_offset: int = 0,
) -> EmissionTrajectory:
    """Scale today's emissions to full adoption, then follow the adoption curve.

    ``start_offset`` is how many years after its introduction the chain is
    at ``start_year`` (5 for Ethereum in 2020).
    """
    if not current_fraction > 0:
        raise ZeroCurrentFractionError("current adoption fraction must be positive")
    if current_fraction > 1:
        raise ConfigError(f"current adoption fraction must be <= 1, got {current_fraction}")
    if baseline_annual < 0:
        raise ConfigError(f"baseline emissions must be non-negative, got {baseline_annual}")
    full = baseline_annual / current_fraction
    annual = [full * adoption.at(start_offset + t) for t in range(horizon_years)]
    return EmissionTrajectory.from_annual(start_year, annual)


def calibrate_current_fraction(
    baseline_annual: float,
    adoption: AdoptionProjection,
    horizon_years: int,
    target_cumulative_gt: float,
    start_offset: int = 0,
) -> float:
    """Current adoption fraction that makes the cumulative total hit a target.

    Cumulative emissions are proportional to 1/current_fraction, so this is a
    direct solve rather than a search.
    """
    total = math.fsum(adoption.at(start_offset + t) for t in range(horizon_years))
    return baseline_annual * total / (1000 * target_cumulative_gt)


# -- logistic model -----------------------------------------------------------


def logistic_value(t: float, params: LogisticParams) -> float:
    K, P0, r0 = params.K, params.P0, params.r0
    exponent = -r0 * t
    if exponent > 700.0:
        # far before t=0: P is vanishingly small, keep it positive without overflowing
        return K * P0 / (K - P0) * math.exp(-exponent)
    return K * P0 / (P0 + (K - P0) * math.exp(exponent))


def logistic_time(value: float, params: LogisticParams) -> float:
    """Inverse of :func:`logistic_value`: the t at which P(t) == value."""
    K, P0, r0 = params.K, params.P0, params.r0
    if not 0 < value < K:
        raise ValueError(f"value must lie in (0, K), got {value}")
    return math.log((K - P0) * value / (P0 * (K - value))) / r0


@dataclass(frozen=True)
class LogisticFit:
    params: LogisticParams
    residual: float  # sum of squared log residuals


def _log_residuals(theta: np.ndarray, t: np.ndarray, log_obs: np.ndarray, K: float) -> np.ndarray:
    log_p0, r0 = theta
    p0 = np.exp(log_p0)
    model = np.log(K) + log_p0 - np.log(p0 + (K - p0) * np.exp(-r0 * t))
    return model - log_obs


def fit_logistic(
    series: TransactionSeries, K: float, t0_year: Optional[int] = None
) -> LogisticFit:
    """Least-squares fit of P0 and r0 in log space with K held fixed.

    A coarse grid over r0 in [0.01, 1] and P0 in [1, max observed] picks the
    starting point; a bounded trust-region solve refines it. Both stages are
    deterministic.
    """
    if len(series) < 3:
        raise InsufficientDataError(f"need at least 3 data points, got {len(series)}")
    obs = np.asarray(series.transactions, dtype=float)
    if np.any(obs <= 0):
        raise InsufficientDataError("transaction counts must be positive to fit in log space")
    if not K > obs.max():
        raise ConfigError(f"K={K:g} must exceed the largest observation {obs.max():g}")
    if t0_year is None:
        t0_year = series.years[0]
    t = np.asarray(series.years, dtype=float) - t0_year
    log_obs = np.log(obs)

    r_grid = np.linspace(0.01, 1.0, 100)[None, :, None]
    p_grid = np.geomspace(1.0, obs.max(), 120)[:, None, None]
    model = np.log(K * p_grid) - np.log(p_grid + (K - p_grid) * np.exp(-r_grid * t))
    ss = np.sum((model - log_obs) ** 2, axis=-1)
    i, j = np.unravel_index(np.argmin(ss), ss.shape)
    x0 = np.array([math.log(p_grid[i, 0, 0]), r_grid[0, j, 0]])

    res = least_squares(
        _log_residuals,
        x0,
        args=(t, log_obs, K),
        bounds=([-np.inf, 0.0], [math.log(K), np.inf]),
        method="trf",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=10_000,
    )
    log_p0, r0 = res.x
    p0 = math.exp(log_p0)
    if not (np.all(np.isfinite(res.x)) and res.status > 0):
        raise FitDivergenceError(f"logistic fit failed: {res.message}")
    if r0 < 1e-4:
        raise FitDivergenceError(f"no growth signal in the data (fitted r0={r0:.3g})")
    if not p0 < K:
        raise FitDivergenceError(f"fitted P0={p0:g} reached the carrying capacity")
    residual = float(np.sum(res.fun**2))
    return LogisticFit(LogisticParams(K, p0, float(r0), int(t0_year)), residual)


def project_logistic_emissions(
    baseline_annual: float,
    baseline_tx: float,
    params: LogisticParams,
    horizon_years: int,
    start_year: int = 2020,
) -> EmissionTrajectory:
    """Emissions proportional to transaction volume on the logistic curve."""
    if not baseline_tx > 0:
        raise ZeroBaselineTxError("baseline transaction volume must be positive")
    if baseline_annual < 0:
        raise ConfigError(f"baseline emissions must be non-negative, got {baseline_annual}")
    annual = [
        baseline_annual * logistic_value(start_year + i - params.t0_year, params) / baseline_tx
        for i in range(horizon_years)
    ]
    return EmissionTrajectory.from_annual(start_year, annual)


# -- climate ------------------------------------------------------------------


def temperature_rise(traj: EmissionTrajectory, climate: ClimateParams) -> TemperatureBands:
    return TemperatureBands(
        low=tuple(climate.lambda_low * c for c in traj.cumulative),
        mean=tuple(climate.lambda_mean * c for c in traj.cumulative),
        high=tuple(climate.lambda_high * c for c in traj.cumulative),
    )


def crossing_year(delta_t: Sequence[float], start_year: int, threshold: float) -> Optional[Crossing]:
    """First year the warming series reaches ``threshold``, or None.

    ``fractional_year`` interpolates linearly between the last year below
    the threshold and the first one at or above it.
    """
    if len(delta_t) == 0:
        raise ValueError("temperature series is empty")
    for i, value in enumerate(delta_t):
        if value >= threshold:
            if i == 0:
                return Crossing(start_year, float(start_year))
            prev = delta_t[i - 1]
            frac = (threshold - prev) / (value - prev)
            return Crossing(start_year + i, start_year + i - 1 + frac)
    return None
