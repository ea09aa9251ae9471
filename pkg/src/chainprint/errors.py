"""Exception hierarchy.

Three families matter to callers (and to the CLI exit codes):

* :class:`ConfigError` - bad scenario/flags, exit code 2
* :class:`DataError` - a dataset file violates its schema or invariants, exit code 1
* :class:`ModelError` - a model cannot be evaluated for the given inputs, exit code 1
"""

from __future__ import annotations


class ChainprintError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ChainprintError, ValueError):
    """Invalid configuration: unknown keys, missing paths, bad parameters."""


class DataError(ChainprintError, ValueError):
    pass


class ModelError(ChainprintError, ValueError):
    pass


# -- values -------------------------------------------------------------------


class InvalidQuantityError(ModelError):
    """A physical quantity was constructed outside its admissible range."""


# -- ingest -------------------------------------------------------------------


class SchemaError(DataError):
    pass


class ShareSumError(DataError):
    pass


class DuplicateCountryError(DataError):
    pass


class DuplicateHardwareError(DataError):
    pass


class NonMonotoneError(DataError):
    pass


class NonMonotoneDateError(NonMonotoneError):
    pass


class NegativeValueError(DataError):
    pass


class RangeError(DataError):
    pass


# -- weighting ----------------------------------------------------------------


class EmptyTableError(ModelError):
    pass


# -- PoW ----------------------------------------------------------------------


class NonPositiveEfficiencyError(ModelError):
    pass


class ZeroElectricityPriceError(ModelError):
    pass


class NoHardwareAvailableError(ModelError):
    pass


class MissingFactorError(ModelError):
    pass


# -- PoS / equilibrium ----------------------------------------------------------


class ZeroReturnError(ModelError):
    pass


class NonConvergenceError(ModelError):
    pass


# -- projection ---------------------------------------------------------------


class EmptySetError(ModelError):
    pass


class ZeroCurrentFractionError(ModelError):
    pass


class ZeroBaselineTxError(ModelError):
    pass


class HorizonError(ModelError):
    """Requested projection horizon runs past the available adoption data."""


class InsufficientDataError(ModelError):
    pass


class FitDivergenceError(ModelError):
    pass
