from __future__ import annotations

from typing import Optional, Tuple

__all__: Tuple[str, ...] = (
    "CbaError",
    "InputError",
    "ComputationError",
    "ConfigError",
    "DataFileError",
    "InvalidAmountError",
    "IncompatibleAmounts",
    "MissingIndexYear",
    "InvalidIndex",
    "InsufficientData",
    "EmptyRange",
    "MissingDataYear",
    "SingularDesign",
    "InsufficientObservations",
    "DivisionByZero",
    "MissingRegressor",
    "UpwardSlopingDemand",
    "InvalidStep",
    "ChokeNotFound",
    "UnknownUnit",
    "EmptyFrame",
    "IncompatibleComponents",
    "MissingComponent",
    "UnknownParameter",
    "EmptyColumn",
)


class CbaError(Exception):
    """Base exception for every error raised by the valuation engine.

    Attributes
    ----------
    message: str
        The human readable reason.
    source: Optional[str]
        The file the offending data came from, if known.
    line: Optional[int]
        The 1-based line within ``source``, if known.
    """

    def __init__(self, message: str, *, source: Optional[str] = None, line: Optional[int] = None) -> None:
        self.message = message
        self.source = source
        self.line = line
        super().__init__(message)

    def with_context(self, source: str, line: Optional[int] = None) -> CbaError:
        """Attach file (and line) context unless a more specific one is already set."""
        if self.source is None:
            self.source = source
            self.line = line
        return self

    def __str__(self) -> str:
        if self.source is None:
            return self.message
        if self.line is None:
            return f"{self.source}: {self.message}"
        return f"{self.source}:{self.line}: {self.message}"


class InputError(CbaError):
    """Error raised for bad input data or configuration."""


class ComputationError(CbaError):
    """Error raised when a numerical precondition does not hold."""


class ConfigError(InputError):
    pass


class DataFileError(InputError):
    pass


class InvalidAmountError(InputError):
    pass


class IncompatibleAmounts(ComputationError):
    """Error raised when amounts of different currency or price base year are combined."""


class MissingIndexYear(InputError):
    def __init__(self, year: int, **kwargs) -> None:
        self.year = year
        super().__init__(f"The price index has no value for {year}.", **kwargs)


class InvalidIndex(InputError):
    pass


class InsufficientData(ComputationError):
    pass


class EmptyRange(InputError):
    pass


class MissingDataYear(InputError):
    def __init__(self, year: int, label: str, **kwargs) -> None:
        self.year = year
        self.label = label
        super().__init__(f"{label!r} has no value for {year}.", **kwargs)


class SingularDesign(ComputationError):
    pass


class InsufficientObservations(ComputationError):
    pass


class DivisionByZero(ComputationError):
    pass


class MissingRegressor(InputError):
    def __init__(self, name: str, **kwargs) -> None:
        self.name = name
        super().__init__(f"No value supplied for regressor {name!r}.", **kwargs)


class UpwardSlopingDemand(ComputationError):
    pass


class InvalidStep(InputError):
    pass


class ChokeNotFound(ComputationError):
    pass


class UnknownUnit(InputError):
    def __init__(self, unit: str, **kwargs) -> None:
        self.unit = unit
        super().__init__(f"{unit!r} is not a known quantity unit.", **kwargs)


class EmptyFrame(InputError):
    pass


class IncompatibleComponents(ComputationError):
    pass


class MissingComponent(InputError):
    pass


class UnknownParameter(InputError):
    def __init__(self, key: str, **kwargs) -> None:
        self.key = key
        super().__init__(f"{key!r} is not a known configuration key.", **kwargs)


class EmptyColumn(InputError):
    pass
