from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from utils.constants import BDT, MAX_YEAR, MILLION, MIN_YEAR
from utils.exceptions import IncompatibleAmounts, InvalidAmountError

__all__: Tuple[str, ...] = ("MoneyAmount", "convert_currency")


@dataclass(frozen=True)
class MoneyAmount:
    """A monetary value tagged with its currency and the year whose prices it is expressed in.

    Attributes
    ----------
    value: float
        The magnitude.
    currency: str
        An ISO-like currency code, e.g. ``BDT``, ``USD`` or ``Rs``.
    base_year: int
        The price-base year. Two amounts can only be added or subtracted if
        both the currency and the base year match.
    """

    value: float
    currency: str = BDT
    base_year: int = 2020

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise InvalidAmountError(f"Amount {self.value!r} is not a finite number.")
        if not MIN_YEAR <= self.base_year <= MAX_YEAR:
            raise InvalidAmountError(f"Base year {self.base_year} is outside {MIN_YEAR}-{MAX_YEAR}.")
        # normalise integers and numpy scalars to a plain float
        object.__setattr__(self, "value", float(self.value))

    def __repr__(self) -> str:
        return f"<MoneyAmount value={self.value} currency={self.currency} base_year={self.base_year}>"

    def __str__(self) -> str:
        return f"{self.currency} {self.value:,.2f} @{self.base_year}"

    @classmethod
    def zero(cls, currency: str = BDT, base_year: int = 2020) -> MoneyAmount:
        return cls(0.0, currency, base_year)

    @classmethod
    def millions(cls, value: float, currency: str = BDT, base_year: int = 2020) -> MoneyAmount:
        return cls(value * MILLION, currency, base_year)

    @property
    def in_millions(self) -> float:
        return self.value / MILLION

    def _check(self, other: MoneyAmount) -> None:
        if not isinstance(other, MoneyAmount):
            raise TypeError(f"Cannot combine MoneyAmount with {type(other).__name__}")
        if other.currency != self.currency or other.base_year != self.base_year:
            raise IncompatibleAmounts(f"Cannot combine {self} with {other}: currency and base year must match.")

    def __add__(self, other: MoneyAmount) -> MoneyAmount:
        self._check(other)
        return MoneyAmount(self.value + other.value, self.currency, self.base_year)

    def __sub__(self, other: MoneyAmount) -> MoneyAmount:
        self._check(other)
        return MoneyAmount(self.value - other.value, self.currency, self.base_year)

    def __mul__(self, factor: float) -> MoneyAmount:
        if isinstance(factor, MoneyAmount):
            return NotImplemented
        return MoneyAmount(self.value * factor, self.currency, self.base_year)

    __rmul__ = __mul__

    def __neg__(self) -> MoneyAmount:
        return MoneyAmount(-self.value, self.currency, self.base_year)

    def relabel(self, base_year: int) -> MoneyAmount:
        """Returns the same magnitude tagged with another base year, without any price adjustment."""
        return MoneyAmount(self.value, self.currency, base_year)


def convert_currency(amount: MoneyAmount, rate: float, currency: str) -> MoneyAmount:
    """Converts ``amount`` with an explicit rate, expressed as units of ``currency`` per unit of ``amount.currency``.

    Parameters
    ----------
    amount: MoneyAmount
        The amount to convert.
    rate: float
        The exchange rate, e.g. ``84`` to turn USD into BDT.
    currency: str
        The target currency code.
    """
    if not math.isfinite(rate) or rate <= 0:
        raise InvalidAmountError(f"Exchange rate {rate!r} must be a positive number.")
    return MoneyAmount(amount.value * rate, currency, amount.base_year)
