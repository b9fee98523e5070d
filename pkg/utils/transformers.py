import re
from typing import Tuple

from utils.constants import MAX_YEAR, MIN_YEAR
from utils.exceptions import InvalidAmountError, InputError
from utils.functions import fiscal_year_start

AMOUNT_REGEX = re.compile(r"^\s*([-+]?\d{1,15}(?:,\d{3})*(?:\.\d+)?)\s*([kmbt]?)\s*$")
AMOUNT_EXPONENTS = {"k": 3, "m": 6, "b": 9, "t": 12}

RANGE_REGEX = re.compile(r"^\s*(\d{4})\s*(?::|\.\.)\s*(\d{4})\s*$")


__all__: Tuple[str, ...] = (
    "AmountTransformer",
    "YearTransformer",
    "YearRangeTransformer",
)


class AmountTransformer:
    """Parses amounts such as ``289.71m``, ``2403M``, ``17,678`` or ``1.5e6``."""

    def transform(self, argument: str) -> float:
        match = AMOUNT_REGEX.match(str(argument).lower())
        if match:
            digits = match.group(1).replace(",", "")
            suffix = match.group(2)
            # shift the exponent instead of multiplying so 289.71m stays exact
            return float(f"{digits}e{AMOUNT_EXPONENTS[suffix]}") if suffix else float(digits)
        try:
            return float(argument)
        except ValueError:
            raise InvalidAmountError(f"Invalid amount {argument!r}. Please provide a number, optionally suffixed with k, m, b or t.")

    __call__ = transform


class YearTransformer:
    """Parses a calendar year or a fiscal-year label into a year inside the supported span."""

    def transform(self, argument: str) -> int:
        year = fiscal_year_start(argument)
        if year < MIN_YEAR or year > MAX_YEAR:
            raise InputError(f"The year {year} is outside the supported span {MIN_YEAR}-{MAX_YEAR}.")
        return year

    __call__ = transform


class YearRangeTransformer:
    """Parses ``1962:2020`` (or ``1962..2020``) into an inclusive ``(first, last)`` pair."""

    def transform(self, argument: str) -> Tuple[int, int]:
        match = RANGE_REGEX.match(str(argument))
        if match is None:
            raise InputError(f"{argument!r} is not a year range, expected something like 1962:2020.")
        first, last = YearTransformer()(match.group(1)), YearTransformer()(match.group(2))
        if first > last:
            raise InputError(f"The year range {argument!r} is empty.")
        return first, last

    __call__ = transform
