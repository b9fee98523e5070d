import math
import re
from typing import Iterable, Optional

from utils.exceptions import InputError

FISCAL_YEAR_REGEX = re.compile(r"^\s*(\d{4})(?:\s*[-/]\s*(\d{2}|\d{4}))?\s*$")


def fiscal_year_start(label: str) -> int:
    """Maps a fiscal-year label such as ``2006-07`` to the calendar year it starts in."""
    match = FISCAL_YEAR_REGEX.match(str(label))
    if match is None:
        raise InputError(f"{label!r} is not a valid year or fiscal-year label.")
    return int(match.group(1))


def compensated_sum(values: Iterable[float]) -> float:
    """Error-free summation of ``values``; the result does not depend on their order."""
    return math.fsum(values)


def percent_deviation(value: float, reference: float) -> Optional[float]:
    if reference == 0:
        return None
    return (value - reference) / abs(reference) * 100.0
