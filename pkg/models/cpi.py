from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from models.series import AnnualSeries, Provenance
from utils.constants import CPI_BASE_YEAR
from utils.exceptions import InputError, InsufficientData, InvalidIndex, MissingIndexYear

__all__: Tuple[str, ...] = ("CpiIndexTable", "GeometricTrend")

BASE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GeometricTrend:
    """Backcast method: extrapolate backwards with the average growth of the earliest ``window`` known years."""

    window: int = 5

    def __post_init__(self) -> None:
        if self.window < 1:
            raise InputError(f"The backcast window must be at least 1 year, got {self.window}.")


class CpiIndexTable:
    """Consumer price index values by year, normalised to 100 in the base year.

    Parameters
    ----------
    series: AnnualSeries
        The index values. Every value must be strictly positive.
    base_year: int
        The reference year; if it is covered the value there must be 100.
    """

    __slots__: Tuple[str, ...] = ("series", "base_year")

    def __init__(self, series: AnnualSeries, base_year: int = CPI_BASE_YEAR) -> None:
        if not len(series):
            raise InsufficientData("The CPI table holds no values.")
        for year, value in series.items():
            if not math.isfinite(value) or value <= 0:
                raise InvalidIndex(f"CPI value for {year} must be strictly positive, got {value!r}.")
        if base_year in series and abs(series[base_year] - 100.0) > BASE_TOLERANCE:
            raise InvalidIndex(f"CPI value in base year {base_year} must be 100, got {series[base_year]!r}.")

        self.series = series
        self.base_year = base_year

    @classmethod
    def from_mapping(
        cls,
        values: Mapping[int, float],
        *,
        base_year: int = CPI_BASE_YEAR,
        provenance: Optional[Mapping[int, Provenance]] = None,
        label: str = "cpi",
    ) -> CpiIndexTable:
        return cls(AnnualSeries(label, values, provenance), base_year)

    def __repr__(self) -> str:
        return f"<CpiIndexTable base_year={self.base_year} series={self.series!r}>"

    def __contains__(self, year: object) -> bool:
        return year in self.series

    def __getitem__(self, year: int) -> float:
        if year not in self.series:
            raise MissingIndexYear(year)
        return self.series[year]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CpiIndexTable):
            return NotImplemented
        return self.base_year == other.base_year and self.series == other.series

    def __hash__(self) -> int:
        return hash((self.base_year, self.series))

    @property
    def first_year(self) -> int:
        return self.series.first_year

    @property
    def last_year(self) -> int:
        return self.series.last_year

    @property
    def imputed_fraction(self) -> float:
        return self.series.imputed_fraction
