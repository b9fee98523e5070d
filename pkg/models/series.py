from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from utils.exceptions import InputError, InsufficientData, MissingDataYear
from utils.functions import compensated_sum

__all__: Tuple[str, ...] = (
    "Provenance",
    "AnnualSeries",
    "SeriesTotal",
    "ImputedPoint",
    "ImputationLedger",
    "series_sum",
)


class Provenance(Enum):
    ACTUAL = "actual"
    IMPUTED = "imputed"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, value: Optional[str]) -> Provenance:
        if value is None or (isinstance(value, float) and math.isnan(value)) or str(value).strip() == "":
            return cls.ACTUAL
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise InputError(f"{value!r} is not a provenance tag, expected 'actual' or 'imputed'.")


class AnnualSeries:
    """An immutable year-indexed series with one provenance tag per year.

    Attributes
    ----------
    label: str
        A short name used in logs and in the imputation ledger.
    points: Mapping[int, float]
        The values, keyed by year, over a contiguous span of years.
    provenance: Mapping[int, Provenance]
        Whether each year was observed or imputed.
    """

    __slots__: Tuple[str, ...] = ("label", "_points", "_provenance")

    def __init__(
        self,
        label: str,
        points: Mapping[int, float],
        provenance: Optional[Mapping[int, Provenance]] = None,
    ) -> None:
        years = sorted(int(year) for year in points)
        if years and years != list(range(years[0], years[-1] + 1)):
            missing = sorted(set(range(years[0], years[-1] + 1)) - set(years))
            raise InputError(f"Series {label!r} is not contiguous, missing {missing}.")

        provenance = dict(provenance or {})
        extra = set(provenance) - set(years)
        if extra:
            raise InputError(f"Series {label!r} tags years without values: {sorted(extra)}.")

        self.label = label
        self._points: Dict[int, float] = {year: float(points[year]) for year in years}
        self._provenance: Dict[int, Provenance] = {year: provenance.get(year, Provenance.ACTUAL) for year in years}

    def __repr__(self) -> str:
        span = f"{self.first_year}-{self.last_year}" if self._points else "empty"
        return f"<AnnualSeries label={self.label!r} span={span} imputed={self.imputed_count}>"

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[int]:
        return iter(self._points)

    def __contains__(self, year: object) -> bool:
        return year in self._points

    def __getitem__(self, year: int) -> float:
        try:
            return self._points[year]
        except KeyError:
            raise MissingDataYear(year, self.label) from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnnualSeries):
            return NotImplemented
        return self.label == other.label and self._points == other._points and self._provenance == other._provenance

    def __hash__(self) -> int:
        return hash((self.label, tuple(self._points.items())))

    @property
    def points(self) -> Mapping[int, float]:
        return MappingProxyType(self._points)

    @property
    def provenance(self) -> Mapping[int, Provenance]:
        return MappingProxyType(self._provenance)

    @property
    def years(self) -> List[int]:
        return list(self._points)

    @property
    def first_year(self) -> int:
        if not self._points:
            raise InsufficientData(f"Series {self.label!r} holds no values.")
        return next(iter(self._points))

    @property
    def last_year(self) -> int:
        if not self._points:
            raise InsufficientData(f"Series {self.label!r} holds no values.")
        return next(reversed(self._points))

    @property
    def imputed_years(self) -> List[int]:
        return [year for year, tag in self._provenance.items() if tag is Provenance.IMPUTED]

    @property
    def imputed_count(self) -> int:
        return len(self.imputed_years)

    @property
    def imputed_fraction(self) -> float:
        """The share of imputed points."""
        if not self._points:
            return 0.0
        return self.imputed_count / len(self._points)

    def items(self) -> Iterator[Tuple[int, float]]:
        return iter(self._points.items())

    def get(self, year: int, default: Optional[float] = None) -> Optional[float]:
        return self._points.get(year, default)

    def provenance_of(self, year: int) -> Provenance:
        try:
            return self._provenance[year]
        except KeyError:
            raise MissingDataYear(year, self.label) from None

    def is_actual(self, year: int) -> bool:
        return self._provenance.get(year) is Provenance.ACTUAL

    def actual_years(self) -> List[int]:
        return [year for year, tag in self._provenance.items() if tag is Provenance.ACTUAL]

    def merged(self, other: AnnualSeries, *, label: Optional[str] = None) -> AnnualSeries:
        """Returns a new series holding the points of both; points of ``self`` win on overlap."""
        points = {**other._points, **self._points}
        provenance = {**other._provenance, **self._provenance}
        return AnnualSeries(label or self.label, points, provenance)


@dataclass(frozen=True)
class SeriesTotal:
    total: float
    points: int
    imputed_points: int


def series_sum(series: AnnualSeries) -> SeriesTotal:
    """Sums a series in ascending year order with compensated summation.

    Returns
    -------
    SeriesTotal
        The total along with how many points, and how many imputed points, contributed.
    """
    return SeriesTotal(
        total=compensated_sum(value for _, value in sorted(series.items())),
        points=len(series),
        imputed_points=series.imputed_count,
    )


@dataclass(frozen=True, order=True)
class ImputedPoint:
    series: str
    year: int
    value: float
    method: str


class ImputationLedger:
    """Collects every imputed datum consumed during a run, each exactly once."""

    __slots__: Tuple[str, ...] = ("_entries",)

    def __init__(self) -> None:
        self._entries: Dict[Tuple[str, int], ImputedPoint] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[ImputedPoint]:
        return iter(self.entries)

    @property
    def entries(self) -> List[ImputedPoint]:
        return sorted(self._entries.values())

    def record(self, series: AnnualSeries, method: str = "cpi") -> None:
        for year in series.imputed_years:
            key = (series.label, year)
            if key in self._entries:
                continue
            self._entries[key] = ImputedPoint(series.label, year, series[year], method)

    def counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for point in self.entries:
            counts[point.series] = counts.get(point.series, 0) + 1
        return counts
