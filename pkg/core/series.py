from __future__ import annotations

import logging
import math
from typing import Dict, Tuple, Union

from models.cpi import CpiIndexTable, GeometricTrend
from models.money import MoneyAmount
from models.series import AnnualSeries, Provenance
from utils.exceptions import EmptyRange, InsufficientData, InvalidIndex, MissingDataYear, MissingIndexYear

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "rebase",
    "deflate",
    "backcast_cpi",
    "impute_series_by_cpi",
    "extend_series_by_cpi",
)

Anchor = Union[MoneyAmount, Tuple[int, float]]


def rebase(amount: MoneyAmount, target_year: int, ratio: float) -> MoneyAmount:
    """Re-expresses ``amount`` in ``target_year`` prices given the price-level ratio between the two years.

    Parameters
    ----------
    amount: MoneyAmount
        The amount to move.
    target_year: int
        The new price-base year.
    ratio: float
        ``price level in target_year / price level in amount.base_year``.
    """
    if not math.isfinite(ratio) or ratio <= 0:
        raise InvalidIndex(f"Price-level ratio must be strictly positive, got {ratio!r}.")
    return MoneyAmount(amount.value * ratio, amount.currency, target_year)


def deflate(amount: MoneyAmount, target_year: int, cpi: CpiIndexTable) -> MoneyAmount:
    """Moves ``amount`` from its base year to ``target_year`` prices using the CPI.

    Raises
    ------
    MissingIndexYear
        Either year is not covered by ``cpi``.
    """
    if target_year == amount.base_year:
        if target_year not in cpi:
            raise MissingIndexYear(target_year)
        return amount
    return rebase(amount, target_year, cpi[target_year] / cpi[amount.base_year])


def backcast_cpi(cpi: CpiIndexTable, earliest_year: int, method: GeometricTrend = GeometricTrend()) -> CpiIndexTable:
    """Extends ``cpi`` back to ``earliest_year`` by geometric trend extrapolation.

    The average annual growth ``g`` of the earliest ``method.window`` known years is
    computed from the endpoints, and each earlier year is set to ``cpi[t] / (1 + g)``.
    Known points are kept unchanged; synthesized points are tagged imputed.

    Raises
    ------
    InsufficientData
        The table holds fewer than ``window + 1`` years.
    """
    first = cpi.first_year
    if earliest_year >= first:
        return cpi

    window = method.window
    if window > len(cpi.series) - 1:
        raise InsufficientData(
            f"Backcast window of {window} years needs {window + 1} known CPI years, the table has {len(cpi.series)}."
        )

    growth = (cpi[first + window] / cpi[first]) ** (1.0 / window) - 1.0
    if growth <= -1.0:
        raise InvalidIndex(f"CPI trend growth {growth!r} cannot be extrapolated backwards.")

    points: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    value = cpi[first]
    for year in range(first - 1, earliest_year - 1, -1):
        value = value / (1.0 + growth)
        points[year] = value
        provenance[year] = Provenance.IMPUTED

    log.info(
        "Backcast CPI from %s to %s with %.4f%% average growth over %s years",
        first,
        earliest_year,
        growth * 100,
        window,
    )
    extension = AnnualSeries(cpi.series.label, points, provenance)
    return CpiIndexTable(cpi.series.merged(extension), cpi.base_year)


def _anchor(anchor: Anchor) -> Tuple[int, float]:
    if isinstance(anchor, MoneyAmount):
        return anchor.base_year, anchor.value
    year, value = anchor
    return int(year), float(value)


def impute_series_by_cpi(anchor: Anchor, target_years: range, cpi: CpiIndexTable, *, label: str = "imputed") -> AnnualSeries:
    """Builds a series over ``target_years`` from a single anchor, scaled by the CPI.

    ``series[t] = anchor.value * cpi[t] / cpi[anchor.year]``; every point is tagged
    imputed except the anchor year, which keeps the anchor value exactly.

    Raises
    ------
    EmptyRange
        ``target_years`` is empty.
    MissingIndexYear
        The anchor year or a target year is not covered by ``cpi``.
    """
    if len(target_years) == 0:
        raise EmptyRange(f"Cannot impute {label!r} over an empty range of years.")

    anchor_year, anchor_value = _anchor(anchor)
    anchor_index = cpi[anchor_year]

    points: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    for year in sorted(target_years):
        if year == anchor_year:
            points[year] = anchor_value
            provenance[year] = Provenance.ACTUAL
        else:
            points[year] = anchor_value * cpi[year] / anchor_index
            provenance[year] = Provenance.IMPUTED
    return AnnualSeries(label, points, provenance)


def extend_series_by_cpi(series: AnnualSeries, target_years: range, cpi: CpiIndexTable) -> AnnualSeries:
    """Fills the years of ``target_years`` that ``series`` lacks.

    Years before the first actual point are scaled from the first actual point and years
    after the last actual point from the last one. Existing points are kept as they are.
    """
    if len(target_years) == 0:
        raise EmptyRange(f"Cannot extend {series.label!r} over an empty range of years.")

    actual = series.actual_years()
    if not actual:
        raise MissingDataYear(target_years[0], series.label)

    first, last = actual[0], actual[-1]
    points: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    for year in target_years:
        if year in series:
            points[year] = series[year]
            provenance[year] = series.provenance_of(year)
            continue
        anchor_year = first if year < first else last
        points[year] = series[anchor_year] * cpi[year] / cpi[anchor_year]
        provenance[year] = Provenance.IMPUTED
    return AnnualSeries(series.label, points, provenance)
