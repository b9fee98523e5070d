from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple, Union

from models.money import MoneyAmount, convert_currency
from models.series import AnnualSeries
from utils.constants import BDT, BUNDLED_LIFE_EXPECTANCY, KG_PER_MOUND, RS, UNITS, USD
from utils.exceptions import InputError, UnknownUnit

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "CpiScale",
    "Discount",
    "ElectricityMode",
    "ElectricityParams",
    "AccumulationMode",
    "PriceAnchor",
    "FisheriesParams",
    "ConstructionCostSheet",
    "LineItem",
    "HouseholdLossRecord",
    "LifeLossParams",
    "LifeExpectancyTable",
)


def _check_rate(name: str, rate: float) -> None:
    if not math.isfinite(rate) or not 0.0 <= rate <= 1.0:
        raise InputError(f"{name} must lie in [0, 1], got {rate!r}.")


def _check_range(first: int, last: int) -> None:
    if first > last:
        raise InputError(f"The year range {first}-{last} is empty.")


@dataclass(frozen=True)
class CpiScale:
    """Carry the reference-year net benefit to other years by the CPI ratio."""

    def __str__(self) -> str:
        return "cpi_scale"


@dataclass(frozen=True)
class Discount:
    """Carry the reference-year net benefit to earlier years by discounting at ``rate``."""

    rate: float = 0.07

    def __post_init__(self) -> None:
        _check_rate("Discount rate", self.rate)

    def __str__(self) -> str:
        return f"discount({self.rate:g})"


ElectricityMode = Union[CpiScale, Discount]


@dataclass(frozen=True)
class ElectricityParams:
    """Inputs of the electricity net benefit.

    Attributes
    ----------
    avg_capacity_mw: float
        Average generation, in MW, assumed for every hour of the year.
    unit_price: float
        Selling price, BDT/kWh.
    unit_cost: float
        Production cost, BDT/kWh.
    first_year, last_year: int
        The valuation span; ``last_year`` is the year the prices refer to.
    mode: ElectricityMode
        How the reference-year value is carried to the other years.
    """

    avg_capacity_mw: float = 180.0
    hours_per_day: float = 24.0
    days_per_year: float = 365.0
    unit_price: float = 7.78
    unit_cost: float = 4.20
    first_year: int = 1962
    last_year: int = 2020
    mode: ElectricityMode = field(default_factory=Discount)

    def __post_init__(self) -> None:
        if not self.avg_capacity_mw > 0:
            raise InputError(f"Capacity must be positive, got {self.avg_capacity_mw!r}.")
        if self.unit_price < 0 or self.unit_cost < 0:
            raise InputError("Electricity price and cost cannot be negative.")
        if self.hours_per_day <= 0 or self.days_per_year <= 0:
            raise InputError("Hours per day and days per year must be positive.")
        _check_range(self.first_year, self.last_year)

    @classmethod
    def from_usd_cost(cls, cost_usd: float, exchange_rate: float, **kwargs) -> ElectricityParams:
        """Builds params with the unit cost converted from USD/kWh at ``exchange_rate`` BDT/USD."""
        unit_cost = convert_currency(MoneyAmount(cost_usd, USD), exchange_rate, BDT).value
        return cls(unit_cost=unit_cost, **kwargs)

    @property
    def reference_year(self) -> int:
        return self.last_year

    @property
    def margin(self) -> float:
        return self.unit_price - self.unit_cost


class AccumulationMode(Enum):
    COMPOUND = "compound"
    DISCOUNT = "discount"

    def __str__(self) -> str:
        return self.value


class PriceAnchor(Enum):
    REVENUE = "revenue"
    AVERAGE = "average"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FisheriesParams:
    """Inputs of the fisheries net present value.

    Attributes
    ----------
    catch_series: AnnualSeries
        Yearly catch in tons, keyed by the starting year of the fiscal year.
    revenue_series: Optional[AnnualSeries]
        Yearly revenue in million BDT, where known.
    avg_price: float
        Average price (BDT/kg) used as anchor when ``price_anchor`` is ``AVERAGE``.
    unit_cost: float
        Cost per kg caught in ``unit_cost_year`` prices.
    discount_rate: float
        ``r`` of the accumulation factor ``(1 + r) ** (base_year - t)``.
    """

    catch_series: AnnualSeries
    revenue_series: Optional[AnnualSeries] = None
    avg_price: float = 126.23
    avg_price_year: int = 2016
    price_anchor: PriceAnchor = PriceAnchor.REVENUE
    unit_cost: float = 15.0
    unit_cost_year: int = 2019
    discount_rate: float = 0.10
    base_year: int = 2019
    first_year: int = 1986
    accumulation_mode: AccumulationMode = AccumulationMode.COMPOUND

    def __post_init__(self) -> None:
        for year, value in self.catch_series.items():
            if value < 0:
                raise InputError(f"Catch for {year} cannot be negative, got {value!r}.")
        if self.avg_price < 0 or self.unit_cost < 0:
            raise InputError("Fish price and unit cost cannot be negative.")
        _check_rate("Fisheries discount rate", self.discount_rate)
        _check_range(self.first_year, self.base_year)
        if self.unit_cost >= self.avg_price:
            log.warning("Fish unit cost %.2f is not below the average price %.2f", self.unit_cost, self.avg_price)


@dataclass(frozen=True)
class ConstructionCostSheet:
    """The dam's direct construction costs in 1957 prices.

    Attributes
    ----------
    establishment: MoneyAmount
        Establishment cost (``Rs``).
    compensation: MoneyAmount
        Land-acquisition compensation (``BDT``), ``compensation_rate * acres``.
    bdt_per_rs: float
        Taka per rupee parity applied to the establishment cost.
    stated_total: Optional[MoneyAmount]
        The total as published, which governs when present.
    """

    establishment: MoneyAmount = MoneyAmount(2403e6, RS, 1957)
    compensation: MoneyAmount = MoneyAmount(37.8e6, BDT, 1957)
    compensation_rate: float = 700.0
    acres: float = 54_000.0
    bdt_per_rs: float = 1.0
    stated_total: Optional[MoneyAmount] = MoneyAmount(2440.3e6, BDT, 1957)

    def __post_init__(self) -> None:
        expected = self.compensation_rate * self.acres
        if abs(self.compensation.value - expected) > 1e-6 * max(abs(expected), 1.0):
            raise InputError(
                f"Compensation {self.compensation.value:,.2f} does not equal {self.compensation_rate:g} x {self.acres:g} acres."
            )
        if self.establishment.base_year != self.compensation.base_year:
            raise InputError("Establishment and compensation costs must share a price year.")

    @property
    def itemised_total(self) -> MoneyAmount:
        establishment = self.establishment
        if establishment.currency != BDT:
            establishment = convert_currency(establishment, self.bdt_per_rs, BDT)
        return establishment + self.compensation

    def nominal_total(self) -> MoneyAmount:
        """The total in cost-year prices: the stated total if any, else the itemised sum."""
        itemised = self.itemised_total
        if self.stated_total is None:
            return itemised
        if abs(self.stated_total.value - itemised.value) > 0.5:
            log.warning(
                "Construction cost sheet: itemised total %.1f M differs from the stated total %.1f M; the stated total is used",
                itemised.in_millions,
                self.stated_total.in_millions,
            )
        return self.stated_total


@dataclass(frozen=True)
class LineItem:
    """One household loss line, e.g. rice: 326 mound at 1050 BDT."""

    name: str
    quantity: float
    unit: str
    unit_price: float
    reported_total: Optional[float] = None

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise UnknownUnit(self.unit)
        if self.quantity < 0 or self.unit_price < 0:
            raise InputError(f"Line item {self.name!r} cannot have a negative quantity or price.")

    @property
    def value(self) -> float:
        return self.quantity * self.unit_price

    @property
    def quantity_kg(self) -> Optional[float]:
        """The quantity in kilograms for mass units."""
        if self.unit == "kg":
            return self.quantity
        if self.unit == "mound":
            return self.quantity * KG_PER_MOUND
        return None

    def discrepancy(self) -> Optional[float]:
        """``reported_total - value`` when a reported total exists and differs."""
        if self.reported_total is None or math.isclose(self.reported_total, self.value, rel_tol=0.0, abs_tol=0.5):
            return None
        return self.reported_total - self.value


@dataclass(frozen=True)
class HouseholdLossRecord:
    respondent_id: str
    items: Tuple[LineItem, ...]
    land_lost_decimal: float = 0.0
    displaced: bool = False
    base_year: int = 2019

    def __post_init__(self) -> None:
        if self.land_lost_decimal < 0:
            raise InputError(f"Household {self.respondent_id!r} cannot have lost negative land.")


@dataclass(frozen=True)
class LifeLossParams:
    """Inputs of the forgone-income value of a life: ``max(T - X, 0) * W``."""

    age_at_death: float
    life_expectancy: float
    annual_income: float
    death_count: int = 1

    def __post_init__(self) -> None:
        if self.age_at_death < 0:
            raise InputError("Age at death cannot be negative.")
        if self.annual_income < 0:
            raise InputError("Annual income cannot be negative.")
        if self.death_count < 0:
            raise InputError("Death count cannot be negative.")


class LifeExpectancyTable:
    """Life expectancy at birth by year, bundled with the 1987 and 1994 values."""

    __slots__: Tuple[str, ...] = ("_values",)

    def __init__(self, values: Optional[Mapping[int, float]] = None) -> None:
        self._values: Dict[int, float] = dict(BUNDLED_LIFE_EXPECTANCY)
        if values:
            self._values.update({int(year): float(value) for year, value in values.items()})

    def __repr__(self) -> str:
        return f"<LifeExpectancyTable years={sorted(self._values)}>"

    def __contains__(self, year: object) -> bool:
        return year in self._values

    def __getitem__(self, year: int) -> float:
        try:
            return self._values[year]
        except KeyError:
            raise InputError(f"No life expectancy is known for {year}.") from None
