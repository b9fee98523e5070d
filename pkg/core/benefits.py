from __future__ import annotations

import logging
from typing import Dict, Optional, Tuple

from core.series import impute_series_by_cpi
from models.components import Side, ValuationComponent
from models.cpi import CpiIndexTable
from models.money import MoneyAmount
from models.params import AccumulationMode, CpiScale, Discount, ElectricityParams, FisheriesParams, PriceAnchor
from models.series import AnnualSeries, Provenance, series_sum
from utils.constants import BDT, KG_PER_TON, KW_PER_MW, MILLION
from utils.exceptions import DivisionByZero, EmptyRange, InputError

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "electricity_annual_net",
    "electricity_npv",
    "fisheries_implied_price",
    "fisheries_price_series",
    "fisheries_npv",
    "tourism_npv",
)


def electricity_annual_net(params: ElectricityParams) -> MoneyAmount:
    """``Q * (P - C)`` for one year, where ``Q`` is the yearly output in kWh at average capacity."""
    kwh = params.avg_capacity_mw * KW_PER_MW * params.hours_per_day * params.days_per_year
    return MoneyAmount(kwh * params.margin, BDT, params.reference_year)


def electricity_npv(params: ElectricityParams, cpi: Optional[CpiIndexTable] = None) -> ValuationComponent:
    """Carries the reference-year net benefit across the whole year range and sums it.

    Under :class:`CpiScale` each year gets ``annual * cpi[t] / cpi[reference]``; under
    :class:`Discount` it gets ``annual / (1 + r) ** (reference - t)``. No yearly output
    was observed, so every point is imputed.

    Raises
    ------
    MissingIndexYear
        A year of the range is not covered by ``cpi`` in CPI-scaling mode.
    """
    annual = electricity_annual_net(params)
    reference = params.reference_year
    mode = params.mode

    points: Dict[int, float] = {}
    if isinstance(mode, CpiScale):
        if cpi is None:
            raise InputError("CPI scaling of the electricity benefit needs a CPI table.")
        anchor = cpi[reference]
        for year in range(params.first_year, params.last_year + 1):
            points[year] = annual.value * cpi[year] / anchor
    elif isinstance(mode, Discount):
        for year in range(params.first_year, params.last_year + 1):
            points[year] = annual.value / (1.0 + mode.rate) ** (reference - year)
    else:
        raise InputError(f"Unknown electricity mode {mode!r}.")

    series = AnnualSeries("electricity", points, dict.fromkeys(points, Provenance.IMPUTED))
    total = series_sum(series)
    log.info("Electricity NPV %s-%s under %s: %.2f M", params.first_year, params.last_year, mode, total.total / MILLION)
    return ValuationComponent(
        key="electricity",
        label="Electricity",
        npv=MoneyAmount(total.total, BDT, reference),
        side=Side.BENEFIT,
        first_year=params.first_year,
        last_year=params.last_year,
        method=str(mode),
        imputed_fraction=1.0,
        series=series,
    )


def fisheries_implied_price(production_tons: float, revenue_mbdt: float) -> float:
    """Price per kg implied by a year's production (tons) and revenue (million BDT)."""
    if production_tons == 0:
        raise DivisionByZero("Production is zero, the implied fish price is undefined.")
    if production_tons < 0 or revenue_mbdt < 0:
        raise InputError("Production and revenue cannot be negative.")
    return revenue_mbdt * MILLION / (production_tons * KG_PER_TON)


def fisheries_price_series(params: FisheriesParams, cpi: CpiIndexTable) -> AnnualSeries:
    """The price per kg for every valued year.

    Years with both an actual catch and an actual revenue use the implied price. Other
    years are scaled by the CPI from the anchor: the latest revenue-implied price, or the
    published average price when ``price_anchor`` is ``AVERAGE`` or no revenue is known.
    """
    observed: Dict[int, float] = {}
    revenue = params.revenue_series
    if revenue is not None:
        for year in revenue.actual_years():
            if params.catch_series.is_actual(year):
                observed[year] = fisheries_implied_price(params.catch_series[year], revenue[year])

    if params.price_anchor is PriceAnchor.REVENUE and observed:
        anchor_year = max(observed)
        anchor_price = observed[anchor_year]
    else:
        if params.price_anchor is PriceAnchor.REVENUE:
            log.warning("No revenue-implied fish price is available; anchoring on the average price %.2f", params.avg_price)
        anchor_year, anchor_price = params.avg_price_year, params.avg_price

    points: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    for year in range(params.first_year, params.base_year + 1):
        if year in observed:
            points[year] = observed[year]
            provenance[year] = Provenance.ACTUAL
        else:
            points[year] = anchor_price * cpi[year] / cpi[anchor_year]
            provenance[year] = Provenance.IMPUTED
    return AnnualSeries("fish_price", points, provenance)


def fisheries_npv(params: FisheriesParams, cpi: CpiIndexTable) -> ValuationComponent:
    """Net fisheries benefit ``sum (R_t - C_t) * factor_t`` brought to ``base_year``.

    ``R_t`` is the catch in kg times the year's price and ``C_t`` the catch times the
    unit cost scaled by the CPI from its anchor year. Under ``COMPOUND`` the factor is
    ``(1 + r) ** (base_year - t)``; under ``DISCOUNT`` it is its reciprocal.

    Raises
    ------
    MissingDataYear
        The catch series does not cover a year between ``first_year`` and ``base_year``.
    """
    catch = params.catch_series
    prices = fisheries_price_series(params, cpi)
    cost_anchor = cpi[params.unit_cost_year]

    costs: Dict[int, float] = {}
    cost_provenance: Dict[int, Provenance] = {}
    nets: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    growth = 1.0 + params.discount_rate
    for year in range(params.first_year, params.base_year + 1):
        kg = catch[year] * KG_PER_TON
        costs[year] = params.unit_cost * cpi[year] / cost_anchor
        cost_provenance[year] = Provenance.ACTUAL if year == params.unit_cost_year else Provenance.IMPUTED

        exponent = params.base_year - year
        factor = growth**exponent if params.accumulation_mode is AccumulationMode.COMPOUND else growth**-exponent
        nets[year] = kg * (prices[year] - costs[year]) * factor
        imputed = not catch.is_actual(year) or not prices.is_actual(year)
        provenance[year] = Provenance.IMPUTED if imputed else Provenance.ACTUAL

    series = AnnualSeries("fisheries", nets, provenance)
    total = series_sum(series)
    log.info(
        "Fisheries NPV %s-%s (%s at %.0f%%): %.2f M",
        params.first_year,
        params.base_year,
        params.accumulation_mode,
        params.discount_rate * 100,
        total.total / MILLION,
    )
    unit_costs = AnnualSeries("fish_unit_cost", costs, cost_provenance)
    inputs = tuple(s for s in (catch, prices, unit_costs) if s.imputed_count)
    return ValuationComponent(
        key="fisheries",
        label="Fisheries",
        npv=MoneyAmount(total.total, BDT, params.base_year),
        side=Side.BENEFIT,
        first_year=params.first_year,
        last_year=params.base_year,
        method=f"{params.accumulation_mode}({params.discount_rate:g}), price anchor {params.price_anchor}",
        imputed_fraction=series.imputed_fraction,
        series=series,
        imputed_inputs=inputs,
    )


def tourism_npv(annual_cs: MoneyAmount, year_range: Tuple[int, int], cpi: CpiIndexTable) -> ValuationComponent:
    """Spreads the annual consumer surplus over ``year_range`` by the CPI and sums it.

    The result is tagged with the last year of the range.
    """
    first, last = year_range
    if first > last:
        raise EmptyRange(f"The tourism year range {first}-{last} is empty.")

    series = impute_series_by_cpi(annual_cs, range(first, last + 1), cpi, label="tourism")
    total = series_sum(series)
    log.info("Tourism NPV %s-%s from %s: %.2f M", first, last, annual_cs, total.total / MILLION)
    return ValuationComponent(
        key="tourism",
        label="Tourism",
        npv=MoneyAmount(total.total, annual_cs.currency, last),
        side=Side.BENEFIT,
        first_year=first,
        last_year=last,
        method=f"cpi_spread(anchor {annual_cs.base_year})",
        imputed_fraction=series.imputed_fraction,
        series=series,
    )
