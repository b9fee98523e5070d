from __future__ import annotations

import logging
from typing import Optional, Sequence, Tuple

from core.series import deflate, rebase
from models.components import Side, Unavailable
from models.cpi import CpiIndexTable
from models.money import MoneyAmount
from models.params import ConstructionCostSheet, HouseholdLossRecord, LifeExpectancyTable, LifeLossParams
from utils.constants import BDT
from utils.exceptions import EmptyFrame, IncompatibleAmounts, InputError
from utils.functions import compensated_sum

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "construction_pv",
    "household_loss_value",
    "displacement_cost",
    "value_of_life",
    "value_of_life_from_death",
    "lives_lost_total",
    "environmental_cost_cvm",
    "security_cost",
)


def construction_pv(
    sheet: ConstructionCostSheet,
    target_year: int,
    cpi: Optional[CpiIndexTable] = None,
    *,
    ratio: Optional[float] = None,
) -> MoneyAmount:
    """Present value of the construction cost sheet in ``target_year`` prices.

    Parameters
    ----------
    sheet: ConstructionCostSheet
        Establishment and compensation costs in cost-year prices.
    target_year: int
        The price year to move to.
    cpi: Optional[CpiIndexTable]
        Used when no ``ratio`` is given.
    ratio: Optional[float]
        A published deflator ratio that takes precedence over the CPI.
    """
    nominal = sheet.nominal_total()
    if ratio is not None:
        return rebase(nominal, target_year, ratio)
    if cpi is None:
        raise InputError("Construction cost needs either a CPI table or an explicit deflator ratio.")
    return deflate(nominal, target_year, cpi)


def household_loss_value(record: HouseholdLossRecord) -> MoneyAmount:
    """Sum of ``quantity * unit_price`` over the record's line items, in survey-year BDT.

    A line whose reported total disagrees with its own arithmetic is logged as a warning
    and valued by the arithmetic.
    """
    for item in record.items:
        gap = item.discrepancy()
        if gap is not None:
            log.warning(
                "Household %s, %s: %g %s x %g = %.0f but the reported total is %.0f; the computed value is used",
                record.respondent_id,
                item.name,
                item.quantity,
                item.unit,
                item.unit_price,
                item.value,
                item.reported_total,
            )
    return MoneyAmount(compensated_sum(item.value for item in record.items), BDT, record.base_year)


def displacement_cost(per_family_loss: MoneyAmount, families: int) -> MoneyAmount:
    if families < 0:
        raise InputError(f"The number of displaced families cannot be negative, got {families}.")
    return per_family_loss * families


def value_of_life(params: LifeLossParams, base_year: int = 2019) -> MoneyAmount:
    """Forgone income of one death, ``max(T - X, 0) * W``."""
    years_lost = max(params.life_expectancy - params.age_at_death, 0.0)
    return MoneyAmount(years_lost * params.annual_income, BDT, base_year)


def value_of_life_from_death(
    death_year: int,
    age_at_death: float,
    annual_income: float,
    table: LifeExpectancyTable,
    base_year: int = 2019,
) -> MoneyAmount:
    """Per-life value of a death record, looking the life expectancy up by year of death."""
    params = LifeLossParams(age_at_death, table[death_year], annual_income)
    return value_of_life(params, base_year)


def lives_lost_total(per_life: MoneyAmount, deaths: int) -> MoneyAmount:
    if deaths < 0:
        raise InputError(f"The number of deaths cannot be negative, got {deaths}.")
    return per_life * deaths


def environmental_cost_cvm(
    records: Sequence[HouseholdLossRecord],
    scale_to_population: Optional[int] = None,
) -> MoneyAmount:
    """Total household losses, optionally scaled from the sample mean to a population.

    Raises
    ------
    EmptyFrame
        Scaling was requested for an empty list of records.
    IncompatibleAmounts
        The records are priced in different survey years.
    """
    if not records:
        if scale_to_population is not None:
            raise EmptyFrame("Cannot scale household losses to a population without any record.")
        return MoneyAmount.zero(BDT, 2019)

    values = [household_loss_value(record) for record in records]
    base_years = {value.base_year for value in values}
    if len(base_years) > 1:
        raise IncompatibleAmounts(f"Household records are priced in different years: {sorted(base_years)}.")

    total = compensated_sum(value.value for value in values)
    base_year = values[0].base_year
    if scale_to_population is None:
        return MoneyAmount(total, BDT, base_year)
    if scale_to_population < 0:
        raise InputError(f"The population to scale to cannot be negative, got {scale_to_population}.")
    return MoneyAmount(total / len(values) * scale_to_population, BDT, base_year)


def security_cost() -> Unavailable:
    return Unavailable(
        key="security",
        label="Security",
        side=Side.COST,
        reason="No data on security spending in the dam area could be obtained; the cost is not valued.",
    )
