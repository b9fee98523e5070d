from __future__ import annotations

import logging

import pytest

from core.costs import (
    construction_pv,
    displacement_cost,
    environmental_cost_cvm,
    household_loss_value,
    lives_lost_total,
    security_cost,
    value_of_life,
    value_of_life_from_death,
)
from core.io import read_household_csv, read_life_expectancy_csv
from core.series import rebase
from models.components import Unavailable
from models.money import MoneyAmount
from models.params import ConstructionCostSheet, HouseholdLossRecord, LifeExpectancyTable, LifeLossParams, LineItem
from utils.constants import BDT, KG_PER_MOUND
from utils.exceptions import EmptyFrame, IncompatibleAmounts, InputError, UnknownUnit

HOUSEHOLD_LINES = {
    "Rice": 342_300,
    "Fruits": 473_820,
    "Fishes": 228_900,
    "Wood": 86_802_840,
    "Acquired Land": 18_360_648,
}


@pytest.fixture
def average_household(data_dir) -> HouseholdLossRecord:
    (record,) = read_household_csv(data_dir / "household_losses.csv")
    return record


def test_construction_nominal_total() -> None:
    sheet = ConstructionCostSheet()
    assert sheet.nominal_total().value == 2_440.3e6
    assert construction_pv(sheet, 1957, ratio=1.0).value == 2_440.3e6


def test_construction_present_value() -> None:
    pv = construction_pv(ConstructionCostSheet(), 2019, ratio=165.9150924067)
    assert pv.in_millions == pytest.approx(404_882.6, abs=0.1)
    assert pv.base_year == 2019


def test_construction_stated_total_governs(caplog: pytest.LogCaptureFixture) -> None:
    sheet = ConstructionCostSheet()
    with caplog.at_level(logging.WARNING):
        total = sheet.nominal_total()
    assert sheet.itemised_total.value == pytest.approx(2_440.8e6)
    assert total.value == 2_440.3e6
    assert "stated total" in caplog.text


def test_construction_without_stated_total_uses_items() -> None:
    sheet = ConstructionCostSheet(stated_total=None)
    assert sheet.nominal_total().value == pytest.approx(2_440.8e6)


def test_construction_sheet_checks_compensation() -> None:
    with pytest.raises(InputError):
        ConstructionCostSheet(compensation=MoneyAmount(40e6, BDT, 1957))


def test_construction_needs_a_deflator() -> None:
    with pytest.raises(InputError):
        construction_pv(ConstructionCostSheet(), 2019)


def test_household_lines_match_table(average_household: HouseholdLossRecord) -> None:
    by_name = {item.name: item for item in average_household.items}
    for name, total in HOUSEHOLD_LINES.items():
        assert by_name[name].value == total
    assert by_name["Crops"].value == 1_046_375
    assert average_household.land_lost_decimal == 1018


def test_crops_line_warns_about_reported_total(
    average_household: HouseholdLossRecord, caplog: pytest.LogCaptureFixture
) -> None:
    with caplog.at_level(logging.WARNING):
        value = household_loss_value(average_household)
    warnings = [record.getMessage() for record in caplog.records if record.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert "Crops" in warnings[0]
    assert "1046375" in warnings[0]
    assert "10046375" in warnings[0]
    assert value.value == pytest.approx(sum(item.value for item in average_household.items))
    assert value.value == 107_256_683


def test_household_loss_is_additive() -> None:
    first = HouseholdLossRecord("a", (LineItem("Rice", 1, "mound", 1050),))
    second = HouseholdLossRecord("b", (LineItem("Fish", 2, "kg", 350),))
    both = HouseholdLossRecord("ab", first.items + second.items)
    assert household_loss_value(both).value == household_loss_value(first).value + household_loss_value(second).value


def test_unknown_unit() -> None:
    with pytest.raises(UnknownUnit):
        LineItem("Rice", 1, "sack", 10)


def test_mound_in_kilograms() -> None:
    assert LineItem("Rice", 2, "mound", 1).quantity_kg == pytest.approx(2 * KG_PER_MOUND)
    assert LineItem("Plant", 2, "count", 1).quantity_kg is None


def test_displacement_cost() -> None:
    per_family = rebase(MoneyAmount(17_678, BDT, 1957), 2019, 40.0873)
    total = displacement_cost(per_family, 18_000)
    assert total.in_millions == pytest.approx(12_755.93, abs=0.01)
    assert total.in_millions == pytest.approx(12_756, abs=0.5)
    assert displacement_cost(per_family, 0).value == 0.0
    assert displacement_cost(per_family, 1) == per_family


def test_displacement_rejects_negative_families() -> None:
    with pytest.raises(InputError):
        displacement_cost(MoneyAmount(1.0, BDT, 2019), -1)


def test_value_of_life() -> None:
    assert value_of_life(LifeLossParams(56, 56, 10_000)).value == 0.0
    assert value_of_life(LifeLossParams(60, 56, 10_000)).value == 0.0
    assert value_of_life(LifeLossParams(35, 56, 10_000)).value == 210_000


def test_value_of_life_is_monotone_in_age_and_linear_in_income() -> None:
    younger = value_of_life(LifeLossParams(20, 56, 10_000)).value
    older = value_of_life(LifeLossParams(40, 56, 10_000)).value
    assert younger >= older
    assert value_of_life(LifeLossParams(20, 56, 20_000)).value == 2 * younger


def test_value_of_life_from_death_looks_up_expectancy(data_dir) -> None:
    table = read_life_expectancy_csv(data_dir / "life_expectancy.csv")
    assert value_of_life_from_death(1987, 35, 10_000, table).value == 210_000
    assert value_of_life_from_death(1994, 35, 10_000, table).value == 260_000
    with pytest.raises(InputError):
        value_of_life_from_death(1950, 35, 10_000, LifeExpectancyTable())


def test_lives_lost_total() -> None:
    per_life = MoneyAmount(366_654, BDT, 2019)
    assert lives_lost_total(per_life, 1_180).value == 432_651_720
    assert lives_lost_total(per_life, 1_180).in_millions == pytest.approx(432.65, abs=0.01)
    assert lives_lost_total(per_life, 0).value == 0.0
    assert lives_lost_total(per_life, 1) == per_life


def test_environmental_cost_scaling(average_household: HouseholdLossRecord) -> None:
    own = household_loss_value(average_household)
    assert environmental_cost_cvm([average_household]) == own
    assert environmental_cost_cvm([average_household, average_household]).value == 2 * own.value
    scaled = environmental_cost_cvm([average_household], 18_000)
    assert scaled.value == pytest.approx(107_256_683 * 18_000)


def test_environmental_cost_edge_cases() -> None:
    assert environmental_cost_cvm([]).value == 0.0
    with pytest.raises(EmptyFrame):
        environmental_cost_cvm([], 18_000)

    older = HouseholdLossRecord("a", (LineItem("Rice", 1, "kg", 1),), base_year=2018)
    newer = HouseholdLossRecord("b", (LineItem("Rice", 1, "kg", 1),), base_year=2019)
    with pytest.raises(IncompatibleAmounts):
        environmental_cost_cvm([older, newer])


def test_security_is_disclosed_as_unavailable() -> None:
    security = security_cost()
    assert isinstance(security, Unavailable)
    assert security.key == "security"
    assert security.reason
