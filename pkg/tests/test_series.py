from __future__ import annotations

import pytest

from core.series import backcast_cpi, deflate, extend_series_by_cpi, impute_series_by_cpi, rebase
from models.cpi import CpiIndexTable, GeometricTrend
from models.money import MoneyAmount
from models.series import AnnualSeries, ImputationLedger, Provenance, series_sum
from utils.constants import BDT, USD
from utils.exceptions import (
    EmptyRange,
    IncompatibleAmounts,
    InputError,
    InsufficientData,
    InvalidIndex,
    MissingDataYear,
    MissingIndexYear,
)


def test_rebase_land_loss_to_2019() -> None:
    result = rebase(MoneyAmount(17_678, BDT, 1957), 2019, 40.0873)
    assert result.base_year == 2019
    assert result.value == pytest.approx(708_663, abs=1)


def test_deflate_uses_the_index_ratio() -> None:
    cpi = CpiIndexTable.from_mapping({2018: 95.0, 2019: 100.0}, base_year=2019)
    result = deflate(MoneyAmount(1_000.0, BDT, 2018), 2019, cpi)
    assert result == MoneyAmount(1_000.0 * 100.0 / 95.0, BDT, 2019)


def test_deflate_to_same_year_is_identity(bundled_cpi: CpiIndexTable) -> None:
    amount = MoneyAmount(123.45, BDT, 2015)
    assert deflate(amount, 2015, bundled_cpi) is amount


def test_deflate_round_trip(bundled_cpi: CpiIndexTable) -> None:
    amount = MoneyAmount(17_678.0, BDT, 1990)
    back = deflate(deflate(amount, 2019, bundled_cpi), 1990, bundled_cpi)
    assert back.value == pytest.approx(amount.value, rel=1e-9)


def test_deflate_is_transitive(bundled_cpi: CpiIndexTable) -> None:
    amount = MoneyAmount(5_000.0, BDT, 1995)
    direct = deflate(amount, 2020, bundled_cpi)
    via = deflate(deflate(amount, 2005, bundled_cpi), 2020, bundled_cpi)
    assert via.value == pytest.approx(direct.value, rel=1e-9)


def test_deflate_missing_year(bundled_cpi: CpiIndexTable) -> None:
    with pytest.raises(MissingIndexYear):
        deflate(MoneyAmount(1.0, BDT, 1957), 2019, bundled_cpi)


def test_rebase_rejects_non_positive_ratio() -> None:
    with pytest.raises(InvalidIndex):
        rebase(MoneyAmount(1.0), 2019, 0.0)


def test_cpi_base_year_must_be_100() -> None:
    with pytest.raises(InvalidIndex):
        CpiIndexTable.from_mapping({2009: 90.0, 2010: 99.0})
    with pytest.raises(InvalidIndex):
        CpiIndexTable.from_mapping({2009: -1.0, 2010: 100.0})


def test_backcast_geometric_trend() -> None:
    cpi = CpiIndexTable.from_mapping({1986: 10.0, 1987: 11.0})
    extended = backcast_cpi(cpi, 1985, GeometricTrend(window=1))
    assert extended[1985] == pytest.approx(10.0 / 1.1)
    assert extended.series.provenance_of(1985) is Provenance.IMPUTED
    assert extended[1986] == 10.0
    assert extended[1987] == 11.0
    assert extended.series.provenance_of(1986) is Provenance.ACTUAL


def test_backcast_noop_when_already_covered(bundled_cpi: CpiIndexTable) -> None:
    assert backcast_cpi(bundled_cpi, bundled_cpi.first_year) is bundled_cpi


def test_backcast_preserves_actual_points(bundled_cpi: CpiIndexTable) -> None:
    extended = backcast_cpi(bundled_cpi, 1962)
    for year, value in bundled_cpi.series.items():
        assert extended[year] == value
        assert extended.series.is_actual(year)
    assert extended.first_year == 1962


def test_backcast_imputed_share_over_valuation_span(bundled_cpi: CpiIndexTable) -> None:
    extended = backcast_cpi(bundled_cpi, 1962)
    assert extended.series.imputed_count == 24
    assert extended.imputed_fraction == pytest.approx(24 / 59)
    assert round(extended.imputed_fraction, 1) == 0.4


def test_backcast_window_too_large() -> None:
    cpi = CpiIndexTable.from_mapping({1986: 10.0, 1987: 11.0})
    with pytest.raises(InsufficientData):
        backcast_cpi(cpi, 1980, GeometricTrend(window=2))


def test_geometric_trend_window_must_be_positive() -> None:
    with pytest.raises(InputError):
        GeometricTrend(window=0)


def test_impute_series_by_cpi_scales_from_anchor() -> None:
    cpi = CpiIndexTable.from_mapping({2019: 95.0, 2020: 100.0}, base_year=2020)
    series = impute_series_by_cpi((2020, 5_644.94e6), range(2019, 2021), cpi)
    assert series[2019] == pytest.approx(5_362.69e6, abs=0.01e6)
    assert series[2020] == 5_644.94e6
    assert series.provenance_of(2020) is Provenance.ACTUAL
    assert series.provenance_of(2019) is Provenance.IMPUTED


def test_impute_series_flat_cpi_is_constant(flat_cpi: CpiIndexTable) -> None:
    series = impute_series_by_cpi(MoneyAmount(100.0, BDT, 2020), range(2000, 2021), flat_cpi)
    assert set(series.points.values()) == {100.0}
    assert series.imputed_count == 20


def test_impute_series_empty_range(flat_cpi: CpiIndexTable) -> None:
    with pytest.raises(EmptyRange):
        impute_series_by_cpi((2020, 1.0), range(2020, 2020), flat_cpi)


def test_extend_series_fills_both_ends(bundled_cpi: CpiIndexTable) -> None:
    series = AnnualSeries("catch", {2006: 100.0, 2007: 200.0})
    extended = extend_series_by_cpi(series, range(2005, 2010), bundled_cpi)
    assert extended[2005] == pytest.approx(100.0 * bundled_cpi[2005] / bundled_cpi[2006])
    assert extended[2009] == pytest.approx(200.0 * bundled_cpi[2009] / bundled_cpi[2007])
    assert extended.imputed_years == [2005, 2008, 2009]


def test_extend_empty_series_names_the_series(bundled_cpi: CpiIndexTable) -> None:
    with pytest.raises(MissingDataYear) as info:
        extend_series_by_cpi(AnnualSeries("fish_catch", {}), range(2000, 2002), bundled_cpi)
    assert info.value.label == "fish_catch"


def test_series_sum() -> None:
    assert series_sum(AnnualSeries("empty", {})).total == 0.0
    total = series_sum(AnnualSeries("pair", {2001: 2.0, 2002: 3.0}))
    assert total.total == 5.0
    assert total.points == 2
    assert total.imputed_points == 0


def test_series_sum_of_production_column(data_dir) -> None:
    from core.io import read_fisheries_csv

    catch, _ = read_fisheries_csv(data_dir / "fisheries.csv")
    assert series_sum(catch).total == pytest.approx(97_916.53, abs=1e-6)


def test_series_sum_is_insertion_order_invariant() -> None:
    values = {2000 + i: 0.1 * (i + 1) ** 3 for i in range(30)}
    forward = AnnualSeries("a", values)
    backward = AnnualSeries("a", dict(reversed(list(values.items()))))
    assert series_sum(forward).total == series_sum(backward).total


def test_series_must_be_contiguous() -> None:
    with pytest.raises(InputError):
        AnnualSeries("gappy", {2000: 1.0, 2002: 1.0})


def test_money_amount_refuses_mixed_years_and_currencies() -> None:
    with pytest.raises(IncompatibleAmounts):
        MoneyAmount(1.0, BDT, 2019) + MoneyAmount(1.0, BDT, 2020)
    with pytest.raises(IncompatibleAmounts):
        MoneyAmount(1.0, BDT, 2020) - MoneyAmount(1.0, USD, 2020)


def test_ledger_records_each_point_once(bundled_cpi: CpiIndexTable) -> None:
    extended = backcast_cpi(bundled_cpi, 1980)
    ledger = ImputationLedger()
    ledger.record(extended.series, "geometric_trend(5)")
    ledger.record(extended.series, "geometric_trend(5)")
    assert len(ledger) == 6
    assert ledger.counts() == {"cpi": 6}
    assert [point.year for point in ledger] == list(range(1980, 1986))


def test_empty_series_has_no_span() -> None:
    empty = AnnualSeries("fish_catch", {})
    with pytest.raises(InsufficientData):
        _ = empty.first_year
    with pytest.raises(InsufficientData):
        _ = empty.last_year
    with pytest.raises(InsufficientData):
        CpiIndexTable(AnnualSeries("cpi", {}))
