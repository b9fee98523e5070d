from __future__ import annotations

from pathlib import Path

import pandas as pd
import pytest

from core.io import (
    read_cpi_csv,
    read_fisheries_csv,
    read_series_csv,
    read_survey_csv,
    read_zones_csv,
    write_csv,
    write_series_csv,
)
from models.series import Provenance
from utils.exceptions import DataFileError, InputError, InsufficientData


def test_read_cpi_fixture(data_dir: Path) -> None:
    cpi = read_cpi_csv(data_dir / "cpi.csv")
    assert cpi.first_year == 1986
    assert cpi.last_year == 2020
    assert cpi[2010] == 100.0
    assert cpi.imputed_fraction == 0.0


def test_fiscal_years_map_to_their_start(data_dir: Path) -> None:
    catch, revenue = read_fisheries_csv(data_dir / "fisheries.csv")
    assert catch.years == list(range(2006, 2018))
    assert catch[2006] == 5_389
    assert revenue[2017] == 1_242.5


def test_series_round_trip(tmp_path: Path, data_dir: Path) -> None:
    original = read_series_csv(data_dir / "cpi.csv", label="cpi")
    path = write_series_csv(original, tmp_path / "cpi.csv")
    assert read_series_csv(path, label="cpi") == original


def test_series_provenance_column(tmp_path: Path) -> None:
    path = tmp_path / "series.csv"
    path.write_text("year,value,provenance\n2000,1.5,actual\n2001,2.5,imputed\n2002,3.5,\n", encoding="utf-8")
    series = read_series_csv(path)
    assert series.label == "series"
    assert series.provenance_of(2001) is Provenance.IMPUTED
    assert series.provenance_of(2002) is Provenance.ACTUAL


def test_bad_value_reports_file_and_line(tmp_path: Path) -> None:
    path = tmp_path / "cpi.csv"
    path.write_text("year,value\n2009,95\n2010,abc\n", encoding="utf-8")
    with pytest.raises(DataFileError) as info:
        read_cpi_csv(path)
    assert info.value.line == 3
    assert str(info.value).startswith(f"{path}:3:")


def test_missing_column(tmp_path: Path) -> None:
    path = tmp_path / "zones.csv"
    path.write_text("zone,people\nDhaka,1\n", encoding="utf-8")
    with pytest.raises(DataFileError) as info:
        read_zones_csv(path)
    assert "population" in str(info.value)


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(DataFileError):
        read_cpi_csv(tmp_path / "absent.csv")


def test_duplicate_year(tmp_path: Path) -> None:
    path = tmp_path / "fisheries.csv"
    path.write_text("fiscal_year,production_tons,revenue_mbdt\n2006-07,1,1\n2006,2,2\n", encoding="utf-8")
    with pytest.raises(DataFileError):
        read_fisheries_csv(path)


def test_empty_fisheries_file_reads_as_empty(tmp_path: Path) -> None:
    path = tmp_path / "fisheries.csv"
    path.write_text("", encoding="utf-8")
    catch, revenue = read_fisheries_csv(path)
    assert len(catch) == 0
    assert len(revenue) == 0


def test_survey_rejects_non_numeric(tmp_path: Path) -> None:
    path = tmp_path / "survey.csv"
    path.write_text(
        "respondent_id,zone,travel_cost,monthly_income,alone,dhaka,visits\nR1,Dhaka,100,x,0,1,1\n", encoding="utf-8"
    )
    with pytest.raises(DataFileError) as info:
        read_survey_csv(path)
    assert info.value.line == 2


def test_zone_population_must_be_whole(tmp_path: Path) -> None:
    path = tmp_path / "zones.csv"
    path.write_text("zone,population\nDhaka,1.5\n", encoding="utf-8")
    with pytest.raises(InputError):
        read_zones_csv(path)


def test_write_csv_is_stable(tmp_path: Path) -> None:
    rows = [{"b": 2, "a": 1}, {"a": 3, "b": 4}]
    first = write_csv(rows, tmp_path / "one.csv", ("a", "b")).read_bytes()
    second = write_csv(pd.DataFrame(rows), tmp_path / "two.csv", ("a", "b")).read_bytes()
    assert first == second == b"a,b\n1,2\n3,4\n"


def test_fisheries_series_round_trip(tmp_path: Path, data_dir: Path) -> None:
    catch, revenue = read_fisheries_csv(data_dir / "fisheries.csv")
    for series in (catch, revenue):
        path = write_series_csv(series, tmp_path / f"{series.label}.csv")
        assert read_series_csv(path, label=series.label) == series


def test_zone_names_are_compared_after_stripping(tmp_path: Path) -> None:
    path = tmp_path / "zones.csv"
    path.write_text("zone,population\nDhaka ,10\nDhaka,20\n", encoding="utf-8")
    with pytest.raises(DataFileError):
        read_zones_csv(path)


def test_header_only_cpi_is_rejected_with_file_context(tmp_path: Path) -> None:
    path = tmp_path / "cpi.csv"
    path.write_text("year,value\n", encoding="utf-8")
    with pytest.raises(InsufficientData) as info:
        read_cpi_csv(path)
    assert str(path) in str(info.value)
