from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from models.components import ComponentLike, Unavailable
from models.cpi import CpiIndexTable
from models.params import HouseholdLossRecord, LifeExpectancyTable, LineItem
from models.regression import REGRESSORS, RegressionFit
from models.report import REFERENCE_COLUMNS, REPORT_COLUMNS, UNAVAILABLE, NetBenefitReport
from models.series import AnnualSeries, ImputationLedger, Provenance
from utils.constants import CPI_BASE_YEAR
from utils.exceptions import CbaError, DataFileError, InputError
from utils.functions import fiscal_year_start

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "SURVEY_COLUMNS",
    "read_csv",
    "write_csv",
    "read_series_csv",
    "write_series_csv",
    "read_cpi_csv",
    "read_fisheries_csv",
    "read_survey_csv",
    "read_zones_csv",
    "read_household_csv",
    "read_life_expectancy_csv",
    "read_fit_json",
    "write_report",
    "write_components",
    "write_imputations",
)

PathLike = Union[str, Path]

SURVEY_COLUMNS: Tuple[str, ...] = ("respondent_id", "zone") + REGRESSORS + ("visits",)
IMPUTATION_COLUMNS: Tuple[str, ...] = ("series", "year", "value", "method")

# header line + 1-based numbering
_FIRST_DATA_LINE = 2


def read_csv(path: PathLike, required: Sequence[str], *, dtype: Optional[Mapping[str, object]] = None) -> pd.DataFrame:
    """Reads a CSV file and checks that ``required`` columns are present.

    A file without any content yields an empty frame with the required columns.
    """
    path = Path(path)
    if not path.is_file():
        raise DataFileError("File does not exist.", source=str(path))
    try:
        frame = pd.read_csv(path, dtype=dtype, skipinitialspace=True, keep_default_na=True)
    except pd.errors.EmptyDataError:
        return pd.DataFrame({column: pd.Series(dtype=object) for column in required})
    except (pd.errors.ParserError, UnicodeDecodeError, ValueError) as error:
        raise DataFileError(f"Could not parse CSV: {error}", source=str(path)) from None

    frame.columns = [str(column).strip() for column in frame.columns]
    missing = [column for column in required if column not in frame.columns]
    if missing:
        raise DataFileError(f"Missing column(s) {', '.join(missing)}.", source=str(path), line=1)
    return frame


def write_csv(rows: Union[pd.DataFrame, Iterable[Mapping[str, object]]], path: PathLike, columns: Sequence[str]) -> Path:
    """Writes rows with a fixed column order and ``\\n`` line endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(path, columns=list(columns), index=False, lineterminator="\n")
    return path


def _number(value: object, column: str, path: Path, line: int) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise DataFileError(f"{column} {value!r} is not a number.", source=str(path), line=line) from None
    if not math.isfinite(number):
        raise DataFileError(f"{column} is missing or not finite.", source=str(path), line=line)
    return number


def _is_blank(value: object) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value)) or str(value).strip() == ""


def read_series_csv(path: PathLike, label: Optional[str] = None) -> AnnualSeries:
    """Reads ``year,value[,provenance]``. Years may be fiscal-year labels such as ``2006-07``."""
    path = Path(path)
    frame = read_csv(path, ("year", "value"), dtype={"year": str})
    points: Dict[int, float] = {}
    provenance: Dict[int, Provenance] = {}
    for line, row in enumerate(frame.to_dict("records"), start=_FIRST_DATA_LINE):
        try:
            year = fiscal_year_start(row["year"])
            if year in points:
                raise DataFileError(f"Year {year} appears twice.")
            points[year] = _number(row["value"], "value", path, line)
            provenance[year] = Provenance.parse(row.get("provenance"))
        except CbaError as error:
            raise error.with_context(str(path), line)
    try:
        return AnnualSeries(label or path.stem, points, provenance)
    except CbaError as error:
        raise error.with_context(str(path))


def write_series_csv(series: AnnualSeries, path: PathLike) -> Path:
    rows = [{"year": year, "value": value, "provenance": str(series.provenance_of(year))} for year, value in series.items()]
    return write_csv(rows, path, ("year", "value", "provenance"))


def read_cpi_csv(path: PathLike, base_year: int = CPI_BASE_YEAR) -> CpiIndexTable:
    series = read_series_csv(path, label="cpi")
    try:
        return CpiIndexTable(series, base_year)
    except CbaError as error:
        raise error.with_context(str(path))


def read_fisheries_csv(path: PathLike) -> Tuple[AnnualSeries, AnnualSeries]:
    """Reads ``fiscal_year,production_tons,revenue_mbdt`` into catch (tons) and revenue (million BDT) series.

    Rows with a blank revenue contribute to the catch series only.
    """
    path = Path(path)
    frame = read_csv(path, ("fiscal_year", "production_tons", "revenue_mbdt"), dtype={"fiscal_year": str})
    catch: Dict[int, float] = {}
    revenue: Dict[int, float] = {}
    for line, row in enumerate(frame.to_dict("records"), start=_FIRST_DATA_LINE):
        try:
            year = fiscal_year_start(row["fiscal_year"])
            if year in catch:
                raise DataFileError(f"Fiscal year starting {year} appears twice.")
            catch[year] = _number(row["production_tons"], "production_tons", path, line)
            if catch[year] < 0:
                raise DataFileError("production_tons cannot be negative.")
            if not _is_blank(row["revenue_mbdt"]):
                revenue[year] = _number(row["revenue_mbdt"], "revenue_mbdt", path, line)
        except CbaError as error:
            raise error.with_context(str(path), line)

    try:
        return AnnualSeries("fish_catch", catch), AnnualSeries("fish_revenue", revenue)
    except CbaError as error:
        raise error.with_context(str(path))


def read_survey_csv(path: PathLike) -> pd.DataFrame:
    """Reads the tourist survey, one respondent per row."""
    path = Path(path)
    frame = read_csv(path, SURVEY_COLUMNS, dtype={"respondent_id": str, "zone": str})
    for column in REGRESSORS + ("visits",):
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = ~np.isfinite(values.to_numpy(dtype=float))
        if bad.any():
            line = int(np.flatnonzero(bad)[0]) + _FIRST_DATA_LINE
            raise DataFileError(f"{column} is not a number.", source=str(path), line=line)
        frame[column] = values.astype(float)
    frame["zone"] = frame["zone"].str.strip()
    return frame


def read_zones_csv(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    frame = read_csv(path, ("zone", "population"), dtype={"zone": str})
    for line, row in enumerate(frame.to_dict("records"), start=_FIRST_DATA_LINE):
        population = _number(row["population"], "population", path, line)
        if population < 0 or not population.is_integer():
            raise DataFileError("population must be a non-negative whole number.", source=str(path), line=line)
    frame["zone"] = frame["zone"].str.strip()
    if frame["zone"].duplicated().any():
        raise DataFileError("A zone is listed twice.", source=str(path))
    frame["population"] = frame["population"].astype("int64")
    return frame


def read_household_csv(path: PathLike, base_year: int = 2019) -> List[HouseholdLossRecord]:
    """Reads ``respondent_id,item,quantity,unit,unit_price[,reported_total]`` into one record per respondent.

    Records keep the order in which respondents first appear. Land lost is the total
    quantity of the ``decimal`` lines.
    """
    path = Path(path)
    frame = read_csv(path, ("respondent_id", "item", "quantity", "unit", "unit_price"), dtype={"respondent_id": str, "unit": str})
    items: Dict[str, List[LineItem]] = {}
    for line, row in enumerate(frame.to_dict("records"), start=_FIRST_DATA_LINE):
        try:
            reported = row.get("reported_total")
            item = LineItem(
                name=str(row["item"]).strip(),
                quantity=_number(row["quantity"], "quantity", path, line),
                unit=str(row["unit"]).strip().lower(),
                unit_price=_number(row["unit_price"], "unit_price", path, line),
                reported_total=None if _is_blank(reported) else _number(reported, "reported_total", path, line),
            )
        except CbaError as error:
            raise error.with_context(str(path), line)
        items.setdefault(str(row["respondent_id"]).strip(), []).append(item)

    return [
        HouseholdLossRecord(
            respondent_id=respondent,
            items=tuple(lines),
            land_lost_decimal=sum(item.quantity for item in lines if item.unit == "decimal"),
            displaced=True,
            base_year=base_year,
        )
        for respondent, lines in items.items()
    ]


def read_life_expectancy_csv(path: PathLike) -> LifeExpectancyTable:
    path = Path(path)
    frame = read_csv(path, ("year", "expectancy_years"), dtype={"year": str})
    values: Dict[int, float] = {}
    for line, row in enumerate(frame.to_dict("records"), start=_FIRST_DATA_LINE):
        try:
            values[fiscal_year_start(row["year"])] = _number(row["expectancy_years"], "expectancy_years", path, line)
        except CbaError as error:
            raise error.with_context(str(path), line)
    return LifeExpectancyTable(values)


def read_fit_json(path: PathLike) -> RegressionFit:
    path = Path(path)
    try:
        payload = path.read_bytes()
    except FileNotFoundError:
        raise DataFileError("File does not exist.", source=str(path)) from None
    try:
        return RegressionFit.from_json(payload)
    except CbaError as error:
        raise error.with_context(str(path))
    except (TypeError, ValueError) as error:
        raise InputError(f"Malformed regression fit: {error}", source=str(path)) from None


def write_report(report: NetBenefitReport, directory: PathLike) -> List[Path]:
    """Writes ``report.json``, ``report.csv`` and ``references.csv`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    json_path = directory / "report.json"
    json_path.write_bytes(report.to_json())
    return [
        json_path,
        write_csv(report.csv_rows(), directory / "report.csv", REPORT_COLUMNS),
        write_csv(report.reference_rows(), directory / "references.csv", REFERENCE_COLUMNS),
    ]


def write_components(components: Iterable[ComponentLike], path: PathLike) -> Path:
    """Writes a component table without totals, for the single-valuation commands."""
    rows: List[Dict[str, object]] = []
    for component in components:
        if isinstance(component, Unavailable):
            rows.append(dict(zip(REPORT_COLUMNS, (component.key, component.label, UNAVAILABLE, "", ""))))
        else:
            values = (component.key, component.label, component.npv.in_millions, component.base_year, component.imputed_fraction)
            rows.append(dict(zip(REPORT_COLUMNS, values)))
    return write_csv(rows, path, REPORT_COLUMNS)


def write_imputations(ledger: ImputationLedger, path: PathLike) -> Path:
    rows = [{"series": p.series, "year": p.year, "value": p.value, "method": p.method} for p in ledger]
    return write_csv(rows, path, IMPUTATION_COLUMNS)
