from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from core.aggregator import Grid, SweepResult, aggregate, expand_grid, harmonize, reference_check, sensitivity_sweep
from core.benefits import electricity_npv, fisheries_npv, tourism_npv
from core.config import RunConfig
from core.costs import (
    construction_pv,
    displacement_cost,
    environmental_cost_cvm,
    lives_lost_total,
    security_cost,
    value_of_life_from_death,
)
from core.econometrics import DemandCurve, demand_curve, observations_from_survey, ols_fit, zones_from_survey
from core.io import (
    read_cpi_csv,
    read_fisheries_csv,
    read_fit_json,
    read_household_csv,
    read_life_expectancy_csv,
    read_survey_csv,
    read_zones_csv,
    write_csv,
    write_imputations,
    write_report,
)
from core.series import backcast_cpi, deflate, extend_series_by_cpi, rebase
from models.components import ComponentLike, ReferenceCheck, Side, ValuationComponent
from models.cpi import CpiIndexTable, GeometricTrend
from models.money import MoneyAmount
from models.params import (
    AccumulationMode,
    ConstructionCostSheet,
    CpiScale,
    Discount,
    ElectricityParams,
    FisheriesParams,
    HouseholdLossRecord,
    LifeExpectancyTable,
    PriceAnchor,
)
from models.regression import RegressionFit
from models.report import NetBenefitReport
from models.series import AnnualSeries, ImputationLedger
from utils.constants import BDT, MILLION, RS
from utils.exceptions import CbaError, ConfigError

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "PipelineInputs",
    "TourismOutcome",
    "Evaluation",
    "PipelineResult",
    "load_inputs",
    "prepare_cpi",
    "value_electricity",
    "value_fisheries",
    "value_tourism",
    "value_costs",
    "evaluate",
    "run_pipeline",
    "sweep",
)


@dataclass(frozen=True)
class PipelineInputs:
    """Every data file a run reads, loaded once."""

    cpi: CpiIndexTable
    catch: AnnualSeries
    revenue: AnnualSeries
    survey: pd.DataFrame
    zone_table: pd.DataFrame
    households: Tuple[HouseholdLossRecord, ...]
    life_table: LifeExpectancyTable
    fixture_fit: RegressionFit
    sources: Mapping[str, Path] = field(default_factory=dict)


@dataclass(frozen=True)
class TourismOutcome:
    component: ValuationComponent
    fit: RegressionFit
    curve: DemandCurve
    estimated_annual: MoneyAmount
    annual_used: MoneyAmount


@dataclass(frozen=True)
class Evaluation:
    report: NetBenefitReport
    ledger: ImputationLedger
    curve: DemandCurve
    fit: RegressionFit
    cpi: CpiIndexTable


@dataclass(frozen=True)
class PipelineResult:
    report: NetBenefitReport
    artifacts: Tuple[Path, ...]


def load_inputs(config: RunConfig) -> PipelineInputs:
    sources = {key: config.path(f"paths.{key}") for key in ("cpi", "fisheries", "survey", "zones", "households", "life_expectancy", "regression_fit")}
    catch, revenue = read_fisheries_csv(sources["fisheries"])
    return PipelineInputs(
        cpi=read_cpi_csv(sources["cpi"], config.year("series.cpi_base_year")),
        catch=catch,
        revenue=revenue,
        survey=read_survey_csv(sources["survey"]),
        zone_table=read_zones_csv(sources["zones"]),
        households=tuple(read_household_csv(sources["households"], config.year("costs.target_year"))),
        life_table=read_life_expectancy_csv(sources["life_expectancy"]),
        fixture_fit=read_fit_json(sources["regression_fit"]),
        sources=sources,
    )


def prepare_cpi(config: RunConfig, cpi: CpiIndexTable) -> CpiIndexTable:
    """Backcasts the CPI to the earliest year any configured valuation reads."""
    earliest = min(
        config.year("series.earliest_year"),
        config.year_range("electricity.years")[0],
        config.year_range("tourism.years")[0],
        config.year("fisheries.first_year"),
    )
    if config.raw("costs.deflator") == "cpi":
        earliest = min(earliest, config.year("costs.cost_year"))
    return backcast_cpi(cpi, earliest, GeometricTrend(config.integer("series.backcast_window")))


def electricity_params(config: RunConfig, mode: Optional[str] = None) -> ElectricityParams:
    first, last = config.year_range("electricity.years")
    mode = mode or config.raw("electricity.mode")
    kwargs: Dict[str, Any] = {
        "avg_capacity_mw": config.number("electricity.capacity_mw"),
        "hours_per_day": config.number("electricity.hours_per_day"),
        "days_per_year": config.number("electricity.days_per_year"),
        "unit_price": config.number("electricity.unit_price"),
        "first_year": first,
        "last_year": last,
        "mode": CpiScale() if mode == "cpi_scale" else Discount(config.rate("electricity.discount_rate")),
    }
    unit_cost = config.optional_number("electricity.unit_cost")
    if unit_cost is None:
        return ElectricityParams.from_usd_cost(
            config.number("electricity.cost_usd"), config.number("electricity.exchange_rate"), **kwargs
        )
    return ElectricityParams(unit_cost=unit_cost, **kwargs)


def value_electricity(config: RunConfig, cpi: CpiIndexTable) -> Tuple[ValuationComponent, Dict[str, float]]:
    """The configured electricity component, plus the totals under both carrying modes in million BDT."""
    component = electricity_npv(electricity_params(config), cpi)
    by_mode = {mode: electricity_npv(electricity_params(config, mode), cpi).npv.in_millions for mode in ("discount", "cpi_scale")}
    return component, by_mode


def value_fisheries(config: RunConfig, inputs: PipelineInputs, cpi: CpiIndexTable) -> ValuationComponent:
    first, base = config.year("fisheries.first_year"), config.year("fisheries.base_year")
    source = str(inputs.sources.get("fisheries", "fisheries"))
    try:
        catch = inputs.catch
        if config.raw("fisheries.catch_fill") == "cpi":
            catch = extend_series_by_cpi(catch, range(first, base + 1), cpi)
        params = FisheriesParams(
            catch_series=catch,
            revenue_series=inputs.revenue if len(inputs.revenue) else None,
            avg_price=config.number("fisheries.avg_price"),
            avg_price_year=config.year("fisheries.avg_price_year"),
            price_anchor=PriceAnchor(config.raw("fisheries.price_anchor")),
            unit_cost=config.number("fisheries.unit_cost"),
            unit_cost_year=config.year("fisheries.unit_cost_year"),
            discount_rate=config.rate("fisheries.discount_rate"),
            base_year=base,
            first_year=first,
            accumulation_mode=AccumulationMode(config.raw("fisheries.accumulation")),
        )
        return fisheries_npv(params, cpi)
    except CbaError as error:
        if getattr(error, "label", None) in ("fish_catch", "fish_revenue"):
            error.with_context(source)
        raise


def value_tourism(config: RunConfig, inputs: PipelineInputs, cpi: CpiIndexTable) -> TourismOutcome:
    """Estimates the demand curve and spreads the annual consumer surplus over the tourism years."""
    per = config.number("tourism.per")
    anchor_year = config.year("tourism.anchor_year")
    zones = zones_from_survey(inputs.survey, inputs.zone_table)
    if config.raw("tourism.fit_source") == "survey":
        fit = ols_fit(observations_from_survey(inputs.survey, zones, per))
    else:
        fit = inputs.fixture_fit

    curve = demand_curve(fit, zones, config.number("tourism.fee_step"), per=per)
    estimated = MoneyAmount(curve.area(), BDT, anchor_year)
    if config.raw("tourism.cs_source") == "estimated":
        annual = estimated
    else:
        annual = MoneyAmount(config.number("tourism.annual_cs"), BDT, anchor_year)
    log.info("Estimated annual consumer surplus %.2f M, using %s", estimated.in_millions, annual)

    component = tourism_npv(annual, config.year_range("tourism.years"), cpi)
    return TourismOutcome(component, fit, curve, estimated, annual)


def _cost_component(key: str, label: str, amount: MoneyAmount, first_year: int, method: str, **kwargs: Any) -> ValuationComponent:
    return ValuationComponent(
        key=key,
        label=label,
        npv=amount,
        side=Side.COST,
        first_year=first_year,
        last_year=amount.base_year,
        method=method,
        **kwargs,
    )


def value_costs(config: RunConfig, inputs: PipelineInputs, cpi: CpiIndexTable) -> List[ComponentLike]:
    """Displacement, lives lost, construction, environmental and security, in that order."""
    cost_year = config.year("costs.cost_year")
    target = config.year("costs.target_year")
    by_ratio = config.raw("costs.deflator") == "ratio"

    def move(amount: MoneyAmount, ratio_key: str) -> Tuple[MoneyAmount, str]:
        if by_ratio:
            ratio = config.number(ratio_key)
            return rebase(amount, target, ratio), f"ratio({ratio:g})"
        return deflate(amount, target, cpi), "cpi"

    per_family, land_method = move(MoneyAmount(config.number("costs.land_loss_per_family"), BDT, cost_year), "costs.land_deflator_ratio")
    displacement = displacement_cost(per_family, config.integer("costs.families"))

    per_life_value = config.optional_number("costs.per_life_value")
    if per_life_value is None:
        per_life = value_of_life_from_death(
            config.year("costs.death_year"),
            config.number("costs.age_at_death"),
            config.number("costs.annual_income"),
            inputs.life_table,
            target,
        )
        life_method = "forgone_income"
    else:
        per_life = MoneyAmount(per_life_value, BDT, target)
        life_method = "per_life_value"
    lives = lives_lost_total(per_life, config.integer("costs.deaths"))

    compensation_rate = config.number("costs.compensation_rate")
    acres = config.number("costs.acres")
    stated = config.optional_number("costs.stated_total")
    sheet = ConstructionCostSheet(
        establishment=MoneyAmount(config.number("costs.establishment"), RS, cost_year),
        compensation=MoneyAmount(compensation_rate * acres, BDT, cost_year),
        compensation_rate=compensation_rate,
        acres=acres,
        bdt_per_rs=config.number("costs.bdt_per_rs"),
        stated_total=None if stated is None else MoneyAmount(stated, BDT, cost_year),
    )
    if by_ratio:
        ratio = config.number("costs.construction_deflator_ratio")
        construction = construction_pv(sheet, target, ratio=ratio)
        construction_method = f"ratio({ratio:g})"
    else:
        construction = construction_pv(sheet, target, cpi)
        construction_method = "cpi"

    environmental = environmental_cost_cvm(inputs.households, config.integer("costs.household_scale"))

    return [
        _cost_component("displacement", "Land lost and displacement", displacement, cost_year, land_method),
        _cost_component("lives_lost", "Lives lost", lives, target, life_method),
        security_cost(),
        _cost_component("construction", "Construction", construction, cost_year, construction_method),
        _cost_component("environmental", "Environmental losses (CVM)", environmental, environmental.base_year, "household_mean_scaled"),
    ]


def _record(ledger: ImputationLedger, component: ComponentLike) -> None:
    if not isinstance(component, ValuationComponent):
        return
    if component.imputed_inputs:
        for series in component.imputed_inputs:
            ledger.record(series, "cpi")
    elif component.series is not None:
        ledger.record(component.series, component.method)


def _references(
    config: RunConfig,
    components: Sequence[ComponentLike],
    tourism: TourismOutcome,
    electricity_by_mode: Mapping[str, float],
) -> List[ReferenceCheck]:
    bands = {"pass_band": config.number("report.pass_band"), "warn_band": config.number("report.warn_band")}
    by_key = {component.key: component for component in components}
    wanted = (
        ("electricity", "electricity.reference"),
        ("fisheries", "fisheries.reference"),
        ("tourism", "tourism.reference"),
        ("displacement", "costs.displacement_reference"),
        ("lives_lost", "costs.lives_reference"),
        ("construction", "costs.construction_reference"),
    )
    checks: List[ReferenceCheck] = []
    for key, reference_key in wanted:
        reference = config.optional_number(reference_key)
        if reference is None or key not in by_key:
            continue
        check = reference_check(by_key[key], reference, **bands)
        if check is not None:
            checks.append(check)

    electricity_reference = config.optional_number("electricity.reference")
    if electricity_reference is not None:
        for mode, total_mbdt in electricity_by_mode.items():
            checks.append(ReferenceCheck.compare(f"electricity_{mode}", total_mbdt * MILLION, electricity_reference, **bands))

    annual_reference = config.optional_number("tourism.annual_cs")
    if annual_reference is not None:
        checks.append(
            ReferenceCheck.compare("tourism_annual_estimated", tourism.estimated_annual.value, annual_reference, **bands)
        )
    return checks


def evaluate(config: RunConfig, inputs: PipelineInputs) -> Evaluation:
    """Runs every valuation and the aggregation without touching the file system."""
    ledger = ImputationLedger()
    cpi = prepare_cpi(config, inputs.cpi)
    ledger.record(cpi.series, f"geometric_trend({config.integer('series.backcast_window')})")

    electricity, electricity_by_mode = value_electricity(config, cpi)
    fisheries = value_fisheries(config, inputs, cpi)
    tourism = value_tourism(config, inputs, cpi)
    components: List[ComponentLike] = [electricity, fisheries, tourism.component, *value_costs(config, inputs, cpi)]
    for component in components:
        _record(ledger, component)

    base_year = config.year("aggregate.base_year")
    harmonized, notes = harmonize(components, base_year, config.raw("aggregate.harmonize"), cpi)

    excluded = []
    if not config.flag("aggregate.include_construction"):
        excluded.append("construction")
    if not config.flag("aggregate.include_environmental"):
        excluded.append("environmental")

    reference_net = config.optional_number("aggregate.reference_net")
    published = None if reference_net is None else MoneyAmount(reference_net, BDT, base_year)
    report = aggregate(harmonized, excluded=excluded, published_net=published, notes=notes, config=config.snapshot())

    checks = _references(config, components, tourism, electricity_by_mode)
    if published is not None:
        bands = {"pass_band": config.number("report.pass_band"), "warn_band": config.number("report.warn_band")}
        checks.append(ReferenceCheck.compare("net_benefit", report.net_benefit.value, published.value, **bands))
    for check in checks:
        log.info("Reference %s: engine %.2f M vs %.2f M (%s)", check.label, check.engine / MILLION, check.reference / MILLION, check.status)

    report = replace(report, references=tuple(checks)).with_extras(
        electricity_by_mode_mbdt=electricity_by_mode,
        tourism={
            "annual_used_mbdt": tourism.annual_used.in_millions,
            "annual_estimated_mbdt": tourism.estimated_annual.in_millions,
            "anchor_year": tourism.annual_used.base_year,
            "choke_fee": tourism.curve.choke_fee,
            "fit_source": config.raw("tourism.fit_source"),
            "fit_synthetic_fields": list(tourism.fit.synthetic_fields),
            "r_squared": tourism.fit.r_squared,
        },
        imputations={
            "counts": ledger.counts(),
            "cpi_imputed_fraction": cpi.imputed_fraction,
        },
    )
    return Evaluation(report, ledger, tourism.curve, tourism.fit, cpi)


def run_pipeline(config: RunConfig, out_dir: Optional[Union[str, Path]] = None, *, svg: Optional[bool] = None) -> PipelineResult:
    """Loads the inputs, evaluates and writes every artifact into the output directory.

    Artifacts: ``report.json``, ``report.csv``, ``references.csv``, ``demand_curve.csv``,
    ``imputations.csv`` and, when enabled, ``demand_curve.svg``.
    """
    directory = config.output_dir(out_dir)
    evaluation = evaluate(config, load_inputs(config))

    paths = write_report(evaluation.report, directory)
    paths.append(write_csv(evaluation.curve.to_frame(), directory / "demand_curve.csv", ("fee", "predicted_visits")))
    paths.append(write_imputations(evaluation.ledger, directory / "imputations.csv"))
    for point in evaluation.ledger:
        log.info("Imputed %s %s = %.6f (%s)", point.series, point.year, point.value, point.method)
    log.info("Run used %s imputed data point(s)", len(evaluation.ledger))

    if svg if svg is not None else config.flag("report.svg"):
        from core.plotting import render_demand_curve

        paths.append(render_demand_curve(evaluation.curve, directory / "demand_curve.svg"))

    log.info("Net benefit %.2f M BDT; wrote %s artifact(s) to %s", evaluation.report.net_benefit.in_millions, len(paths), directory)
    return PipelineResult(evaluation.report, tuple(paths))


def sweep(config: RunConfig, grid: Grid, *, max_workers: Optional[int] = None) -> SweepResult:
    """Sensitivity sweep over ``grid`` with the inputs loaded once.

    Raises
    ------
    ConfigError
        A grid point overrides a data path.
    """
    for point in expand_grid(grid):
        paths = sorted(key for key in point if key.startswith("paths."))
        if paths:
            raise ConfigError(f"Data paths cannot be swept: {', '.join(paths)}.")
    inputs = load_inputs(config)
    return sensitivity_sweep(config, grid, lambda point: evaluate(point, inputs).report, max_workers=max_workers)
