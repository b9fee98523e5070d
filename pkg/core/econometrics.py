from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.stats
from scipy.integrate import trapezoid

from models.money import MoneyAmount
from models.regression import REGRESSORS, TRAVEL_COST, ObservationSet, RegressionFit, Zone
from utils.constants import BDT, MILLION
from utils.exceptions import (
    ChokeNotFound,
    DivisionByZero,
    InputError,
    InvalidStep,
    MissingRegressor,
    SingularDesign,
    UpwardSlopingDemand,
)
from utils.functions import compensated_sum

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "ols_fit",
    "visitation_rate",
    "predict_rate",
    "DemandCurve",
    "demand_curve",
    "consumer_surplus",
    "zones_from_survey",
    "observations_from_survey",
)

PIVOT_TOLERANCE = 1e-10
MAX_FEE_STEPS = 1_000_000
_SCAN_CHUNK = 8192


def ols_fit(data: ObservationSet) -> RegressionFit:
    """Fits ``y = a + X b + u`` by ordinary least squares.

    The normal equations ``X'X beta = X'y`` are solved through a column-pivoted QR
    factorisation of ``X'X``; a pivot below ``1e-10`` times the largest one marks
    the design as rank deficient.

    Raises
    ------
    SingularDesign
        The design matrix does not have full column rank.
    InsufficientObservations
        ``n <= k + 1`` (raised when the observation set is built).
    """
    X = data.design_matrix()
    y = data.response
    n, p = X.shape

    normal = X.T @ X
    moment = X.T @ y
    q, r, pivot = scipy.linalg.qr(normal, pivoting=True)
    diagonal = np.abs(np.diag(r))
    if diagonal[0] == 0 or diagonal.min() <= PIVOT_TOLERANCE * diagonal.max():
        raise SingularDesign(f"The design matrix of {data!r} is rank deficient.")

    beta = np.empty(p)
    beta[pivot] = scipy.linalg.solve_triangular(r, q.T @ moment)
    inverse = np.empty((p, p))
    inverse[pivot, :] = scipy.linalg.solve_triangular(r, q.T)

    residuals = y - X @ beta
    df = n - p
    ssr = float(residuals @ residuals)
    sst = float(((y - y.mean()) ** 2).sum())
    if sst > 0:
        r_squared = min(max(1.0 - ssr / sst, 0.0), 1.0)
    else:
        r_squared = 1.0 if ssr == 0 else 0.0

    sigma2 = ssr / df
    standard_errors = np.sqrt(np.clip(np.diag(inverse), 0.0, None) * sigma2)

    k = p - 1
    f_stat: Optional[float] = None
    f_p_value: Optional[float] = None
    if ssr > 0:
        f_stat = ((sst - ssr) / k) / (ssr / df)
        f_p_value = float(scipy.stats.f.sf(f_stat, k, df))

    coefficients: Dict[str, float] = {}
    ses: Dict[str, Optional[float]] = {}
    t_stats: Dict[str, Optional[float]] = {}
    p_values: Dict[str, Optional[float]] = {}
    for index, name in enumerate(data.names, start=1):
        coefficients[name] = float(beta[index])
        se = float(standard_errors[index])
        ses[name] = se
        if se > 0:
            t = float(beta[index]) / se
            t_stats[name] = t
            p_values[name] = float(2.0 * scipy.stats.t.sf(abs(t), df))
        else:
            t_stats[name] = None
            p_values[name] = None

    fit = RegressionFit(
        intercept=float(beta[0]),
        coefficients=coefficients,
        standard_errors=ses,
        t_stats=t_stats,
        p_values=p_values,
        intercept_standard_error=float(standard_errors[0]),
        r_squared=r_squared,
        adjusted_r_squared=1.0 - (1.0 - r_squared) * (n - 1) / df,
        f_stat=f_stat,
        f_p_value=f_p_value,
        residuals=tuple(float(e) for e in residuals),
        n=n,
        k=k,
        response=data.response_name,
    )
    log.info("OLS fit on %s observations: R2=%.4f F=%s", n, r_squared, f_stat)
    return fit


def visitation_rate(zone: Zone, per: float = MILLION) -> float:
    """Visits from ``zone`` per ``per`` inhabitants."""
    if zone.population == 0:
        raise DivisionByZero(f"Zone {zone.name!r} has no population, its visitation rate is undefined.")
    return zone.visitors_observed / zone.population * per


def predict_rate(fit: RegressionFit, covariates: Mapping[str, float]) -> float:
    """Evaluates the fitted linear predictor. The result is not clamped and may be negative."""
    terms = [fit.intercept]
    for name, coefficient in fit.coefficients.items():
        if name not in covariates:
            raise MissingRegressor(name)
        terms.append(coefficient * float(covariates[name]))
    return compensated_sum(terms)


@dataclass(frozen=True)
class DemandCurve:
    """Total predicted visits against a hypothetical added fee, down to the choke fee."""

    fees: np.ndarray
    visits: np.ndarray

    @property
    def choke_fee(self) -> float:
        return float(self.fees[-1])

    def area(self) -> float:
        if self.fees.shape[0] < 2:
            return 0.0
        return float(trapezoid(self.visits, self.fees))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"fee": self.fees, "predicted_visits": self.visits})


def demand_curve(
    fit: RegressionFit,
    zones: Sequence[Zone],
    fee_step: float = 1.0,
    *,
    per: float = MILLION,
    max_steps: int = MAX_FEE_STEPS,
) -> DemandCurve:
    """Scans added fees ``0, step, 2 step, ...`` until total predicted visits reach zero.

    Each zone's rate is predicted at ``travel_cost + fee``, clamped at zero and
    turned into visits through the zone population.

    Raises
    ------
    UpwardSlopingDemand
        The travel-cost coefficient is not negative.
    InvalidStep
        ``fee_step`` is not positive.
    ChokeNotFound
        Visits are still positive after ``max_steps`` steps.
    """
    if TRAVEL_COST not in fit.coefficients:
        raise MissingRegressor(TRAVEL_COST)
    slope = fit.coefficients[TRAVEL_COST]
    if slope >= 0:
        raise UpwardSlopingDemand(f"Travel-cost coefficient {slope!r} is not negative, demand does not slope downwards.")
    if not math.isfinite(fee_step) or fee_step <= 0:
        raise InvalidStep(f"Fee step must be positive, got {fee_step!r}.")

    # rate(TC + f) = rate(TC) + slope * f since the predictor is linear in TC
    base = np.array([predict_rate(fit, zone.covariates()) for zone in zones], dtype=float)
    populations = np.array([zone.population for zone in zones], dtype=float)

    fees_parts: List[np.ndarray] = []
    visits_parts: List[np.ndarray] = []
    start = 0
    while start <= max_steps:
        steps = np.arange(start, min(start + _SCAN_CHUNK, max_steps + 1), dtype=float)
        fees = steps * fee_step
        rates = base[:, None] + slope * fees[None, :]
        visits = (np.clip(rates, 0.0, None) * populations[:, None] / per).sum(axis=0)
        choke = np.flatnonzero(visits <= 0)
        if choke.size:
            cut = int(choke[0]) + 1
            fees_parts.append(fees[:cut])
            visits_parts.append(visits[:cut])
            curve = DemandCurve(np.concatenate(fees_parts), np.concatenate(visits_parts))
            log.debug("Demand curve chokes at fee %.2f after %s steps", curve.choke_fee, curve.fees.shape[0] - 1)
            return curve
        fees_parts.append(fees)
        visits_parts.append(visits)
        start += _SCAN_CHUNK

    raise ChokeNotFound(f"Predicted visits are still positive after {max_steps} fee steps of {fee_step}.")


def consumer_surplus(
    fit: RegressionFit,
    zones: Sequence[Zone],
    fee_step: float = 1.0,
    *,
    per: float = MILLION,
    base_year: int = 2018,
    max_steps: int = MAX_FEE_STEPS,
) -> MoneyAmount:
    """Annual consumer surplus: the trapezoidal area under the total-visits-vs-fee curve."""
    curve = demand_curve(fit, zones, fee_step, per=per, max_steps=max_steps)
    return MoneyAmount(curve.area(), BDT, base_year)


def zones_from_survey(survey: pd.DataFrame, zone_table: pd.DataFrame) -> List[Zone]:
    """Aggregates respondents into zones, in the order of ``zone_table``.

    ``survey`` needs the columns ``zone``, ``travel_cost``, ``monthly_income``,
    ``alone``, ``dhaka`` and ``visits``; ``zone_table`` needs ``zone`` and ``population``.
    """
    grouped = survey.groupby("zone", sort=True)
    zones: List[Zone] = []
    for row in zone_table.itertuples(index=False):
        if row.zone not in grouped.groups:
            zones.append(Zone(name=row.zone, population=int(row.population)))
            continue
        members = grouped.get_group(row.zone)
        zones.append(
            Zone(
                name=row.zone,
                population=int(row.population),
                visitors_observed=float(members["visits"].sum()),
                travel_cost=float(members["travel_cost"].mean()),
                monthly_income=float(members["monthly_income"].mean()),
                alone_share=float(members["alone"].mean()),
                dhaka=int(members["dhaka"].max()),
            )
        )

    unknown = sorted(set(survey["zone"]) - set(zone_table["zone"]))
    if unknown:
        raise InputError(f"Survey respondents come from zones without a population: {unknown}.")
    return zones


def observations_from_survey(survey: pd.DataFrame, zones: Sequence[Zone], per: float = MILLION) -> ObservationSet:
    """Builds the visit-generating regression data: each respondent gets their zone's visitation rate."""
    rates = {zone.name: visitation_rate(zone, per) for zone in zones}
    response = survey["zone"].map(rates).to_numpy(dtype=float)
    return ObservationSet(response, {name: survey[name].to_numpy(dtype=float) for name in REGRESSORS})
