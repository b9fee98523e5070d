from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
import orjson

from utils.constants import SCHEMA_VERSION
from utils.exceptions import InputError, InsufficientObservations

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "TRAVEL_COST",
    "REGRESSORS",
    "ObservationSet",
    "RegressionFit",
    "Zone",
)

TRAVEL_COST = "travel_cost"
MONTHLY_INCOME = "monthly_income"
ALONE = "alone"
DHAKA = "dhaka"
REGRESSORS: Tuple[str, ...] = (TRAVEL_COST, MONTHLY_INCOME, ALONE, DHAKA)
DUMMIES: Tuple[str, ...] = (ALONE, DHAKA)

T_STAT_TOLERANCE = 1e-9


class ObservationSet:
    """A response vector and named regressor columns of equal length.

    Parameters
    ----------
    response: Sequence[float]
        The dependent variable, e.g. the visitation rate of each respondent's zone.
    regressors: Mapping[str, Sequence[float]]
        Regressor columns by name, in model order. The intercept is added by the fit.
    dummies: Optional[Sequence[str]]
        Columns that may only hold 0 or 1. Defaults to the ``alone`` and ``dhaka``
        columns when present.
    response_name: str
        The name of the dependent variable.
    """

    __slots__: Tuple[str, ...] = ("response", "regressors", "names", "dummies", "response_name")

    def __init__(
        self,
        response: Sequence[float],
        regressors: Mapping[str, Sequence[float]],
        *,
        dummies: Optional[Sequence[str]] = None,
        response_name: str = "visitation_rate",
    ) -> None:
        self.response = np.asarray(response, dtype=float)
        self.names: Tuple[str, ...] = tuple(regressors)
        self.regressors: Dict[str, np.ndarray] = {name: np.asarray(column, dtype=float) for name, column in regressors.items()}
        self.dummies: Tuple[str, ...] = tuple(dummies) if dummies is not None else tuple(d for d in DUMMIES if d in regressors)
        self.response_name = response_name

        n = self.response.shape[0]
        for name, column in self.regressors.items():
            if column.shape != (n,):
                raise InputError(f"Regressor {name!r} has {column.shape[0]} values, the response has {n}.")
            if not np.all(np.isfinite(column)):
                raise InputError(f"Regressor {name!r} contains non-finite values.")
        if not np.all(np.isfinite(self.response)):
            raise InputError(f"Response {response_name!r} contains non-finite values.")
        for name in self.dummies:
            if name not in self.regressors:
                raise InputError(f"Dummy column {name!r} is not among the regressors.")
            if not np.all(np.isin(self.regressors[name], (0.0, 1.0))):
                raise InputError(f"Dummy column {name!r} may only contain 0 and 1.")
        if n <= self.k + 1:
            raise InsufficientObservations(f"{n} observations cannot identify an intercept and {self.k} regressors.")

    def __repr__(self) -> str:
        return f"<ObservationSet n={self.n} regressors={self.names}>"

    @property
    def n(self) -> int:
        return int(self.response.shape[0])

    @property
    def k(self) -> int:
        return len(self.names)

    def design_matrix(self) -> np.ndarray:
        """The ``n x (k + 1)`` matrix with a leading column of ones."""
        columns = [np.ones(self.n)] + [self.regressors[name] for name in self.names]
        return np.column_stack(columns)


@dataclass(frozen=True)
class RegressionFit:
    """Estimated visit-generating function with its diagnostics.

    ``t_stats`` and ``p_values`` hold ``None`` where the standard error is zero.
    Fits loaded from published tables keep their numbers as printed, even when
    they are mutually inconsistent; see :meth:`inconsistent_t_stats`.
    """

    intercept: float
    coefficients: Dict[str, float]
    standard_errors: Dict[str, Optional[float]]
    t_stats: Dict[str, Optional[float]]
    r_squared: float
    f_stat: Optional[float]
    n: int
    k: int
    residuals: Tuple[float, ...] = ()
    p_values: Dict[str, Optional[float]] = field(default_factory=dict)
    intercept_standard_error: Optional[float] = None
    adjusted_r_squared: Optional[float] = None
    f_p_value: Optional[float] = None
    response: str = "visitation_rate"
    synthetic_fields: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_squared <= 1.0:
            raise InputError(f"R-squared must lie in [0, 1], got {self.r_squared!r}.")
        if self.k != len(self.coefficients):
            raise InputError(f"Fit declares k={self.k} but carries {len(self.coefficients)} coefficients.")

    def __repr__(self) -> str:
        return f"<RegressionFit n={self.n} k={self.k} r_squared={self.r_squared:.4f}>"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(self.coefficients)

    @property
    def df_residual(self) -> int:
        return self.n - self.k - 1

    def inconsistent_t_stats(self, tolerance: float = T_STAT_TOLERANCE) -> Dict[str, Tuple[float, float]]:
        """Terms whose t statistic differs from coefficient / standard error.

        Returns
        -------
        Dict[str, Tuple[float, float]]
            ``name -> (stored t, recomputed t)``.
        """
        bad: Dict[str, Tuple[float, float]] = {}
        for name, coefficient in self.coefficients.items():
            se = self.standard_errors.get(name)
            t = self.t_stats.get(name)
            if se is None or t is None or se <= 0:
                continue
            expected = coefficient / se
            if abs(t - expected) > tolerance * max(1.0, abs(expected)):
                bad[name] = (t, expected)
        return bad

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "synthetic_fields": list(self.synthetic_fields),
            "response": self.response,
            "intercept": self.intercept,
            "coefficients": dict(self.coefficients),
            "standard_errors": dict(self.standard_errors),
            "t_stats": dict(self.t_stats),
            "p_values": dict(self.p_values),
            "intercept_standard_error": self.intercept_standard_error,
            "r_squared": self.r_squared,
            "adjusted_r_squared": self.adjusted_r_squared,
            "f_stat": self.f_stat,
            "f_p_value": self.f_p_value,
            "residuals": list(self.residuals),
            "n": self.n,
            "k": self.k,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RegressionFit:
        try:
            fit = cls(
                intercept=float(data["intercept"]),
                coefficients={str(k): float(v) for k, v in data["coefficients"].items()},
                standard_errors={str(k): _optional_float(v) for k, v in data["standard_errors"].items()},
                t_stats={str(k): _optional_float(v) for k, v in data["t_stats"].items()},
                p_values={str(k): _optional_float(v) for k, v in data.get("p_values", {}).items()},
                intercept_standard_error=_optional_float(data.get("intercept_standard_error")),
                r_squared=float(data["r_squared"]),
                adjusted_r_squared=_optional_float(data.get("adjusted_r_squared")),
                f_stat=_optional_float(data.get("f_stat")),
                f_p_value=_optional_float(data.get("f_p_value")),
                residuals=tuple(float(r) for r in data.get("residuals", ())),
                n=int(data["n"]),
                k=int(data["k"]),
                response=str(data.get("response", "visitation_rate")),
                synthetic_fields=tuple(data.get("synthetic_fields", ())),
            )
        except KeyError as error:
            raise InputError(f"Regression fit is missing the {error.args[0]!r} field.") from None

        for name, (stored, expected) in fit.inconsistent_t_stats().items():
            log.warning("Fit term %s: stored t = %s but coefficient / SE = %.4f; kept as published", name, stored, expected)
        return fit

    def to_json(self) -> bytes:
        return orjson.dumps(self.to_dict(), option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY)

    @classmethod
    def from_json(cls, payload: bytes) -> RegressionFit:
        try:
            data = orjson.loads(payload)
        except orjson.JSONDecodeError as error:
            raise InputError(f"Regression fit is not valid JSON: {error}") from None
        return cls.from_dict(data)


def _optional_float(value: Any) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


@dataclass(frozen=True)
class Zone:
    """An origin zone of the zonal travel-cost model, with its visitors' mean covariates.

    Attributes
    ----------
    name: str
        The zone (division) name.
    population: int
        The potential visitors living in the zone.
    visitors_observed: float
        Visits observed from the zone.
    travel_cost: float
        Mean travel cost (BDT).
    monthly_income: float
        Mean monthly income (BDT).
    alone_share: float
        Share of visitors travelling alone.
    dhaka: int
        1 when the zone is Dhaka.
    """

    name: str
    population: int
    visitors_observed: float = 0.0
    travel_cost: float = 0.0
    monthly_income: float = 0.0
    alone_share: float = 0.0
    dhaka: int = 0

    def __post_init__(self) -> None:
        # zero is representable so visitation_rate can report it
        if self.population < 0:
            raise InputError(f"Zone {self.name!r} population cannot be negative.")
        if self.visitors_observed < 0:
            raise InputError(f"Zone {self.name!r} cannot have negative visitors.")

    def covariates(self, extra_fee: float = 0.0) -> Dict[str, float]:
        return {
            TRAVEL_COST: self.travel_cost + extra_fee,
            MONTHLY_INCOME: self.monthly_income,
            ALONE: self.alone_share,
            DHAKA: float(self.dhaka),
        }
