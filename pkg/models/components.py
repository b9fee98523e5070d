from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple, Union

from models.money import MoneyAmount
from models.series import AnnualSeries
from utils.exceptions import InputError
from utils.functions import percent_deviation

__all__: Tuple[str, ...] = (
    "Side",
    "ValuationComponent",
    "Unavailable",
    "ComponentLike",
    "Status",
    "ReferenceCheck",
)


class Side(Enum):
    BENEFIT = "benefit"
    COST = "cost"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ValuationComponent:
    """One labelled line of the net-benefit equation.

    Attributes
    ----------
    key: str
        Stable identifier, e.g. ``electricity`` or ``lives_lost``.
    label: str
        Human readable name.
    npv: MoneyAmount
        The component's present value.
    side: Side
        Whether the component adds to benefits or to costs.
    first_year, last_year: int
        The span of years that contributed.
    method: str
        How the value was produced, e.g. ``discount(0.07)``.
    imputed_fraction: float
        Share of contributing yearly points that were imputed.
    series: Optional[AnnualSeries]
        The yearly contributions, when the component is a sum over years.
    imputed_inputs: Tuple[AnnualSeries, ...]
        Input series with imputed points that the valuation consumed.
    """

    key: str
    label: str
    npv: MoneyAmount
    side: Side
    first_year: int
    last_year: int
    method: str = ""
    imputed_fraction: float = 0.0
    series: Optional[AnnualSeries] = None
    imputed_inputs: Tuple[AnnualSeries, ...] = ()
    notes: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.imputed_fraction <= 1.0:
            raise InputError(f"Imputed fraction of {self.key!r} must lie in [0, 1], got {self.imputed_fraction!r}.")
        if self.first_year > self.last_year:
            raise InputError(f"Component {self.key!r} has an empty year span.")

    def __repr__(self) -> str:
        return f"<ValuationComponent key={self.key!r} npv={self.npv!s}>"

    @property
    def base_year(self) -> int:
        return self.npv.base_year

    def with_npv(self, npv: MoneyAmount, note: Optional[str] = None) -> ValuationComponent:
        notes = self.notes + ((note,) if note else ())
        return replace(self, npv=npv, notes=notes)


@dataclass(frozen=True)
class Unavailable:
    """A component the model calls for but that could not be valued; reported as a gap, never as zero."""

    key: str
    label: str
    side: Side
    reason: str

    def __repr__(self) -> str:
        return f"<Unavailable key={self.key!r}>"


ComponentLike = Union[ValuationComponent, Unavailable]


class Status(Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ReferenceCheck:
    """An engine figure set against a published one."""

    label: str
    engine: float
    reference: float
    deviation: float
    deviation_pct: Optional[float]
    status: Status

    @classmethod
    def compare(
        cls,
        label: str,
        engine: float,
        reference: float,
        *,
        pass_band: float = 0.01,
        warn_band: float = 0.25,
        abs_tolerance: Optional[float] = None,
    ) -> ReferenceCheck:
        """Classifies the relative deviation: within ``pass_band`` passes, within ``warn_band`` warns.

        When ``abs_tolerance`` is given the check passes on absolute distance instead.
        """
        pct = percent_deviation(engine, reference)
        deviation = engine - reference
        if abs_tolerance is not None:
            status = Status.PASS if abs(deviation) <= abs_tolerance else Status.FAIL
        elif pct is None:
            status = Status.PASS if engine == reference else Status.FAIL
        elif abs(pct) <= pass_band * 100:
            status = Status.PASS
        elif abs(pct) <= warn_band * 100:
            status = Status.WARN
        else:
            status = Status.FAIL
        return cls(label, engine, reference, deviation, pct, status)
