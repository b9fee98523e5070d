from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from core.series import deflate
from models.components import ComponentLike, ReferenceCheck, Side, Unavailable, ValuationComponent
from models.cpi import CpiIndexTable
from models.money import MoneyAmount
from models.report import NetBenefitReport
from utils.exceptions import IncompatibleComponents, InputError, MissingComponent
from utils.functions import compensated_sum

if TYPE_CHECKING:
    from core.config import RunConfig

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "REQUIRED_COMPONENTS",
    "COMPONENT_ORDER",
    "aggregate",
    "harmonize",
    "reference_check",
    "expand_grid",
    "SweepRow",
    "SweepResult",
    "sensitivity_sweep",
)

REQUIRED_COMPONENTS: Tuple[str, ...] = ("electricity", "fisheries", "tourism", "displacement", "lives_lost")
COMPONENT_ORDER: Tuple[str, ...] = REQUIRED_COMPONENTS + ("security", "construction", "environmental")

Grid = Union[Sequence[Mapping[str, Any]], Mapping[str, Sequence[Any]]]


def _order(component: ComponentLike) -> Tuple[int, str]:
    try:
        return COMPONENT_ORDER.index(component.key), component.key
    except ValueError:
        return len(COMPONENT_ORDER), component.key


def aggregate(
    components: Iterable[ComponentLike],
    *,
    excluded: Iterable[str] = ("construction",),
    published_net: Optional[MoneyAmount] = None,
    notes: Sequence[str] = (),
    config: Optional[Mapping[str, str]] = None,
) -> NetBenefitReport:
    """Sums benefits and costs into the net benefit.

    Parameters
    ----------
    components: Iterable[ComponentLike]
        The valued components, in any order, plus any :class:`Unavailable` markers.
        A missing security component is added as unavailable.
    excluded: Iterable[str]
        Keys of components that are reported but left out of the sums.
    published_net: Optional[MoneyAmount]
        The published net benefit; the report discloses the difference.

    Raises
    ------
    MissingComponent
        A required component is absent or unavailable.
    IncompatibleComponents
        The valued components do not share one currency and base year.
    """
    components = list(components)
    keys = [component.key for component in components]
    duplicates = sorted({key for key in keys if keys.count(key) > 1})
    if duplicates:
        raise InputError(f"Components listed more than once: {', '.join(duplicates)}.")

    by_key = {component.key: component for component in components}
    for key in REQUIRED_COMPONENTS:
        if not isinstance(by_key.get(key), ValuationComponent):
            raise MissingComponent(f"The {key} component is required to compute the net benefit.")
    if "security" not in by_key:
        components.append(Unavailable("security", "Security", Side.COST, "Not supplied."))

    valued = [component for component in components if isinstance(component, ValuationComponent)]
    tags = {(component.npv.currency, component.base_year) for component in valued}
    if len(tags) > 1:
        listing = ", ".join(f"{c.key}={c.npv.currency}@{c.base_year}" for c in sorted(valued, key=_order))
        raise IncompatibleComponents(f"Components must share one currency and base year: {listing}.")
    currency, base_year = tags.pop()

    excluded = set(excluded)
    counted = [component for component in sorted(valued, key=_order) if component.key not in excluded]
    gross_benefit = MoneyAmount(
        compensated_sum(c.npv.value for c in counted if c.side is Side.BENEFIT), currency, base_year
    )
    gross_cost = MoneyAmount(compensated_sum(c.npv.value for c in counted if c.side is Side.COST), currency, base_year)
    net = gross_benefit - gross_cost

    report = NetBenefitReport(
        components=tuple(sorted(components, key=_order)),
        counted=tuple(component.key for component in counted),
        gross_benefit=gross_benefit,
        gross_cost=gross_cost,
        net_benefit=net,
        published_net=published_net,
        notes=tuple(notes),
        config=dict(config or {}),
    )
    if report.rounding_slack is not None:
        log.info("Net benefit %s; differs from the published figure by %.2f M", net, report.rounding_slack / 1e6)
    else:
        log.info("Net benefit %s", net)
    return report


def harmonize(
    components: Iterable[ComponentLike],
    base_year: int,
    policy: str = "at_par",
    cpi: Optional[CpiIndexTable] = None,
) -> Tuple[List[ComponentLike], List[str]]:
    """Brings every valued component to ``base_year``.

    ``at_par`` relabels the magnitude unchanged; ``cpi`` rebases it by the CPI ratio.

    Returns
    -------
    Tuple[List[ComponentLike], List[str]]
        The harmonised components and one note per component that was moved.
    """
    if policy not in ("at_par", "cpi"):
        raise InputError(f"Unknown harmonisation policy {policy!r}.")
    if policy == "cpi" and cpi is None:
        raise InputError("CPI harmonisation needs a CPI table.")

    result: List[ComponentLike] = []
    notes: List[str] = []
    for component in components:
        if isinstance(component, Unavailable) or component.base_year == base_year:
            result.append(component)
            continue
        if policy == "at_par":
            npv = component.npv.relabel(base_year)
            note = f"{component.key}: {component.base_year} value taken at par as {base_year}"
        else:
            npv = deflate(component.npv, base_year, cpi)
            note = f"{component.key}: rebased from {component.base_year} to {base_year} by CPI"
        log.warning("Harmonising %s", note)
        notes.append(note)
        result.append(component.with_npv(npv, note))
    return result, notes


def reference_check(
    component: ComponentLike,
    reference: float,
    *,
    pass_band: float,
    warn_band: float,
    label: Optional[str] = None,
) -> Optional[ReferenceCheck]:
    """Compares a valued component with its published value; ``None`` for unavailable components."""
    if isinstance(component, Unavailable):
        return None
    return ReferenceCheck.compare(
        label or component.key, component.npv.value, reference, pass_band=pass_band, warn_band=warn_band
    )


def expand_grid(grid: Grid) -> List[Dict[str, Any]]:
    """Turns a sweep grid into a list of override points.

    A mapping of ``key -> values`` is expanded as the cartesian product in key order;
    a sequence is taken as explicit points.
    """
    if isinstance(grid, Mapping):
        if not grid:
            return []
        keys = list(grid)
        return [dict(zip(keys, values)) for values in itertools.product(*(grid[key] for key in keys))]
    return [dict(point) for point in grid]


@dataclass(frozen=True)
class SweepRow:
    index: int
    overrides: Mapping[str, Any]
    report: NetBenefitReport

    @property
    def net_benefit(self) -> MoneyAmount:
        return self.report.net_benefit


@dataclass(frozen=True)
class SweepResult:
    rows: Tuple[SweepRow, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[SweepRow]:
        return iter(self.rows)

    def to_frame(self) -> pd.DataFrame:
        """One row per grid point: the overrides, then every valued component and the net benefit in million BDT."""
        parameters: List[str] = []
        for row in self.rows:
            parameters.extend(key for key in row.overrides if key not in parameters)
        records: List[Dict[str, Any]] = []
        components: List[str] = []
        for row in self.rows:
            record: Dict[str, Any] = {"index": row.index}
            record.update({key: row.overrides.get(key, "") for key in parameters})
            for component in row.report.valued():
                name = f"{component.key}_mbdt"
                record[name] = component.npv.in_millions
                if name not in components:
                    components.append(name)
            record["net_benefit_mbdt"] = row.net_benefit.in_millions
            records.append(record)
        return pd.DataFrame(records, columns=["index", *parameters, *components, "net_benefit_mbdt"])


def sensitivity_sweep(
    base_config: RunConfig,
    grid: Grid,
    runner: Callable[[RunConfig], NetBenefitReport],
    *,
    max_workers: Optional[int] = None,
) -> SweepResult:
    """Evaluates ``runner`` once per grid point.

    Every point is validated before any evaluation starts. Points run on a thread pool
    and are returned in grid order.

    Raises
    ------
    UnknownParameter
        A grid key is not a configuration key.
    """
    points = expand_grid(grid)
    configs = [base_config.with_overrides(point) for point in points]
    if not configs:
        return SweepResult(())

    log.info("Sweeping %s grid point(s)", len(configs))
    with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="sweep") as executor:
        reports = list(executor.map(runner, configs))
    return SweepResult(tuple(SweepRow(index, point, report) for index, (point, report) in enumerate(zip(points, reports))))
