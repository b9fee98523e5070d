from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple

import orjson

from models.components import ComponentLike, ReferenceCheck, Side, Unavailable, ValuationComponent
from models.money import MoneyAmount
from utils.constants import MILLION, SCHEMA_VERSION

__all__: Tuple[str, ...] = (
    "REPORT_COLUMNS",
    "REFERENCE_COLUMNS",
    "NetBenefitReport",
)

REPORT_COLUMNS: Tuple[str, ...] = ("component", "label", "value_mbdt", "base_year", "imputed_fraction")
REFERENCE_COLUMNS: Tuple[str, ...] = ("check", "engine_mbdt", "reference_mbdt", "deviation_mbdt", "deviation_pct", "status")

UNAVAILABLE = "Unavailable"


def _mbdt(value: float) -> float:
    return value / MILLION


@dataclass(frozen=True)
class NetBenefitReport:
    """The net benefit of the dam with every component that went into it.

    Attributes
    ----------
    components: Tuple[ComponentLike, ...]
        Valued and unavailable components in report order.
    counted: Tuple[str, ...]
        Keys of the valued components that enter the gross sums. Components that are
        reported but not counted (construction by default) are listed without effect.
    gross_benefit, gross_cost, net_benefit: MoneyAmount
        ``net_benefit`` is exactly ``gross_benefit - gross_cost``.
    published_net: Optional[MoneyAmount]
        The published net benefit, used to disclose the rounding slack.
    """

    components: Tuple[ComponentLike, ...]
    counted: Tuple[str, ...]
    gross_benefit: MoneyAmount
    gross_cost: MoneyAmount
    net_benefit: MoneyAmount
    published_net: Optional[MoneyAmount] = None
    references: Tuple[ReferenceCheck, ...] = ()
    notes: Tuple[str, ...] = ()
    config: Mapping[str, str] = field(default_factory=dict)
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __repr__(self) -> str:
        return f"<NetBenefitReport net={self.net_benefit!s} components={len(self.components)}>"

    @property
    def base_year(self) -> int:
        return self.net_benefit.base_year

    @property
    def currency(self) -> str:
        return self.net_benefit.currency

    @property
    def rounding_slack(self) -> Optional[float]:
        """``net_benefit - published_net`` in BDT, when a published net is known."""
        if self.published_net is None:
            return None
        return self.net_benefit.value - self.published_net.value

    def __getitem__(self, key: str) -> ComponentLike:
        for component in self.components:
            if component.key == key:
                return component
        raise KeyError(key)

    def get(self, key: str) -> Optional[ComponentLike]:
        try:
            return self[key]
        except KeyError:
            return None

    def valued(self, side: Optional[Side] = None) -> List[ValuationComponent]:
        return [
            component
            for component in self.components
            if isinstance(component, ValuationComponent) and (side is None or component.side is side)
        ]

    def unavailable(self) -> List[Unavailable]:
        return [component for component in self.components if isinstance(component, Unavailable)]

    def with_extras(self, **extras: Any) -> NetBenefitReport:
        return replace(self, extras={**self.extras, **extras})

    def _component_dict(self, component: ComponentLike) -> Dict[str, Any]:
        if isinstance(component, Unavailable):
            return {
                "key": component.key,
                "label": component.label,
                "side": str(component.side),
                "status": "unavailable",
                "reason": component.reason,
            }
        return {
            "key": component.key,
            "label": component.label,
            "side": str(component.side),
            "status": "valued",
            "counted": component.key in self.counted,
            "value_mbdt": _mbdt(component.npv.value),
            "currency": component.npv.currency,
            "base_year": component.base_year,
            "first_year": component.first_year,
            "last_year": component.last_year,
            "method": component.method,
            "imputed_fraction": component.imputed_fraction,
            "notes": list(component.notes),
        }

    def to_dict(self) -> Dict[str, Any]:
        slack = self.rounding_slack
        return {
            "schema_version": SCHEMA_VERSION,
            "currency": self.currency,
            "base_year": self.base_year,
            "components": [self._component_dict(component) for component in self.components],
            "gross_benefit_mbdt": _mbdt(self.gross_benefit.value),
            "gross_cost_mbdt": _mbdt(self.gross_cost.value),
            "net_benefit_mbdt": _mbdt(self.net_benefit.value),
            "published_net_mbdt": None if self.published_net is None else _mbdt(self.published_net.value),
            "rounding_slack_mbdt": None if slack is None else _mbdt(slack),
            "references": [
                {
                    "check": check.label,
                    "engine_mbdt": _mbdt(check.engine),
                    "reference_mbdt": _mbdt(check.reference),
                    "deviation_pct": check.deviation_pct,
                    "status": str(check.status),
                }
                for check in self.references
            ],
            "notes": list(self.notes),
            "config": dict(self.config),
            "extras": dict(self.extras),
        }

    def to_json(self) -> bytes:
        return orjson.dumps(
            self.to_dict(),
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE,
        )

    def csv_rows(self) -> List[Dict[str, Any]]:
        """Rows of ``component,label,value_mbdt,base_year,imputed_fraction`` followed by the totals."""
        rows: List[Dict[str, Any]] = []
        for component in self.components:
            if isinstance(component, Unavailable):
                rows.append(dict(zip(REPORT_COLUMNS, (component.key, component.label, UNAVAILABLE, "", ""))))
                continue
            label = component.label if component.key in self.counted else f"{component.label} (not counted)"
            values = (component.key, label, _mbdt(component.npv.value), component.base_year, component.imputed_fraction)
            rows.append(dict(zip(REPORT_COLUMNS, values)))

        for key, label, amount in (
            ("gross_benefit", "Gross benefit", self.gross_benefit),
            ("gross_cost", "Gross cost", self.gross_cost),
            ("net_benefit", "Net benefit", self.net_benefit),
        ):
            rows.append(dict(zip(REPORT_COLUMNS, (key, label, _mbdt(amount.value), amount.base_year, ""))))
        return rows

    def reference_rows(self) -> List[Dict[str, Any]]:
        return [
            dict(
                zip(
                    REFERENCE_COLUMNS,
                    (
                        check.label,
                        _mbdt(check.engine),
                        _mbdt(check.reference),
                        _mbdt(check.deviation),
                        "" if check.deviation_pct is None else check.deviation_pct,
                        str(check.status),
                    ),
                )
            )
            for check in self.references
        ]
