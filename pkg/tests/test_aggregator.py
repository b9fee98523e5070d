from __future__ import annotations

import itertools
from typing import Dict, List

import pytest

from core.aggregator import aggregate, expand_grid, harmonize, reference_check
from models.components import ReferenceCheck, Side, Status, Unavailable, ValuationComponent
from models.cpi import CpiIndexTable
from models.money import MoneyAmount
from utils.constants import BDT
from utils.exceptions import IncompatibleComponents, InputError, MissingComponent

PUBLISHED_MBDT: Dict[str, float] = {
    "electricity": 138_341.7,
    "tourism": 20_070.0,
    "fisheries": 33_366.82,
    "displacement": 12_756.0,
    "lives_lost": 432.65,
}
COSTS = ("displacement", "lives_lost", "construction", "environmental")


def _component(key: str, mbdt: float, base_year: int = 2020) -> ValuationComponent:
    side = Side.COST if key in COSTS else Side.BENEFIT
    return ValuationComponent(key, key.title(), MoneyAmount(mbdt * 1e6, BDT, base_year), side, 1962, base_year)


def _published() -> List[ValuationComponent]:
    return [_component(key, value) for key, value in PUBLISHED_MBDT.items()]


def test_aggregate_reproduces_published_net() -> None:
    report = aggregate(_published(), published_net=MoneyAmount(178_590.38e6, BDT, 2020))
    assert report.net_benefit.in_millions == pytest.approx(178_590.38, abs=1.0)
    assert report.net_benefit.in_millions == pytest.approx(178_589.87, abs=1e-6)
    assert report.rounding_slack / 1e6 == pytest.approx(-0.51, abs=1e-6)
    assert report.to_dict()["rounding_slack_mbdt"] == pytest.approx(-0.51, abs=1e-6)
    assert report.gross_benefit.in_millions == pytest.approx(191_778.52)
    assert report.gross_cost.in_millions == pytest.approx(13_188.65)


def test_net_is_gross_benefit_minus_gross_cost() -> None:
    report = aggregate(_published())
    assert report.net_benefit == report.gross_benefit - report.gross_cost


def test_aggregate_is_permutation_invariant() -> None:
    components = _published()
    nets = {aggregate(order).net_benefit.value for order in itertools.permutations(components)}
    assert len(nets) == 1


def test_aggregate_zero_and_symmetric() -> None:
    zeros = [_component(key, 0.0) for key in PUBLISHED_MBDT]
    assert aggregate(zeros).net_benefit.value == 0.0

    balanced = [
        _component("electricity", 100.0),
        _component("fisheries", 0.0),
        _component("tourism", 0.0),
        _component("displacement", 60.0),
        _component("lives_lost", 40.0),
    ]
    assert aggregate(balanced).net_benefit.value == 0.0


def test_increasing_a_benefit_moves_net_by_the_delta() -> None:
    base = aggregate(_published()).net_benefit.value
    bumped = [_component(key, value + (5.0 if key == "tourism" else 0.0)) for key, value in PUBLISHED_MBDT.items()]
    assert aggregate(bumped).net_benefit.value - base == pytest.approx(5e6)


def test_security_is_never_omitted() -> None:
    report = aggregate(_published())
    security = report["security"]
    assert isinstance(security, Unavailable)
    rows = {row["component"]: row for row in report.csv_rows()}
    assert rows["security"]["value_mbdt"] == "Unavailable"


def test_construction_is_reported_but_not_counted_by_default() -> None:
    components = [*_published(), _component("construction", 404_882.6)]
    default = aggregate(components)
    assert "construction" not in default.counted
    assert default.net_benefit.in_millions == pytest.approx(178_589.87)
    rows = {row["component"]: row for row in default.csv_rows()}
    assert rows["construction"]["label"].endswith("(not counted)")

    counted = aggregate(components, excluded=())
    assert counted.net_benefit.in_millions == pytest.approx(178_589.87 - 404_882.6)
    assert counted.net_benefit.value < 0


def test_missing_required_component() -> None:
    with pytest.raises(MissingComponent):
        aggregate(_published()[:-1])
    unavailable = Unavailable("lives_lost", "Lives lost", Side.COST, "no data")
    with pytest.raises(MissingComponent):
        aggregate([*_published()[:-1], unavailable])


def test_mixed_base_years_are_rejected() -> None:
    components = _published()
    components[0] = _component("electricity", 1.0, base_year=2019)
    with pytest.raises(IncompatibleComponents):
        aggregate(components)


def test_duplicate_components_are_rejected() -> None:
    with pytest.raises(InputError):
        aggregate([*_published(), _component("tourism", 1.0)])


def test_harmonize_at_par_relabels(flat_cpi: CpiIndexTable) -> None:
    components = [_component("fisheries", 10.0, base_year=2019), _component("tourism", 5.0)]
    harmonized, notes = harmonize(components, 2020)
    assert [c.base_year for c in harmonized] == [2020, 2020]
    assert harmonized[0].npv.value == 10e6
    assert len(notes) == 1
    assert harmonized[0].notes == tuple(notes)

    by_cpi, _ = harmonize(components, 2020, "cpi", flat_cpi)
    assert by_cpi[0].npv.value == pytest.approx(10e6)


def test_harmonize_policy_validation() -> None:
    with pytest.raises(InputError):
        harmonize([], 2020, "nearest")
    with pytest.raises(InputError):
        harmonize([], 2020, "cpi")


def test_reference_bands() -> None:
    assert ReferenceCheck.compare("x", 100.5, 100.0).status is Status.PASS
    assert ReferenceCheck.compare("x", 110.0, 100.0).status is Status.WARN
    assert ReferenceCheck.compare("x", 61.2, 100.0).status is Status.FAIL
    assert ReferenceCheck.compare("x", 101.0, 100.0, abs_tolerance=1.0).status is Status.PASS

    unavailable = Unavailable("security", "Security", Side.COST, "no data")
    assert reference_check(unavailable, 1.0, pass_band=0.01, warn_band=0.25) is None


def test_expand_grid() -> None:
    assert expand_grid({}) == []
    assert expand_grid({"a": [1, 2], "b": ["x"]}) == [{"a": 1, "b": "x"}, {"a": 2, "b": "x"}]
    assert expand_grid([{"a": 3}]) == [{"a": 3}]
