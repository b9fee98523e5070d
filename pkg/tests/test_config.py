from __future__ import annotations

from pathlib import Path

import pytest

from core.config import DATA_DIR, DEFAULTS, RunConfig
from utils.exceptions import ConfigError, InvalidAmountError, UnknownParameter
from utils.transformers import AmountTransformer, YearRangeTransformer, YearTransformer


def test_defaults_cover_every_section(config: RunConfig) -> None:
    assert set(config.values) == {f"{section}.{key}" for section, keys in DEFAULTS.items() for key in keys}
    assert config.number("tourism.annual_cs") == 289.71e6
    assert config.year_range("electricity.years") == (1962, 2020)
    assert config.rate("electricity.discount_rate") == 0.07
    assert config.flag("aggregate.include_construction") is False
    assert config.path("paths.cpi") == DATA_DIR / "cpi.csv"


def test_bundled_configuration_matches_defaults(data_dir: Path) -> None:
    bundled = RunConfig.load(data_dir / "kaptai.cfg")
    defaults = RunConfig()
    for key, value in bundled.values.items():
        assert defaults.raw(key) == value, key
    assert bundled.path("paths.cpi") == (data_dir / "cpi.csv").resolve()


def test_load_reads_sections(tmp_path: Path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text("[fisheries]\ndiscount_rate = 0.05\n\n[paths]\ncpi = custom/cpi.csv\n", encoding="utf-8")
    config = RunConfig.load(path)
    assert config.rate("fisheries.discount_rate") == 0.05
    assert config.path("paths.cpi") == tmp_path.resolve() / "custom" / "cpi.csv"
    assert config.path("paths.zones") == DATA_DIR / "zones.csv"


def test_load_uses_environment_fallback(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    path = tmp_path / "env.cfg"
    path.write_text("[tourism]\nfee_step = 0.5\n", encoding="utf-8")
    monkeypatch.setenv("HYDRO_CBA_CONFIG", str(path))
    assert RunConfig.load().number("tourism.fee_step") == 0.5


def test_unknown_keys_and_sections(tmp_path: Path) -> None:
    path = tmp_path / "bad.cfg"
    path.write_text("[fisheries]\nrat = 0.1\n", encoding="utf-8")
    with pytest.raises(UnknownParameter) as info:
        RunConfig.load(path)
    assert info.value.key == "fisheries.rat"

    path.write_text("[fishery]\nrate = 0.1\n", encoding="utf-8")
    with pytest.raises(UnknownParameter):
        RunConfig.load(path)

    with pytest.raises(UnknownParameter):
        RunConfig().with_overrides({"electricity.margin": 1})


def test_missing_file() -> None:
    with pytest.raises(ConfigError):
        RunConfig.load("/nonexistent/hydro.cfg")


def test_choices_and_ranges_are_checked() -> None:
    with pytest.raises(ConfigError):
        RunConfig({"electricity.mode": "both"})
    with pytest.raises(ConfigError):
        RunConfig({"fisheries.discount_rate": "1.5"}).rate("fisheries.discount_rate")
    with pytest.raises(ConfigError):
        RunConfig({"electricity.years": "2020:1962"}).year_range("electricity.years")
    with pytest.raises(ConfigError):
        RunConfig({"costs.families": "18000.5"}).integer("costs.families")


def test_overrides_are_immutable(config: RunConfig) -> None:
    changed = config.with_overrides({"electricity.unit_price": 10.0, "aggregate.include_construction": True})
    assert changed.number("electricity.unit_price") == 10.0
    assert changed.flag("aggregate.include_construction") is True
    assert config.number("electricity.unit_price") == 7.78
    assert changed != config
    assert config.with_overrides({}) == config


def test_snapshot_is_sorted_raw_text(config: RunConfig) -> None:
    snapshot = config.snapshot()
    assert list(snapshot) == sorted(snapshot)
    assert snapshot["paths.cpi"] == "cpi.csv"


def test_output_dir(config: RunConfig, tmp_path: Path) -> None:
    assert config.output_dir() == Path("out")
    assert config.output_dir(tmp_path) == tmp_path


@pytest.mark.parametrize(
    ("text", "expected"),
    [("289.71m", 289.71e6), ("2403M", 2403e6), ("17,678", 17_678.0), ("1.5e6", 1.5e6), ("0.07", 0.07), ("2t", 2e12)],
)
def test_amount_transformer(text: str, expected: float) -> None:
    assert AmountTransformer()(text) == expected


def test_amount_transformer_rejects_text() -> None:
    with pytest.raises(InvalidAmountError):
        AmountTransformer()("lots")


def test_year_transformers() -> None:
    assert YearTransformer()("2006-07") == 2006
    assert YearRangeTransformer()("1962..2020") == (1962, 2020)
