from __future__ import annotations

from pathlib import Path

import orjson
import pandas as pd
import pytest

from core.cli import EXIT_INPUT_ERROR, EXIT_OK, parse_assignments, run
from utils.exceptions import ConfigError


def _run(*argv: str) -> int:
    return run(list(argv), stream=False)


def test_aggregate_writes_report(tmp_path: Path) -> None:
    assert _run("aggregate", "--out", str(tmp_path)) == EXIT_OK
    for name in ("report.json", "report.csv", "references.csv", "demand_curve.csv", "imputations.csv"):
        assert (tmp_path / name).is_file()
    assert (tmp_path / "logs" / "hydro_cba.log").is_file()


def test_deflate_by_ratio(tmp_path: Path) -> None:
    code = _run("deflate", "17678", "--from", "1957", "--to", "2019", "--ratio", "40.0873", "--out", str(tmp_path))
    assert code == EXIT_OK
    payload = orjson.loads((tmp_path / "deflate.json").read_bytes())
    assert payload["value"] == pytest.approx(708_663.29, abs=0.01)
    assert payload["to_year"] == 2019
    assert payload["method"] == "ratio(40.0873)"


def test_summarize(tmp_path: Path) -> None:
    assert _run("summarize", "--column", "monthly_income", "--out", str(tmp_path)) == EXIT_OK
    frame = pd.read_csv(tmp_path / "survey_summary.csv")
    assert list(frame["variable"]) == ["monthly_income"]
    assert frame["n"][0] == 200


def test_sweep(tmp_path: Path) -> None:
    code = _run("sweep", "--set", "electricity.discount_rate=0.05,0.07", "--out", str(tmp_path))
    assert code == EXIT_OK
    frame = pd.read_csv(tmp_path / "sweep.csv")
    assert len(frame) == 2
    assert frame["net_benefit_mbdt"][0] > frame["net_benefit_mbdt"][1]


def test_value_costs(tmp_path: Path) -> None:
    assert _run("value-costs", "--out", str(tmp_path)) == EXIT_OK
    frame = pd.read_csv(tmp_path / "costs.csv", dtype=str)
    assert "Unavailable" in set(frame["value_mbdt"])


def test_missing_config_is_an_input_error(tmp_path: Path) -> None:
    assert _run("aggregate", "--config", str(tmp_path / "absent.cfg"), "--out", str(tmp_path)) == EXIT_INPUT_ERROR


def test_unknown_config_key_is_an_input_error(tmp_path: Path) -> None:
    path = tmp_path / "bad.cfg"
    path.write_text("[electricity]\nmargin = 3\n", encoding="utf-8")
    assert _run("aggregate", "--config", str(path), "--out", str(tmp_path)) == EXIT_INPUT_ERROR


def test_bad_data_file_is_an_input_error(tmp_path: Path) -> None:
    cpi = tmp_path / "cpi.csv"
    cpi.write_text("year,value\n2010,abc\n", encoding="utf-8")
    config = tmp_path / "run.cfg"
    config.write_text("[paths]\ncpi = cpi.csv\n", encoding="utf-8")
    assert _run("aggregate", "--config", str(config), "--out", str(tmp_path)) == EXIT_INPUT_ERROR


def test_usage_errors_exit() -> None:
    with pytest.raises(SystemExit):
        _run()
    with pytest.raises(SystemExit):
        _run("deflate", "lots", "--from", "1957", "--to", "2019")


def test_parse_assignments() -> None:
    assert parse_assignments(["a.b=1,2", "c.d= x "]) == {"a.b": ["1", "2"], "c.d": ["x"]}
    assert parse_assignments(None) == {}
    with pytest.raises(ConfigError):
        parse_assignments(["nokey"])


def test_header_only_cpi_is_an_input_error(tmp_path: Path) -> None:
    (tmp_path / "cpi.csv").write_text("year,value\n", encoding="utf-8")
    config = tmp_path / "run.cfg"
    config.write_text("[paths]\ncpi = cpi.csv\n", encoding="utf-8")
    assert _run("aggregate", "--config", str(config), "--out", str(tmp_path)) == EXIT_INPUT_ERROR
