from __future__ import annotations

from pathlib import Path

import pytest

from core.config import DATA_DIR, RunConfig
from core.io import read_cpi_csv
from models.cpi import CpiIndexTable


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def bundled_cpi() -> CpiIndexTable:
    return read_cpi_csv(DATA_DIR / "cpi.csv")


@pytest.fixture
def flat_cpi() -> CpiIndexTable:
    return CpiIndexTable.from_mapping(dict.fromkeys(range(1950, 2031), 100.0))


@pytest.fixture
def config() -> RunConfig:
    return RunConfig()


@pytest.fixture(autouse=True)
def _no_config_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("HYDRO_CBA_CONFIG", raising=False)
    monkeypatch.delenv("SENTRY_DSN", raising=False)
