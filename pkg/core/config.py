from __future__ import annotations

import configparser
import logging
import os
from pathlib import Path
from types import MappingProxyType
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from utils.constants import CONFIG_ENV_VAR
from utils.exceptions import CbaError, ConfigError, UnknownParameter
from utils.transformers import AmountTransformer, YearRangeTransformer, YearTransformer

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "DEFAULTS",
    "DATA_DIR",
    "RunConfig",
)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# Every known key with its default, as it would be written in a config file.
DEFAULTS: Dict[str, Dict[str, str]] = {
    "paths": {
        "cpi": "cpi.csv",
        "fisheries": "fisheries.csv",
        "survey": "tourist_survey.csv",
        "zones": "zones.csv",
        "households": "household_losses.csv",
        "life_expectancy": "life_expectancy.csv",
        "regression_fit": "demand_fit.json",
        "output": "out",
    },
    "series": {
        "earliest_year": "1962",
        "backcast_window": "5",
        "cpi_base_year": "2010",
    },
    "electricity": {
        "capacity_mw": "180",
        "hours_per_day": "24",
        "days_per_year": "365",
        "unit_price": "7.78",
        "unit_cost": "4.20",
        "cost_usd": "0.05",
        "exchange_rate": "84",
        "years": "1962:2020",
        "mode": "discount",
        "discount_rate": "0.07",
        "reference": "138341.7m",
    },
    "fisheries": {
        "avg_price": "126.23",
        "avg_price_year": "2016",
        "price_anchor": "revenue",
        "unit_cost": "15",
        "unit_cost_year": "2019",
        "discount_rate": "0.10",
        "base_year": "2019",
        "first_year": "1986",
        "accumulation": "compound",
        "catch_fill": "cpi",
        "reference": "33366.82m",
    },
    "tourism": {
        "annual_cs": "289.71m",
        "cs_source": "reference",
        "anchor_year": "2018",
        "years": "1962:2020",
        "fee_step": "1",
        "per": "1000000",
        "fit_source": "fixture",
        "reference": "20070m",
    },
    "costs": {
        "establishment": "2403m",
        "bdt_per_rs": "1",
        "compensation_rate": "700",
        "acres": "54000",
        "stated_total": "2440.3m",
        "cost_year": "1957",
        "target_year": "2019",
        "deflator": "ratio",
        "land_deflator_ratio": "40.0873",
        "construction_deflator_ratio": "165.9150924067",
        "land_loss_per_family": "17678",
        "families": "18000",
        "per_life_value": "366654",
        "death_year": "1987",
        "age_at_death": "35",
        "annual_income": "10000",
        "deaths": "1180",
        "household_scale": "18000",
        "displacement_reference": "12756m",
        "lives_reference": "432.65m",
        "construction_reference": "404882.6m",
    },
    "aggregate": {
        "base_year": "2020",
        "harmonize": "at_par",
        "include_construction": "false",
        "include_environmental": "false",
        "reference_net": "178590.38m",
    },
    "report": {
        "pass_band": "0.01",
        "warn_band": "0.25",
        "svg": "false",
    },
}

CHOICES: Dict[str, Tuple[str, ...]] = {
    "electricity.mode": ("discount", "cpi_scale"),
    "fisheries.price_anchor": ("revenue", "average"),
    "fisheries.accumulation": ("compound", "discount"),
    "fisheries.catch_fill": ("cpi", "none"),
    "tourism.cs_source": ("reference", "estimated"),
    "tourism.fit_source": ("fixture", "survey"),
    "costs.deflator": ("ratio", "cpi"),
    "aggregate.harmonize": ("at_par", "cpi"),
}

_BOOLEANS = configparser.ConfigParser.BOOLEAN_STATES
_amount = AmountTransformer()
_year = YearTransformer()
_year_range = YearRangeTransformer()


def _flatten(sections: Mapping[str, Mapping[str, str]]) -> Dict[str, str]:
    return {f"{section}.{key}": value for section, values in sections.items() for key, value in values.items()}


class RunConfig:
    """Immutable run configuration: a flat ``section.key -> raw text`` map over the defaults.

    Parameters
    ----------
    values: Mapping[str, str]
        Raw values by ``section.key``; keys that are not given fall back to :data:`DEFAULTS`.
    root: Path
        The directory relative data paths resolve against.
    source: Optional[Path]
        The file the configuration was read from.
    """

    __slots__: Tuple[str, ...] = ("_values", "_explicit", "root", "source")

    def __init__(self, values: Optional[Mapping[str, str]] = None, *, root: Path = DATA_DIR, source: Optional[Path] = None) -> None:
        merged = _flatten(DEFAULTS)
        for key, value in (values or {}).items():
            if key not in merged:
                raise UnknownParameter(key, source=None if source is None else str(source))
            merged[key] = str(value).strip()

        self._values: Dict[str, str] = dict(sorted(merged.items()))
        self._explicit = frozenset(values or ())
        self.root = Path(root)
        self.source = source

        for key, choices in CHOICES.items():
            if self._values[key] not in choices:
                self._fail(key, f"must be one of {', '.join(choices)}")

    def __repr__(self) -> str:
        return f"<RunConfig source={self.source}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self._values == other._values and self.root == other.root

    def __hash__(self) -> int:
        return hash((tuple(self._values.items()), self.root))

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> RunConfig:
        """Reads a sectioned ``key = value`` file.

        Without ``path`` the ``HYDRO_CBA_CONFIG`` environment variable is used, and without
        that the defaults with the bundled data files.
        """
        if path is None:
            path = os.environ.get(CONFIG_ENV_VAR) or None
        if path is None:
            log.info("No configuration given, using the defaults and the bundled data")
            return cls()

        path = Path(path).resolve()
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keys are case sensitive
        try:
            with path.open(encoding="utf-8") as file:
                parser.read_file(file)
        except FileNotFoundError:
            raise ConfigError(f"Configuration file {path} does not exist.") from None
        except configparser.Error as error:
            raise ConfigError(str(error).splitlines()[0], source=str(path)) from None

        values: Dict[str, str] = {}
        for section in parser.sections():
            if section not in DEFAULTS:
                raise UnknownParameter(section, source=str(path))
            for key, value in parser.items(section):
                values[f"{section}.{key}"] = value
        log.info("Loaded configuration from %s", path)
        return cls(values, root=path.parent, source=path)

    def with_overrides(self, overrides: Mapping[str, Any]) -> RunConfig:
        """Returns a new configuration with ``section.key`` values replaced.

        Raises
        ------
        UnknownParameter
            A key is not a known configuration key.
        """
        for key in overrides:
            if key not in self._values:
                raise UnknownParameter(key)
        values = {key: self._values[key] for key in self._explicit}
        values.update({key: _format(value) for key, value in overrides.items()})
        return RunConfig(values, root=self.root, source=self.source)

    def snapshot(self) -> Dict[str, str]:
        """The flat, key-sorted map of every raw value."""
        return dict(self._values)

    @property
    def values(self) -> Mapping[str, str]:
        return MappingProxyType(self._values)

    def _fail(self, key: str, reason: str) -> None:
        raise ConfigError(f"{key} = {self._values[key]!r} {reason}.", source=None if self.source is None else str(self.source))

    def raw(self, key: str) -> str:
        try:
            return self._values[key]
        except KeyError:
            raise UnknownParameter(key) from None

    def optional(self, key: str) -> Optional[str]:
        value = self.raw(key)
        return value or None

    def number(self, key: str) -> float:
        try:
            return _amount(self.raw(key))
        except CbaError:
            self._fail(key, "is not a number")

    def optional_number(self, key: str) -> Optional[float]:
        return None if self.optional(key) is None else self.number(key)

    def integer(self, key: str) -> int:
        value = self.number(key)
        if not value.is_integer():
            self._fail(key, "is not a whole number")
        return int(value)

    def year(self, key: str) -> int:
        try:
            return _year(self.raw(key))
        except CbaError:
            self._fail(key, "is not a year")

    def year_range(self, key: str) -> Tuple[int, int]:
        try:
            return _year_range(self.raw(key))
        except CbaError:
            self._fail(key, "is not a year range such as 1962:2020")

    def flag(self, key: str) -> bool:
        value = self.raw(key).lower()
        if value not in _BOOLEANS:
            self._fail(key, "is not a boolean")
        return _BOOLEANS[value]

    def rate(self, key: str) -> float:
        value = self.number(key)
        if not 0.0 <= value <= 1.0:
            self._fail(key, "must lie in [0, 1]")
        return value

    def path(self, key: str) -> Path:
        """A data path. Paths set in the configuration resolve against its directory, defaults against the bundled data."""
        path = Path(self.raw(key)).expanduser()
        if path.is_absolute():
            return path
        return (self.root if key in self._explicit else DATA_DIR) / path

    def output_dir(self, override: Optional[Union[str, Path]] = None) -> Path:
        """The output directory: ``override`` if given, else ``paths.output`` relative to the working directory."""
        return Path(override if override is not None else self.raw("paths.output")).expanduser()


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
