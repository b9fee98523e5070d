from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.io import read_cpi_csv, write_components, write_series_csv
from core.pipeline import prepare_cpi, value_electricity

log = logging.getLogger(__name__)


class ValueElectricity(Command):
    name = "value-electricity"
    help = "Value the net electricity revenue over the generation years."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--mode", choices=("discount", "cpi_scale"), default=None, help="Override electricity.mode.")

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        if args.mode is not None:
            config = config.with_overrides({"electricity.mode": args.mode})
        cpi = prepare_cpi(config, read_cpi_csv(config.path("paths.cpi"), config.year("series.cpi_base_year")))
        component, by_mode = value_electricity(config, cpi)

        for mode, total in sorted(by_mode.items()):
            log.info("Electricity under %s: %.2f M BDT", mode, total)
        log.info("Electricity (%s): %s", component.method, component.npv)

        write_components([component], out_dir / "electricity.csv")
        if component.series is not None:
            write_series_csv(component.series, out_dir / "electricity_series.csv")
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(ValueElectricity(app))
