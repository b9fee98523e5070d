from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.io import write_components, write_series_csv
from core.pipeline import load_inputs, prepare_cpi, value_fisheries

log = logging.getLogger(__name__)


class ValueFisheries(Command):
    name = "value-fisheries"
    help = "Value the net fisheries revenue from the catch and revenue series."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--anchor", choices=("revenue", "average"), default=None, help="Override fisheries.price_anchor.")
        parser.add_argument(
            "--accumulation", choices=("compound", "discount"), default=None, help="Override fisheries.accumulation."
        )

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        overrides = {}
        if args.anchor is not None:
            overrides["fisheries.price_anchor"] = args.anchor
        if args.accumulation is not None:
            overrides["fisheries.accumulation"] = args.accumulation
        config = config.with_overrides(overrides)

        inputs = load_inputs(config)
        component = value_fisheries(config, inputs, prepare_cpi(config, inputs.cpi))
        log.info("Fisheries (%s): %s, %.1f%% imputed", component.method, component.npv, component.imputed_fraction * 100)

        write_components([component], out_dir / "fisheries.csv")
        if component.series is not None:
            write_series_csv(component.series, out_dir / "fisheries_series.csv")
        for series in component.imputed_inputs:
            write_series_csv(series, out_dir / f"{series.label}.csv")
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(ValueFisheries(app))
