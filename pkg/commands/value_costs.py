from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.io import write_components
from core.pipeline import load_inputs, prepare_cpi, value_costs
from models.components import Unavailable

log = logging.getLogger(__name__)


class ValueCosts(Command):
    name = "value-costs"
    help = "Value displacement, lives lost, construction and environmental losses."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--deflator", choices=("ratio", "cpi"), default=None, help="Override costs.deflator.")

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        if args.deflator is not None:
            config = config.with_overrides({"costs.deflator": args.deflator})

        inputs = load_inputs(config)
        components = value_costs(config, inputs, prepare_cpi(config, inputs.cpi))
        for component in components:
            if isinstance(component, Unavailable):
                log.info("%s: unavailable (%s)", component.label, component.reason)
            else:
                log.info("%s (%s): %s", component.label, component.method, component.npv)

        write_components(components, out_dir / "costs.csv")
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(ValueCosts(app))
