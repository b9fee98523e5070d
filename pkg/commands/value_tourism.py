from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.io import write_components, write_csv, write_series_csv
from core.pipeline import load_inputs, prepare_cpi, value_tourism

log = logging.getLogger(__name__)


class ValueTourism(Command):
    name = "value-tourism"
    help = "Estimate the visit demand curve and value tourism by its consumer surplus."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--fit", dest="fit_source", choices=("fixture", "survey"), default=None, help="Override tourism.fit_source.")
        parser.add_argument("--cs", dest="cs_source", choices=("reference", "estimated"), default=None, help="Override tourism.cs_source.")
        parser.add_argument("--svg", action="store_true", help="Also draw the demand curve as SVG.")

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        overrides = {}
        if args.fit_source is not None:
            overrides["tourism.fit_source"] = args.fit_source
        if args.cs_source is not None:
            overrides["tourism.cs_source"] = args.cs_source
        config = config.with_overrides(overrides)

        inputs = load_inputs(config)
        outcome = value_tourism(config, inputs, prepare_cpi(config, inputs.cpi))
        log.info(
            "Tourism: choke fee %.0f BDT, estimated annual surplus %.2f M, total %s",
            outcome.curve.choke_fee,
            outcome.estimated_annual.in_millions,
            outcome.component.npv,
        )

        write_components([outcome.component], out_dir / "tourism.csv")
        write_csv(outcome.curve.to_frame(), out_dir / "demand_curve.csv", ("fee", "predicted_visits"))
        (out_dir / "regression_fit.json").write_bytes(outcome.fit.to_json())
        if outcome.component.series is not None:
            write_series_csv(outcome.component.series, out_dir / "tourism_series.csv")
        if args.svg or config.flag("report.svg"):
            from core.plotting import render_demand_curve

            render_demand_curve(outcome.curve, out_dir / "demand_curve.svg")
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(ValueTourism(app))
