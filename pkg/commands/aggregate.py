from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.pipeline import run_pipeline
from models.components import Status

log = logging.getLogger(__name__)


class Aggregate(Command):
    name = "aggregate"
    help = "Run every valuation and write the net benefit report."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--svg", action="store_true", default=None, help="Also draw the demand curve as SVG.")
        parser.add_argument(
            "--include",
            action="append",
            choices=("construction", "environmental"),
            default=[],
            help="Count a component that is reported but left out of the net by default.",
        )

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        config = config.with_overrides({f"aggregate.include_{key}": True for key in args.include})
        result = run_pipeline(config, out_dir, svg=args.svg)
        report = result.report

        for row in report.csv_rows():
            log.info("%-14s %-40s %14s", row["component"], row["label"], row["value_mbdt"])
        failed = [check.label for check in report.references if check.status is Status.FAIL]
        if failed:
            log.warning("Reference checks outside the tolerance band: %s", ", ".join(failed))
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(Aggregate(app))
