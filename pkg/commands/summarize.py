from __future__ import annotations

import argparse
import logging
from pathlib import Path

from core.cli import EXIT_OK, Command, HydroCba
from core.config import RunConfig
from core.io import read_survey_csv, write_csv
from core.survey import SUMMARY_COLUMNS, summarize_frame
from models.regression import REGRESSORS

log = logging.getLogger(__name__)


class Summarize(Command):
    name = "summarize"
    help = "Descriptive statistics of the tourist survey."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--column",
            dest="columns",
            action="append",
            default=None,
            help="Survey column to summarise (repeatable; default: the regressors and visits).",
        )

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        survey = read_survey_csv(config.path("paths.survey"))
        frame = summarize_frame(survey, args.columns or [*REGRESSORS, "visits"])
        for row in frame.to_dict("records"):
            log.info(
                "%-16s n=%-4s mean=%.3f sd=%.3f min=%.3f max=%.3f", row["variable"], row["n"], row["mean"], row["sd"], row["min"], row["max"]
            )
        write_csv(frame, out_dir / "survey_summary.csv", SUMMARY_COLUMNS)
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(Summarize(app))
