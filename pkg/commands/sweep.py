from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from core.cli import EXIT_OK, Command, HydroCba, parse_assignments
from core.config import RunConfig
from core.io import read_csv, write_csv
from core.pipeline import sweep
from utils.exceptions import ConfigError

log = logging.getLogger(__name__)


class Sweep(Command):
    name = "sweep"
    help = "Recompute the net benefit over a grid of configuration values."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        group = parser.add_mutually_exclusive_group()
        group.add_argument(
            "--set",
            dest="assignments",
            action="append",
            metavar="KEY=V1,V2",
            help="Sweep a key over values; repeated keys form the cartesian product.",
        )
        group.add_argument("--grid", type=Path, default=None, help="CSV file of explicit grid points, one column per key.")
        parser.add_argument("--workers", type=int, default=None, help="Worker threads.")

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        if args.grid is not None:
            frame = read_csv(args.grid, (), dtype=str)
            if frame.columns.empty:
                raise ConfigError("The grid file has no columns.", source=str(args.grid))
            grid: Any = [{key: str(value).strip() for key, value in row.items()} for row in frame.to_dict("records")]
        else:
            grid = parse_assignments(args.assignments)

        result = sweep(config, grid, max_workers=args.workers)
        frame = result.to_frame()
        write_csv(frame, out_dir / "sweep.csv", list(frame.columns))

        for row in result:
            settings: Dict[str, Any] = dict(row.overrides)
            log.info("Point %s %s: net benefit %.2f M BDT", row.index, settings, row.net_benefit.in_millions)
        if not len(result):
            log.warning("The sweep grid is empty; nothing was evaluated")
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(Sweep(app))
