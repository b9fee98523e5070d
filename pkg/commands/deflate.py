from __future__ import annotations

import argparse
import logging
from pathlib import Path

import orjson

from core.cli import EXIT_OK, Command, HydroCba, argument_type
from core.config import RunConfig
from core.io import read_cpi_csv
from core.series import backcast_cpi, deflate, rebase
from models.cpi import GeometricTrend
from models.money import MoneyAmount
from utils.constants import BDT, CURRENCIES
from utils.transformers import AmountTransformer, YearTransformer

log = logging.getLogger(__name__)


class Deflate(Command):
    name = "deflate"
    help = "Move an amount from one price year to another by the CPI ratio or an explicit ratio."

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("amount", type=argument_type(AmountTransformer()), help="Amount, e.g. 17678 or 2403m.")
        parser.add_argument("--from", dest="from_year", type=argument_type(YearTransformer()), required=True, help="Price year of the amount.")
        parser.add_argument("--to", dest="to_year", type=argument_type(YearTransformer()), required=True, help="Target price year.")
        parser.add_argument("--currency", default=BDT, choices=CURRENCIES, help="Currency of the amount.")
        parser.add_argument("--ratio", type=argument_type(AmountTransformer()), default=None, help="Use this ratio instead of the CPI.")

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        amount = MoneyAmount(args.amount, args.currency, args.from_year)
        if args.ratio is not None:
            result = rebase(amount, args.to_year, args.ratio)
            method = f"ratio({args.ratio:g})"
        else:
            cpi = read_cpi_csv(config.path("paths.cpi"), config.year("series.cpi_base_year"))
            earliest = min(args.from_year, args.to_year)
            if earliest < cpi.first_year:
                cpi = backcast_cpi(cpi, earliest, GeometricTrend(config.integer("series.backcast_window")))
            result = deflate(amount, args.to_year, cpi)
            method = "cpi"

        log.info("%s -> %s (%s)", amount, result, method)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "amount": amount.value,
            "currency": amount.currency,
            "from_year": amount.base_year,
            "to_year": result.base_year,
            "method": method,
            "value": result.value,
        }
        path = out_dir / "deflate.json"
        path.write_bytes(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE))
        return EXIT_OK


def setup(app: HydroCba) -> None:
    app.add_command(Deflate(app))
