from __future__ import annotations

import argparse
import importlib
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import dotenv
import sentry_sdk
from sentry_sdk.integrations.logging import LoggingIntegration

from core.config import RunConfig
from core.log_handler import LogHandler
from utils.constants import SENTRY_ENV_VAR
from utils.exceptions import CbaError, ConfigError

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "EXIT_OK",
    "EXIT_INPUT_ERROR",
    "EXIT_INTERNAL_ERROR",
    "Command",
    "HydroCba",
    "argument_type",
    "parse_assignments",
    "EXTENSIONS",
    "run",
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2


class Command:
    """A subcommand. Subclasses set ``name`` and ``help`` and implement :meth:`run`."""

    name: str = ""
    help: str = ""

    def __init__(self, app: HydroCba) -> None:
        self.app = app

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        pass

    def run(self, args: argparse.Namespace, config: RunConfig, out_dir: Path) -> int:
        raise NotImplementedError


class HydroCba:
    """The command line application: an argument parser with one subparser per loaded command."""

    __version_info__ = "1.0.0"

    def __init__(self, *, stream: bool = True) -> None:
        self.stream = stream
        self.commands: Dict[str, Command] = {}
        self.parser = argparse.ArgumentParser(
            prog="hydro-cba",
            description="Cost-benefit valuation of a hydropower dam.",
        )
        self.parser.add_argument("--version", action="version", version=f"%(prog)s {self.__version_info__}")
        self.subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

        dsn = os.environ.get(SENTRY_ENV_VAR)
        if dsn:
            sentry_sdk.init(
                dsn=dsn,
                integrations=[
                    LoggingIntegration(
                        level=logging.INFO,
                        event_level=logging.ERROR,
                    )
                ],
                traces_sample_rate=0.0,
            )

    def load_extension(self, name: str) -> None:
        module = importlib.import_module(name)
        setup = getattr(module, "setup", None)
        if setup is None:
            raise ImportError(f"Extension {name!r} has no setup function.")
        setup(self)

    def add_command(self, command: Command) -> None:
        if command.name in self.commands:
            raise ValueError(f"Command {command.name!r} is already registered.")
        parser = self.subparsers.add_parser(command.name, help=command.help, description=command.help)
        parser.add_argument("--config", type=Path, default=None, help="Run configuration file (default: $HYDRO_CBA_CONFIG, then built-in defaults).")
        parser.add_argument("--out", type=Path, default=None, help="Output directory (default: paths.output of the configuration).")
        parser.add_argument("--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"), help="Logging level.")
        command.add_arguments(parser)
        parser.set_defaults(command=command.name)
        self.commands[command.name] = command

    def on_error(self, error: BaseException) -> int:
        if isinstance(error, CbaError):
            log.error("%s: %s", type(error).__name__, error)
            return EXIT_INPUT_ERROR

        log.exception("Exception occurred while running the command:\n", exc_info=error)
        sentry_sdk.capture_exception(error)
        return EXIT_INTERNAL_ERROR

    def main(self, argv: Optional[Sequence[str]] = None) -> int:
        args = self.parser.parse_args(argv)
        command = self.commands[args.command]

        try:
            config = RunConfig.load(args.config)
            out_dir = config.output_dir(args.out)
        except CbaError as error:
            with LogHandler(args.out or ".", stream=self.stream):
                return self.on_error(error)

        with LogHandler(out_dir, stream=self.stream, level=getattr(logging, args.log_level)):
            log.info("Running %s with %r", command.name, config)
            try:
                return command.run(args, config, out_dir)
            except Exception as error:  # noqa: BLE001
                return self.on_error(error)


def parse_assignments(values: Optional[List[str]]) -> Dict[str, List[str]]:
    """Parses repeated ``key=v1,v2`` options into ``{key: [v1, v2]}`` in the order given."""
    grid: Dict[str, List[str]] = {}
    for value in values or []:
        key, sep, raw = value.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{value!r} is not of the form section.key=v1,v2.")
        grid[key.strip()] = [item.strip() for item in raw.split(",") if item.strip()]
    return grid


def argument_type(transformer: Callable[[str], Any]) -> Callable[[str], Any]:
    """Adapts a transformer to argparse so its errors become usage errors."""

    def convert(value: str) -> Any:
        try:
            return transformer(value)
        except CbaError as error:
            raise argparse.ArgumentTypeError(error.message) from None

    convert.__name__ = type(transformer).__name__.replace("Transformer", "").lower() or "value"
    return convert


EXTENSIONS: Tuple[str, ...] = (
    "deflate",
    "value_electricity",
    "value_fisheries",
    "value_tourism",
    "value_costs",
    "aggregate",
    "sweep",
    "summarize",
)


def run(argv: Optional[Sequence[str]] = None, *, stream: bool = True) -> int:
    """Entry point: reads ``.env``, loads every command and runs the one named in ``argv``."""
    dotenv.load_dotenv()
    app = HydroCba(stream=stream)
    for extension in EXTENSIONS:
        app.load_extension(f"commands.{extension}")
        log.debug("Loaded %s", extension)
    return app.main(argv)
