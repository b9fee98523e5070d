import logging
import pathlib
from logging.handlers import RotatingFileHandler
from typing import Any, Dict, List, Optional, Union

from colorama import Fore, Style, just_fix_windows_console


class ColourFormatter(logging.Formatter):
    LEVEL_COLOURS: Dict[int, str] = {
        logging.DEBUG: Style.DIM + Fore.WHITE,
        logging.INFO: Style.BRIGHT + Fore.BLUE,
        logging.WARNING: Style.BRIGHT + Fore.YELLOW,
        logging.ERROR: Fore.RED,
        logging.CRITICAL: Style.BRIGHT + Fore.RED,
    }

    def __init__(self) -> None:
        super().__init__()
        self.formats = {
            level: logging.Formatter(
                f"{Style.DIM}{{asctime}}{Style.RESET_ALL} {colour}{{levelname:<7}}{Style.RESET_ALL} "
                f"{Fore.MAGENTA}{{name}}{Style.RESET_ALL} {{message}}",
                "%Y-%m-%d %H:%M:%S",
                style="{",
            )
            for level, colour in self.LEVEL_COLOURS.items()
        }

    def format(self, record: logging.LogRecord) -> str:
        formatter = self.formats.get(record.levelno, self.formats[logging.DEBUG])
        if record.exc_info:
            text = formatter.formatException(record.exc_info)
            record.exc_text = f"{Fore.RED}{text}{Style.RESET_ALL}"

        output = formatter.format(record)
        record.exc_text = None
        return output


class RemoveNoise(logging.Filter):
    def __init__(self) -> None:
        super().__init__(name="matplotlib.font_manager")

    def filter(self, record: logging.LogRecord) -> bool:
        if record.levelno <= logging.INFO and "findfont" in str(record.msg):
            return False
        return True


class LogHandler:
    """Configures the root logger for one run: a rotating file under ``<directory>/logs`` and an optional console stream."""

    def __init__(
        self,
        directory: Union[str, pathlib.Path] = ".",
        *,
        stream: bool = True,
        level: int = logging.INFO,
        filename: str = "hydro_cba.log",
    ) -> None:
        self.log: logging.Logger = logging.getLogger()
        self.max_bytes: int = 32 * 1024 * 1024
        self.logging_path = pathlib.Path(directory) / "logs"
        self.logging_path.mkdir(parents=True, exist_ok=True)
        self.stream = stream
        self.level = level
        self.filename = filename
        self._previous_level: Optional[int] = None
        self._handlers: List[logging.Handler] = []

    def __enter__(self: "LogHandler") -> "LogHandler":
        logging.getLogger("matplotlib").setLevel(logging.WARNING)
        logging.getLogger("matplotlib.font_manager").addFilter(RemoveNoise())

        self._previous_level = self.log.level
        self.log.setLevel(self.level)
        handler = RotatingFileHandler(
            filename=self.logging_path / self.filename,
            encoding="utf-8",
            mode="w",
            maxBytes=self.max_bytes,
            backupCount=5,
        )
        dt_fmt = "%Y-%m-%d %H:%M:%S"
        fmt = logging.Formatter("[{asctime}] [{levelname:<7}] {name}: {message}", dt_fmt, style="{")
        handler.setFormatter(fmt)
        self.log.addHandler(handler)
        self._handlers.append(handler)

        if self.stream:
            just_fix_windows_console()
            stream_handler = logging.StreamHandler()
            stream_handler.setFormatter(ColourFormatter())
            self.log.addHandler(stream_handler)
            self._handlers.append(stream_handler)

        return self

    @property
    def path(self) -> pathlib.Path:
        return self.logging_path / self.filename

    def __exit__(self, *args: Any) -> None:
        for handler in self._handlers:
            handler.close()
            self.log.removeHandler(handler)
        self._handlers.clear()
        if self._previous_level is not None:
            self.log.setLevel(self._previous_level)
