import logging
import os
import sys

from colorama import Back, Fore, Style


class ColoredFormatter(logging.Formatter):
    COLORS = {
        "DEBUG": Fore.CYAN,
        "INFO": Fore.GREEN,
        "WARNING": Fore.YELLOW,
        "ERROR": Fore.RED,
        "CRITICAL": Fore.RED + Back.WHITE,
    }

    def __init__(self, fmt: str, datefmt: str | None = None, use_color: bool = True):
        super().__init__(fmt, datefmt=datefmt)
        self.use_color = use_color

    def format(self, record):
        levelname = record.levelname
        color = self.COLORS.get(levelname, Fore.WHITE)
        if self.use_color and levelname in self.COLORS:
            record.levelname = color + Style.BRIGHT + levelname + Style.RESET_ALL

        try:
            message = super().format(record)
        finally:
            record.levelname = levelname

        placeholders = {
            "$RESET": Style.RESET_ALL,
            "$BOLD": Style.BRIGHT,
            "$COLOR": color,
            "$BLUE": Fore.BLUE + Style.BRIGHT,
        }
        for placeholder, code in placeholders.items():
            message = message.replace(placeholder, code if self.use_color else "")

        return message


def _resolve_level() -> int:
    override = os.getenv("PARTITA_LOG_LEVEL")
    if override:
        level = logging.getLevelName(override.upper())
        if isinstance(level, int):
            return level
    mode: str = os.getenv("ENV", "prod").lower()
    return logging.DEBUG if mode != "prod" else logging.INFO


def get_logger(name: str):
    logger = logging.getLogger(name.split(".")[-1])
    logger.setLevel(_resolve_level())
    logger.handlers.clear()
    logger.propagate = False

    format_string = (
        "$BLUE%(asctime)s.%(msecs)03d$RESET | "
        "$COLOR$BOLD%(levelname)-8s$RESET | "
        "$BLUE%(name)s$RESET:"
        "$BLUE%(funcName)s$RESET:"
        "$BLUE%(lineno)d$RESET - "
        "$COLOR$BOLD%(message)s$RESET"
    )

    # stdout carries reports only
    colored_formatter = ColoredFormatter(format_string, datefmt="%Y-%m-%d %H:%M:%S", use_color=sys.stderr.isatty())

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(colored_formatter)
    logger.addHandler(console_handler)

    logger.debug(f"Logging mode is {logging.getLevelName(logger.getEffectiveLevel())}")
    return logger


def add_file_handler(logger: logging.Logger, path: str) -> logging.Handler:
    file_handler = logging.FileHandler(path)
    file_handler.setLevel(logging.INFO)
    file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    logger.addHandler(file_handler)
    return file_handler
