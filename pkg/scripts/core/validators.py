import os
from collections.abc import Callable

import typer

import core.constants as cst


class CommandValidators:
    @staticmethod
    def positive(value: int) -> bool:
        return value >= 1

    @staticmethod
    def non_negative(value: int) -> bool:
        return value >= 0

    @staticmethod
    def output_format(value: str) -> bool:
        return value in cst.OUTPUT_FORMATS

    @staticmethod
    def readable_file(value: str) -> bool:
        return os.path.isfile(value) and os.access(value, os.R_OK)


def option_validator(validator: Callable[[object], bool], message: str) -> Callable:
    """Turn a CommandValidators predicate into a typer callback that rejects bad flags before anything runs."""

    def callback(value):
        if value is not None and not validator(value):
            raise typer.BadParameter(message.format(value=value))
        return value

    return callback


validate_bound = option_validator(CommandValidators.positive, "must be at least 1, got {value}")
validate_count = option_validator(CommandValidators.non_negative, "must be non-negative, got {value}")
validate_format = option_validator(
    CommandValidators.output_format, "must be one of " + ", ".join(cst.OUTPUT_FORMATS) + ", got {value!r}"
)
validate_file = option_validator(CommandValidators.readable_file, "no readable file at {value}")
