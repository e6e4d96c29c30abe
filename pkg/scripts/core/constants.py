import os

from dotenv import load_dotenv


load_dotenv()


def _int_setting(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, default))
    except (TypeError, ValueError):
        return default


DEFAULT_SEED = _int_setting("PARTITA_DEFAULT_SEED", 0)

# Largest span head (in vertices) the isomorphism search will attempt
ISO_SEARCH_BOUND = _int_setting("PARTITA_ISO_BOUND", 16)

AXIOM_SAMPLES = _int_setting("PARTITA_AXIOM_SAMPLES", 10_000)
AXIOM_EXHAUSTIVE_RADIUS = _int_setting("PARTITA_AXIOM_EXHAUSTIVE", 3)
DEFAULT_AXIOM_BOUND = 100
DEFAULT_MAX_FACTORS = 3

MAX_HEAD_VERTICES = _int_setting("PARTITA_MAX_HEAD_VERTICES", 4)
MAX_NON_NULL_EDGES = _int_setting("PARTITA_MAX_EDGES", 6)
DEFAULT_MAX_LEN = _int_setting("PARTITA_MAX_LEN", 4)


# Printed name of the single vertex (and null loop) of the terminal graph
TERMINAL_LABEL = "0"
NULL_PREFIX = "~"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

OUTPUT_FORMATS = ["text", "json"]
