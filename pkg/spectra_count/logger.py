import logging
import sys


FORMATTER = logging.Formatter("%(asctime)s [ %(levelname)s ] %(message)s")
LEVEL = logging.INFO

# stdout carries the JSON reports
handler_stream = logging.StreamHandler(sys.stderr)
handler_stream.setLevel(LEVEL)
handler_stream.setFormatter(FORMATTER)

logger = logging.getLogger("spectra_count")
logger.setLevel(LEVEL)
logger.addHandler(handler_stream)


def set_logger_level(level):
    """Set level of the package logger; accepts numbers and names like "debug"."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    handler_stream.setLevel(level)
    logger.setLevel(level)
