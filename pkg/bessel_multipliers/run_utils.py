"""Output and logging helpers used by the CLI and the suite runner."""

import logging
import sys
from pathlib import Path


logger = logging.getLogger("bessel_multipliers")

LOG_FORMAT = "%(levelname)s: %(message)s"


def configure_logging(verbose=False, log_path=None):
    """Set up the package logger.

    Messages go to stderr at WARNING (INFO with verbose), and to log_path at INFO
    if a path is given.
    """
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.propagate = False

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(logging.INFO if verbose else logging.WARNING)
    console.setFormatter(logging.Formatter(LOG_FORMAT))
    # Echoed messages are already on the terminal.
    console.addFilter(lambda record: not getattr(record, "echo", False))
    logger.addHandler(console)

    if log_path:
        log_path = Path(log_path)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, mode="w")
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)


def write_output(msg, quiet=False):
    """Log msg at INFO, and echo it to stderr unless quiet.

    stdout is kept for reports, so a report can be piped or redirected as is.
    """
    for line in str(msg).splitlines():
        logger.info(line, extra={"echo": not quiet})
    if not quiet:
        print(msg, file=sys.stderr)


def write_report(text, out_path=None):
    """Write a finished report to out_path, or to stdout."""
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text if text.endswith("\n") else text + "\n")
    logger.info(f"Report written to {out_path}")
