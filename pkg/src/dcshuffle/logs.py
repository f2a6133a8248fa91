import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional
from typing import Union

from dcshuffle.utils.home import default_homedir

log_core = logging.getLogger("dcshuffle")

LOG_FORMAT = "%(levelname)-7s | %(name)s | %(message)s"


def init_logging(level: Union[int, str], log_dir: Optional[Path] = None) -> logging.Logger:
    """Initialize logging to console (stderr) and the dcshuffle logfile.

    Calling it again replaces the handlers installed by the previous call.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {level}")

    if log_dir is None:
        log_dir = default_homedir() / "logs"
    log_dir.mkdir(parents=True, exist_ok=True)
    formatter = logging.Formatter(LOG_FORMAT)

    for handler in list(log_core.handlers):
        if getattr(handler, "_dcshuffle", False):
            log_core.removeHandler(handler)
            handler.close()

    log_core.setLevel(logging.DEBUG)

    # File Handler
    one_mb = 1024 * 1024
    fh = RotatingFileHandler(log_dir / "dcshuffle.log", maxBytes=one_mb * 5, backupCount=5)
    fh.setLevel(logging.DEBUG)
    fh.setFormatter(formatter)

    # Console handler; stdout is reserved for reports
    stream = logging.StreamHandler(sys.stderr)
    stream.setLevel(level)
    stream.setFormatter(formatter)

    for handler in (fh, stream):
        setattr(handler, "_dcshuffle", True)
        log_core.addHandler(handler)

    return log_core
