import json
import logging
import time
from contextlib import contextmanager
from functools import wraps
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterator
from typing import Optional

import click

import dcshuffle
from dcshuffle.apps.shuffle_config import DcShuffleConfig
from dcshuffle.apps.shuffle_config import ShuffleConfig
from dcshuffle.data.instance_catalog import instance_catalog
from dcshuffle.errors import DcShuffleError
from dcshuffle.errors import InvariantViolation
from dcshuffle.logs import init_logging
from dcshuffle.model.instance import DcInstance
from dcshuffle.utils.home import dcshuffle_homedir

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InternalFailure(click.ClickException):
    """Completed run whose result reveals a defect (exit status 3)"""

    exit_code = EXIT_INTERNAL


def guarded(f):  # type: ignore
    """Map toolkit errors onto the CLI exit-status contract.

    Input errors exit 2, invariant violations exit 3.
    """

    @wraps(f)
    def wrapper(*args, **kwargs):  # type: ignore
        try:
            return f(*args, **kwargs)
        except InvariantViolation as e:
            raise InternalFailure(f"internal invariant violated: {e}") from e
        except (DcShuffleError, ValueError, OSError) as e:
            raise click.UsageError(str(e)) from e

    return wrapper


def cli_config(ctx: click.Context) -> ShuffleConfig:
    """Return the run configuration: config file plus CLI overrides"""
    obj = ctx.ensure_object(dict)
    cached = obj.get("CONFIG")
    if cached is not None:
        assert isinstance(cached, ShuffleConfig)
        return cached

    config_dir = obj.get("CONFIG_DIR")
    main = DcShuffleConfig(config_dir=config_dir).main
    cfg = main.overridden(
        enumeration_budget=obj.get("BUDGET"),
        strategy=obj.get("STRATEGY"),
        threads=obj.get("THREADS"),
    )

    log_dir = dcshuffle_homedir(config_dir) / "logs" if config_dir else None
    init_logging(cfg.loglevel, log_dir)
    obj["CONFIG"] = cfg
    return cfg


def load_instance(source: str) -> DcInstance:
    """Instance from a JSON file path or a catalog tag"""
    return instance_catalog.resolve(source)


@contextmanager
def timed(ctx: click.Context, label: str) -> Iterator[None]:
    """Record wall time of a block when --timings is on"""
    start = time.perf_counter()
    yield
    if ctx.obj.get("TIMINGS"):
        ms = int((time.perf_counter() - start) * 1000)
        ctx.obj.setdefault("TIMING_LOG", {})[label] = ms


def emit(
    ctx: click.Context,
    command: str,
    result: Dict[str, Any],
    text: Optional[Callable[[Dict[str, Any]], str]] = None,
) -> None:
    """Write a report envelope as JSON, or the text rendering of its result."""
    obj = ctx.obj
    envelope: Dict[str, Any] = {
        "command": command,
        "config": cli_config(ctx).as_dict(),
        "version": dcshuffle.__version__,
        "result": result,
    }
    if obj.get("TIMINGS"):
        envelope["timings_ms"] = dict(obj.get("TIMING_LOG", {}))

    if obj.get("FORMAT") == "text" and text is not None:
        body = text(result) + "\n"
    else:
        body = json.dumps(envelope, sort_keys=True, indent=2) + "\n"
    write_output(ctx, body)


def write_output(ctx: click.Context, body: str) -> None:
    out = ctx.obj.get("OUT")
    if out:
        Path(out).write_text(body)
        logger.info(f"Report written to {out}")
    else:
        click.echo(body, nl=False)
