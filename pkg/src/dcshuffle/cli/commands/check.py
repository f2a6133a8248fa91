from typing import Any
from typing import Dict

import click

from dcshuffle.bounds.capacity import check_capacity
from dcshuffle.cli.utils import cli_config
from dcshuffle.cli.utils import emit
from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import InternalFailure
from dcshuffle.cli.utils import load_instance
from dcshuffle.cli.utils import timed
from dcshuffle.model.instance import derive_shuffle_problem


def _text(result: Dict[str, Any]) -> str:
    lines = [f"verdict: {result['verdict']}"]
    if result["side"]:
        lines.append(f"side: {result['side']}")
    if result["witness"]:
        lines.append("witness: " + " ".join(f"{k}={v}" for k, v in sorted(result["witness"].items())))
    if result["reason"]:
        lines.append(f"reason: {result['reason']}")
    if result["outer_text"]:
        lines.append(result["outer_text"])
    return "\n".join(lines)


@click.command()
@click.pass_context
@click.argument("instance")
@click.option("--pair-only", is_flag=True, help="Only the window composites of the family scheme")
@guarded
def check(ctx: click.Context, instance: str, pair_only: bool) -> None:
    """Decide whether the inner and outer bounds coincide."""
    cfg = cli_config(ctx)
    if pair_only:
        cfg = cfg.overridden(pair_only=True)
    problem = derive_shuffle_problem(load_instance(instance))
    with timed(ctx, "check"):
        verdict = check_capacity(problem, cfg)
    emit(ctx, "check", verdict.to_json(), _text)
    if verdict.bug:
        raise InternalFailure(f"inner region exceeds the outer bound at {verdict.to_json()['witness']}")
