from typing import Any
from typing import Dict

import click

from dcshuffle.bounds.inner import inner_region
from dcshuffle.bounds.outer import acyclic_outer_region
from dcshuffle.cli.utils import cli_config
from dcshuffle.cli.utils import emit
from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import load_instance
from dcshuffle.cli.utils import timed
from dcshuffle.errors import BudgetExceeded
from dcshuffle.model.instance import derive_shuffle_problem


@click.command()
@click.pass_context
@click.argument("instance")
@guarded
def outer(ctx: click.Context, instance: str) -> None:
    """Acyclic-subset outer bound of an instance."""
    cfg = cli_config(ctx)
    problem = derive_shuffle_problem(load_instance(instance))
    result: Dict[str, Any] = {"status": "ok", "reason": "", "region": None, "text": ""}
    try:
        with timed(ctx, "outer"):
            region = acyclic_outer_region(problem, budget=cfg.enumeration_budget)
        result["region"] = region.to_json()
        result["text"] = region.to_text()
    except BudgetExceeded as e:
        result["status"] = "undecided"
        result["reason"] = str(e)
    emit(ctx, "outer", result, lambda r: r["text"] or f"UNDECIDED: {r['reason']}")


def _inner_text(result: Dict[str, Any]) -> str:
    if result["status"] != "ok":
        return f"UNDECIDED: {result['reason']}"
    blocks = [f"choice {i}:\n{text}" for i, text in enumerate(result["text"])]
    return "\n".join(blocks)


@click.command()
@click.pass_context
@click.argument("instance")
@click.option("--pair-only", is_flag=True, help="Only the window composites of the family scheme")
@guarded
def inner(ctx: click.Context, instance: str, pair_only: bool) -> None:
    """Composite-coding inner bound (one polytope per decoding choice)."""
    cfg = cli_config(ctx)
    if pair_only:
        cfg = cfg.overridden(pair_only=True)
    problem = derive_shuffle_problem(load_instance(instance))
    result: Dict[str, Any] = {"status": "ok", "reason": "", "regions": [], "choices": [], "text": []}
    try:
        with timed(ctx, "inner"):
            region = inner_region(problem, cfg)
        result["regions"] = [p.to_json() for p in region.polytopes]
        result["choices"] = [c.to_json() for c in region.choices]
        result["text"] = [p.to_text() for p in region.polytopes]
    except BudgetExceeded as e:
        result["status"] = "undecided"
        result["reason"] = str(e)
    emit(ctx, "inner", result, _inner_text)
