from typing import Any
from typing import Dict

import click

from dcshuffle.cli.utils import cli_config
from dcshuffle.cli.utils import emit
from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import load_instance
from dcshuffle.cli.utils import timed
from dcshuffle.errors import BudgetExceeded
from dcshuffle.graph.icgraph import build_digraph
from dcshuffle.graph.icgraph import mais
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import describe


def _text(result: Dict[str, Any]) -> str:
    s = result["summary"]
    lines = [
        f"K={s['K']} N={s['N']} Q={s['Q']} F={s['F']}",
        f"r={s['r']} M={s['M']} t={s['t']}",
    ]
    if result.get("note"):
        lines.append(result["note"])
    if result["mais"] is not None:
        lines.append(f"MAIS={result['mais']} witness: {' '.join(result['mais_witness'])}")
    else:
        lines.append(f"MAIS undecided: {result['mais_reason']}")
    lines.append(result["digraph"])
    return "\n".join(line for line in lines if line)


@click.command()
@click.pass_context
@click.argument("instance")
@guarded
def analyze(ctx: click.Context, instance: str) -> None:
    """Summarize an instance and its side-information digraph.

    INSTANCE is a JSON file or a catalog tag (e.g. ex1, family-6-4).
    """
    cfg = cli_config(ctx)
    inst = load_instance(instance)
    problem = derive_shuffle_problem(inst)
    graph = build_digraph(problem)

    result: Dict[str, Any] = {
        "summary": describe(inst),
        "stats": graph.stats(),
        "digraph": graph.to_adjacency_text(),
        "note": "" if problem.messages else "nothing to shuffle",
        "mais": None,
        "mais_witness": [],
        "mais_reason": "",
    }
    try:
        with timed(ctx, "mais"):
            size, witness = mais(graph, budget=cfg.enumeration_budget)
        result["mais"] = size
        result["mais_witness"] = [str(m) for m in witness]
    except BudgetExceeded as e:
        result["mais_reason"] = str(e)

    emit(ctx, "analyze", result, _text)
