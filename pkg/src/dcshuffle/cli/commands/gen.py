import json
from typing import Optional

import click

from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import write_output
from dcshuffle.dtypes.rational import decode_rational
from dcshuffle.model.instance import ensure_valid
from dcshuffle.model.instance import gen_family


@click.command()
@click.pass_context
@click.option("--K", "node_count", type=int, required=True, help="Number of nodes")
@click.option("--r", "load", type=int, required=True, help="Computation load; K-r must divide K")
@click.option("--eta1", type=int, default=2, show_default=True, help="Files per batch")
@click.option("--Q", "function_count", type=int, default=None, help="Output functions (default K)")
@click.option(
    "--C",
    "capacities",
    type=str,
    default="1",
    show_default=True,
    help="Link capacity 'p/q', or a comma-separated list, one per node",
)
@guarded
def gen(
    ctx: click.Context,
    node_count: int,
    load: int,
    eta1: int,
    function_count: Optional[int],
    capacities: str,
) -> None:
    """Write a symmetric-family instance as JSON."""
    parts = [decode_rational(c.strip()) for c in capacities.split(",")]
    caps = parts[0] if len(parts) == 1 else parts
    instance = gen_family(node_count, load, eta1=eta1, function_count=function_count, capacities=caps)
    ensure_valid(instance)
    write_output(ctx, json.dumps(instance.to_json(), sort_keys=True, indent=2) + "\n")
