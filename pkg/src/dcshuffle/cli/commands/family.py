from typing import Any
from typing import Dict

import click

from dcshuffle.bounds.capacity import verify_family
from dcshuffle.cli.utils import cli_config
from dcshuffle.cli.utils import emit
from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import InternalFailure
from dcshuffle.cli.utils import timed
from dcshuffle.dtypes.rational import decode_rational
from dcshuffle.dtypes.rational import encode_rational


def _text(result: Dict[str, Any]) -> str:
    lines = [f"{'K':>3} {'r':>3} {'g':>3} {'mais':>5} {'closed':>7} {'sym':>6}  verdict"]
    for row in result["rows"]:
        lines.append(
            f"{row['K']:>3} {row['r']:>3} {row['g']:>3} {row['mais']:>5} "
            f"{str(row['outer_matches_closed_form']):>7} {row['symmetric_rate']:>6}  {row['verdict']}"
        )
    return "\n".join(lines)


@click.command()
@click.pass_context
@click.option("--Kmax", "max_nodes", type=int, required=True, help="Largest node count")
@click.option("--C", "capacity", type=str, default="1", show_default=True, help="Uniform link capacity 'p/q'")
@guarded
def family(ctx: click.Context, max_nodes: int, capacity: str) -> None:
    """Verify every symmetric-family instance with K <= Kmax."""
    cfg = cli_config(ctx)
    C = decode_rational(capacity)
    if C < 0:
        raise click.BadParameter(f"capacity must be nonnegative, got {capacity}")
    with timed(ctx, "family"):
        rows = verify_family(max_nodes, C, cfg)

    result = {
        "C": encode_rational(C),
        "rows": [row.to_json() for row in rows],
        "all_ok": all(row.ok for row in rows),
    }
    emit(ctx, "family", result, _text)
    bugs = [f"({row.node_count},{row.load})" for row in rows if row.verdict.bug]
    if bugs:
        raise InternalFailure(f"inner region exceeds the outer bound for {', '.join(bugs)}")
