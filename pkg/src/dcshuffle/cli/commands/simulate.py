import json
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Optional

import click

from dcshuffle.cli.utils import cli_config
from dcshuffle.cli.utils import emit
from dcshuffle.cli.utils import guarded
from dcshuffle.cli.utils import InternalFailure
from dcshuffle.cli.utils import timed
from dcshuffle.dtypes.rational import decode_rational
from dcshuffle.sim.shuffle_sim import build_scheme
from dcshuffle.sim.shuffle_sim import rate_report
from dcshuffle.sim.shuffle_sim import run_seeds
from dcshuffle.sim.shuffle_sim import simulation_summary


def _text(result: Dict[str, Any]) -> str:
    s = result["scheme"]
    lines = [
        f"K={s['K']} r={s['r']} g={s['g']} L={s['L']} t'={s['t_prime']}",
        f"decoded exactly: {result['exact']}/{result['runs']} (replay {result['replay_exact']}/{result['runs']})",
    ]
    rate = result["rate"]
    if rate is not None:
        lines.append(f"rate per message: {rate['rates'][0]} at C={rate['C']}, n={rate['blocklength']}")
        lines.append(f"on outer boundary: {rate['binds']}")
    return "\n".join(lines)


@click.command()
@click.pass_context
@click.option("--K", "node_count", type=int, required=True, help="Number of nodes")
@click.option("--r", "load", type=int, required=True, help="Computation load; K-r must divide K")
@click.option("--L", "segment_bits", type=int, default=8, show_default=True, help="IVs per segment")
@click.option("--t-prime", "t_prime", type=click.IntRange(min=1), default=None, help="Bits per IV [default: config]")
@click.option("--seeds", type=click.IntRange(min=1), default=1, show_default=True, help="Number of seeds")
@click.option("--C", "capacity", type=str, default="1", show_default=True, help="Uniform link capacity 'p/q'")
@click.option("--transcripts", type=click.Path(dir_okay=False), default=None, help="Write transcripts (JSON lines)")
@guarded
def simulate(
    ctx: click.Context,
    node_count: int,
    load: int,
    segment_bits: int,
    t_prime: Optional[int],
    seeds: int,
    capacity: str,
    transcripts: Optional[str],
) -> None:
    """Run the XOR shuffling scheme over consecutive seeds."""
    cfg = cli_config(ctx)
    base = ctx.obj.get("SEED") or 0
    if t_prime is None:
        t_prime = cfg.t_prime
    scheme = build_scheme(node_count, load, segment_bits, t_prime)
    with timed(ctx, "simulate"):
        runs = run_seeds(scheme, range(base, base + seeds), cfg.threads)
    report = rate_report(scheme, decode_rational(capacity))

    if transcripts:
        with open(Path(transcripts), "w") as f:
            for t in runs:
                f.write(json.dumps(t.to_json(), sort_keys=True) + "\n")

    result = simulation_summary(scheme, runs, report)
    emit(ctx, "simulate", result, _text)
    if result["exact"] != len(runs) or result["replay_exact"] != len(runs):
        raise InternalFailure(f"{len(runs) - result['exact']} of {len(runs)} runs failed to decode")
    if not report.ok:
        raise InternalFailure("achieved rate is not on the outer boundary")
