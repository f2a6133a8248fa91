""" dcshuffle CLI

Rate-region analysis of MapReduce shuffle phases from the command line.
Defaults come from the main configuration file; global flags override
them for one invocation.
"""
from typing import Optional

import click

from dcshuffle.apps.shuffle_config import STRATEGIES
from dcshuffle.cli.commands.analyze import analyze
from dcshuffle.cli.commands.bounds import inner
from dcshuffle.cli.commands.bounds import outer
from dcshuffle.cli.commands.catalog import catalog
from dcshuffle.cli.commands.check import check
from dcshuffle.cli.commands.config import config
from dcshuffle.cli.commands.family import family
from dcshuffle.cli.commands.gen import gen
from dcshuffle.cli.commands.simulate import simulate
from dcshuffle.utils.versions import show_versions


@click.group(invoke_without_command=True)
@click.pass_context
@click.option("--config_dir", type=click.Path(file_okay=False), default=None, help="Configuration directory.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--budget", type=click.IntRange(min=0), default=None, help="Acyclic-subset enumeration budget.")
@click.option("--strategy", type=click.Choice(STRATEGIES), default=None, help="Decoding-choice strategy.")
@click.option("--seed", type=int, default=None, help="Base seed for simulations.")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads.")
@click.option("--timings", is_flag=True, help="Add wall-clock timings to reports.")
@click.option("--version", is_flag=True, help="Display dcshuffle version and exit.")
def main(
    ctx: click.Context,
    config_dir: Optional[str],
    out: Optional[str],
    fmt: str,
    budget: Optional[int],
    strategy: Optional[str],
    seed: Optional[int],
    threads: Optional[int],
    timings: bool,
    version: bool,
) -> None:
    """dcshuffle command line interface"""
    ctx.ensure_object(dict)
    ctx.obj["CONFIG_DIR"] = config_dir
    ctx.obj["OUT"] = out
    ctx.obj["FORMAT"] = fmt
    ctx.obj["BUDGET"] = budget
    ctx.obj["STRATEGY"] = strategy
    ctx.obj["SEED"] = seed
    ctx.obj["THREADS"] = threads
    ctx.obj["TIMINGS"] = timings
    if version:
        show_versions(click.echo)
        return

    if ctx.invoked_subcommand is None:
        click.echo(ctx.command.get_help(ctx))


main.add_command(gen)
main.add_command(analyze)
main.add_command(outer)
main.add_command(inner)
main.add_command(check)
main.add_command(simulate)
main.add_command(family)
main.add_command(config)
main.add_command(catalog)

if __name__ == "__main__":
    main()
