from typing import Optional

import click
import yaml

from dcshuffle.apps.shuffle_config import DcShuffleConfig
from dcshuffle.apps.shuffle_config import STRATEGIES
from dcshuffle.cli.utils import guarded


@click.group()
def config() -> None:
    """Manage dcshuffle configuration."""
    pass


@config.command()
@click.pass_context
def init(ctx: click.Context) -> None:
    """Create initial configuration files."""
    _ = DcShuffleConfig(config_dir=ctx.obj.get("CONFIG_DIR"))


@config.command()
@click.pass_context
def show(ctx: click.Context) -> None:
    """Show current configuration."""
    cfg = DcShuffleConfig(config_dir=ctx.obj.get("CONFIG_DIR"))
    click.echo(yaml.dump(cfg.main.get_state(), sort_keys=False), nl=False)


@config.command()
@click.pass_context
@click.option("--loglevel", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]), default=None)
@click.option("--strategy", type=click.Choice(STRATEGIES), default=None, help="Decoding-choice strategy")
@click.option("--fme-row-cap", type=int, default=None, help="Row cap during elimination")
@click.option("--vertex-dim-cap", type=int, default=None, help="Max dimension for vertex enumeration")
@click.option("--t-prime", "t_prime", type=int, default=None, help="Bits per IV in the simulator")
@guarded
def set(
    ctx: click.Context,
    loglevel: Optional[str],
    strategy: Optional[str],
    fme_row_cap: Optional[int],
    vertex_dim_cap: Optional[int],
    t_prime: Optional[int],
) -> None:
    """Set configuration parameters."""
    cfg = DcShuffleConfig(config_dir=ctx.obj.get("CONFIG_DIR"))
    cfg.main = cfg.main.overridden(
        loglevel=loglevel,
        strategy=strategy,
        fme_row_cap=fme_row_cap,
        vertex_dim_cap=vertex_dim_cap,
        t_prime=t_prime,
    )
    cfg.save()
