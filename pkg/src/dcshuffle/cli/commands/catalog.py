from typing import Optional

import click

from dcshuffle.data.instance_catalog import instance_catalog
from dcshuffle.model.catalog import CatalogEntry
from dcshuffle.model.instance import describe


def dump_catalog_entry(entry: CatalogEntry, detail: bool = False) -> None:
    if not detail:
        click.echo(f"{entry.tag:15} {entry.title}")
    else:
        summary = describe(entry.instance)
        click.echo(f"{entry.title}")
        click.echo(f"  Tag: {entry.tag}")
        click.echo(f"  K={summary['K']} N={summary['N']} Q={summary['Q']} F={summary['F']} r={summary['r']}")
        click.echo(f"  Descriptor: {entry.descriptor}")


@click.group()
def catalog() -> None:
    """Browse the named instance catalog."""
    pass


@catalog.command()
@click.option("-d", "--detail", is_flag=True, help="Print detailed information for each instance")
@click.option("--tag", type=str, default=None, help="Filter for instance tag")
def list(detail: bool, tag: Optional[str]) -> None:
    """List catalog instances (family-K-r tags are also accepted everywhere)."""
    for entry in instance_catalog.find(tag=tag):
        dump_catalog_entry(entry, detail)
