from dcshuffle.model.catalog import Catalog
from dcshuffle.model.instance import gen_family

"""Main instance of the Instance Catalog."""
instance_catalog = Catalog()

# --------------------------------------------------------------------------------------
# Instance Catalog Entries
# --------------------------------------------------------------------------------------

instance_catalog.add_entry(
    tag="ex1",
    title="Three nodes, each mapping two of three batches (clique digraph)",
    instance=gen_family(3, 2, eta1=2, function_count=3, capacities=1),
)

instance_catalog.add_entry(
    tag="ex2",
    title="Six nodes, each mapping two of three batches",
    instance=gen_family(6, 4, eta1=2, function_count=6, capacities=1),
)

instance_catalog.add_entry(
    tag="clique-4",
    title="Four nodes, each mapping three of four batches",
    instance=gen_family(4, 3, eta1=1, function_count=4, capacities=1),
)
