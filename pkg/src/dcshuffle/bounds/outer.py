""" :mod:`dcshuffle.bounds.outer`

Acyclic-subset outer bound on the rate region: for every set of
messages inducing an acyclic subgraph, their total rate cannot exceed the
total capacity of the senders holding any of them.
"""
import logging
from fractions import Fraction
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

from dcshuffle.graph.icgraph import build_digraph
from dcshuffle.graph.icgraph import enumerate_acyclic_subsets
from dcshuffle.graph.icgraph import SideInfoDigraph
from dcshuffle.model.instance import Capacities
from dcshuffle.model.instance import family_period
from dcshuffle.model.instance import MessageId
from dcshuffle.model.instance import ShuffleProblem
from dcshuffle.model.instance import uniform_capacities
from dcshuffle.polytope.hpolytope import HPolytope
from dcshuffle.polytope.hpolytope import LinearInequality
from dcshuffle.polytope.labels import message_rate
from dcshuffle.polytope.labels import VarLabel
from dcshuffle.polytope.ops import remove_redundant

logger = logging.getLogger(__name__)


def message_variables(problem: ShuffleProblem) -> Tuple[VarLabel, ...]:
    return tuple(message_rate(m) for m in problem.messages)


def acyclic_outer_region(
    problem: ShuffleProblem,
    graph: Optional[SideInfoDigraph] = None,
    budget: int = 0,
) -> HPolytope:
    """Outer bound as a canonical, irredundant system over message rates.

    Raises:
        BudgetExceeded: the acyclic-subset search ran out of budget
    """
    if graph is None:
        graph = build_digraph(problem)

    rows: Dict[Tuple[MessageId, ...], Fraction] = {}
    for subset in enumerate_acyclic_subsets(graph, budget=budget):
        members = set(subset)
        rows[subset] = sum(
            (c for c, s in zip(problem.capacities, problem.side_info) if members & s),
            Fraction(0),
        )

    # a generated superset with no larger rhs makes a subset's row redundant
    by_size = sorted(rows, key=len, reverse=True)
    kept: List[Tuple[MessageId, ...]] = []
    for subset in by_size:
        members = set(subset)
        if not any(members < set(big) and rows[big] <= rows[subset] for big in kept):
            kept.append(subset)
    logger.debug(f"Outer bound: {len(rows)} acyclic subsets, {len(kept)} after dominance")

    region = HPolytope(
        variables=message_variables(problem),
        inequalities=tuple(
            LinearInequality.build({message_rate(m): 1 for m in subset}, rows[subset]) for subset in kept
        ),
    )
    return remove_redundant(region)


def family_messages(node_count: int, load: int) -> List[MessageId]:
    g = family_period(node_count, load)
    return [MessageId(k, k % g) for k in range(node_count)]


def family_outer_region(node_count: int, load: int, capacities: Capacities = 1) -> HPolytope:
    """Closed-form outer bound of the symmetric family.

    One row per residue class ``c`` mod ``g``: the rates of the K-r
    messages of that class are bounded by the capacity of the other r nodes.

    Raises:
        DivisibilityError: K-r does not divide K
    """
    g = family_period(node_count, load)
    caps = uniform_capacities(capacities, node_count)
    messages = family_messages(node_count, load)

    ineqs = []
    for c in range(g):
        group = [m for m in messages if m.node % g == c]
        rhs = sum((caps[j] for j in range(node_count) if j % g != c), Fraction(0))
        ineqs.append(LinearInequality.build({message_rate(m): 1 for m in group}, rhs))

    variables = tuple(sorted(message_rate(m) for m in messages))
    return HPolytope(variables=variables, inequalities=tuple(ineqs)).canonical()


def group_rows_bind(region: HPolytope, rate: Fraction) -> bool:
    """Whether the all-``rate`` point makes every row of ``region`` tight."""
    point = {v: rate for v in region.variables}
    return all(ineq.lhs(point) == ineq.rhs for ineq in region.inequalities)

