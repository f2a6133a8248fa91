""" :mod:`dcshuffle.graph.icgraph`

Side-information digraph of a shuffle problem and acyclic-subset search.

There is an arc ``u -> v`` when the receiver of ``u`` (node ``u.node``)
already holds message ``v``.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import Mapping
from typing import Optional
from typing import Set
from typing import Tuple

import networkx as nx

from dcshuffle.errors import BudgetExceeded
from dcshuffle.errors import UnknownVertex
from dcshuffle.model.instance import MessageId
from dcshuffle.model.instance import ShuffleProblem

logger = logging.getLogger(__name__)

Subset = Tuple[MessageId, ...]


@dataclass(frozen=True)
class SideInfoDigraph:
    """Immutable digraph over message ids."""

    vertices: Tuple[MessageId, ...]
    adjacency: Mapping[MessageId, FrozenSet[MessageId]]
    graph: nx.DiGraph = field(compare=False, repr=False)

    @classmethod
    def from_arcs(
        cls, vertices: Iterable[MessageId], arcs: Iterable[Tuple[MessageId, MessageId]]
    ) -> "SideInfoDigraph":
        """Build a digraph from explicit arcs (self-loops are rejected)."""
        verts = tuple(sorted(set(MessageId(*v) for v in vertices)))
        succ: Dict[MessageId, Set[MessageId]] = {v: set() for v in verts}
        for u, v in arcs:
            u, v = MessageId(*u), MessageId(*v)
            if u not in succ or v not in succ:
                raise UnknownVertex(f"Arc {u} -> {v} leaves the vertex set")
            if u == v:
                raise ValueError(f"Self-loop at {u}")
            succ[u].add(v)

        g = nx.DiGraph()
        g.add_nodes_from(verts)
        g.add_edges_from((u, v) for u in verts for v in sorted(succ[u]))
        return cls(vertices=verts, adjacency={v: frozenset(s) for v, s in succ.items()}, graph=g)

    @property
    def arc_count(self) -> int:
        return self.graph.number_of_edges()

    def successors(self, v: MessageId) -> FrozenSet[MessageId]:
        return self.adjacency[v]

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return self.arc_count == n * (n - 1)

    def stats(self) -> Dict[str, Any]:
        return {
            "vertices": len(self.vertices),
            "arcs": self.arc_count,
            "complete": self.is_complete(),
        }

    def to_adjacency_text(self) -> str:
        """One line per vertex: ``k,f: k1,f1 k2,f2 ...``"""
        lines = []
        for v in self.vertices:
            succ = " ".join(str(w) for w in sorted(self.adjacency[v]))
            lines.append(f"{v}: {succ}".rstrip())
        return "\n".join(lines)


def build_digraph(problem: ShuffleProblem) -> SideInfoDigraph:
    """Side-information digraph of ``problem``."""
    vertices = problem.messages
    wanted = set(vertices)
    arcs = [(u, v) for u in vertices for v in sorted(problem.side_info[u.node] & wanted) if v != u]
    graph = SideInfoDigraph.from_arcs(vertices, arcs)
    logger.debug(f"Side-information digraph: {graph.stats()}")
    return graph


def _check_vertices(graph: SideInfoDigraph, subset: Iterable[MessageId]) -> Tuple[MessageId, ...]:
    members = tuple(MessageId(*v) for v in subset)
    for v in members:
        if v not in graph.adjacency:
            raise UnknownVertex(f"{v} is not a vertex of the digraph")
    return members


def is_acyclic(graph: SideInfoDigraph, subset: Iterable[MessageId]) -> bool:
    """True iff the subgraph induced by ``subset`` has no directed cycle."""
    members = _check_vertices(graph, subset)
    return bool(nx.is_directed_acyclic_graph(graph.graph.subgraph(members)))


def enumerate_acyclic_subsets(
    graph: SideInfoDigraph,
    max_vertices: Optional[int] = None,
    budget: int = 0,
) -> Iterator[Subset]:
    """Yield every nonempty acyclic vertex subset once, by nondecreasing size.

    Within a size, subsets come in lexicographic order of their sorted
    vertex tuples. A candidate is only tested when all of its one-smaller
    subsets are acyclic, so supersets of cyclic sets are never examined.

    Args:
        max_vertices: stop after subsets of this size (None = no cap)
        budget: max candidate subsets examined (0 = unlimited)
    """
    vertices = graph.vertices
    index = {v: i for i, v in enumerate(vertices)}
    examined = 0

    def charge() -> None:
        nonlocal examined
        examined += 1
        if budget and examined > budget:
            logger.warning(f"Acyclic-subset budget of {budget} exhausted")
            raise BudgetExceeded(f"Acyclic-subset enumeration exceeded budget of {budget} subsets")

    level = []
    for v in vertices:
        charge()
        level.append((v,))

    size = 1
    while level:
        yield from level
        if max_vertices is not None and size >= max_vertices:
            return

        known = set(frozenset(s) for s in level)
        nxt = []
        for s in level:
            base = frozenset(s)
            for w in vertices[index[s[-1]] + 1 :]:
                if any((base - {u}) | {w} not in known for u in s):
                    continue
                charge()
                cand = s + (w,)
                if nx.is_directed_acyclic_graph(graph.graph.subgraph(cand)):
                    nxt.append(cand)
        level = nxt
        size += 1
        logger.debug(f"{len(level)} acyclic subsets of size {size}")


def mais(graph: SideInfoDigraph, budget: int = 0) -> Tuple[int, Subset]:
    """Size and lexicographically least witness of a maximum acyclic induced subgraph."""
    best: Subset = ()
    for s in enumerate_acyclic_subsets(graph, budget=budget):
        if len(s) > len(best):
            best = s
    return len(best), best
