""" :mod:`dcshuffle.bounds.capacity`

Capacity certification: compare the composite-coding inner region with
the acyclic-subset outer region, and sweep the symmetric family.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from enum import Enum
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

from dcshuffle.apps.shuffle_config import ShuffleConfig
from dcshuffle.bounds.inner import achievable
from dcshuffle.bounds.inner import composite_system
from dcshuffle.bounds.inner import composite_variable_count
from dcshuffle.bounds.inner import decoding_strategies
from dcshuffle.bounds.inner import inner_region
from dcshuffle.bounds.outer import family_outer_region
from dcshuffle.bounds.outer import group_rows_bind
from dcshuffle.bounds.outer import acyclic_outer_region
from dcshuffle.dtypes.rational import as_rational
from dcshuffle.dtypes.rational import encode_rational
from dcshuffle.dtypes.rational import RationalLike
from dcshuffle.errors import BudgetExceeded
from dcshuffle.errors import DimensionCapExceeded
from dcshuffle.errors import StrategyExhausted
from dcshuffle.graph.icgraph import build_digraph
from dcshuffle.graph.icgraph import mais
from dcshuffle.graph.icgraph import SideInfoDigraph
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import family_period
from dcshuffle.model.instance import gen_family
from dcshuffle.model.instance import ShuffleProblem
from dcshuffle.polytope.hpolytope import format_point
from dcshuffle.polytope.hpolytope import HPolytope
from dcshuffle.polytope.hpolytope import Point
from dcshuffle.polytope.ops import lp_contains
from dcshuffle.polytope.ops import maximal_vertices
from dcshuffle.polytope.ops import region_contains
from dcshuffle.polytope.ops import symmetric_rate
from dcshuffle.polytope.ops import union_convexity_witness
from dcshuffle.utils.pool import thread_map

logger = logging.getLogger(__name__)


class VerdictKind(str, Enum):
    MATCH = "MATCH"
    GAP = "GAP"
    UNDECIDED = "UNDECIDED"


# GAP sides
OUTER_UNACHIEVED = "outer-vertex-unachieved"
INNER_OUTSIDE = "inner-outside-outer"


@dataclass(frozen=True)
class CapacityVerdict:
    kind: VerdictKind
    outer: Optional[HPolytope] = None
    inner: Tuple[HPolytope, ...] = ()
    witness: Optional[Point] = None
    side: Optional[str] = None
    reason: str = ""
    bug: bool = False
    inner_method: str = ""
    certificates: Tuple[Any, ...] = field(default=(), compare=False)
    nonconvex_witness: Optional[Point] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.kind.value,
            "side": self.side,
            "witness": format_point(self.witness),
            "reason": self.reason,
            "bug": self.bug,
            "inner_method": self.inner_method,
            "outer": self.outer.to_json() if self.outer is not None else None,
            "outer_text": self.outer.to_text() if self.outer is not None else None,
            "inner": [p.to_json() for p in self.inner],
            "certificates": [c.to_json() for c in self.certificates],
            "nonconvex_witness": format_point(self.nonconvex_witness),
        }


def check_capacity(
    problem: ShuffleProblem,
    config: Optional[ShuffleConfig] = None,
    graph: Optional[SideInfoDigraph] = None,
) -> CapacityVerdict:
    """Decide whether the inner and outer regions coincide.

    MATCH needs every maximal outer vertex achievable and every inner
    polytope inside the outer region. Budget exhaustion yields UNDECIDED.
    """
    cfg = config or ShuffleConfig()
    try:
        outer = acyclic_outer_region(problem, graph, budget=cfg.enumeration_budget)
    except BudgetExceeded as e:
        return CapacityVerdict(VerdictKind.UNDECIDED, reason=f"outer bound: {e}")

    choices = list(decoding_strategies(problem, cfg.strategy, cfg.exhaustive_set_cap, cfg.max_choices))

    # (a) outer vertices achievable; down-closed inner regions make maximal ones enough
    try:
        targets = maximal_vertices(outer, cfg.vertex_dim_cap)
    except DimensionCapExceeded as e:
        return CapacityVerdict(VerdictKind.UNDECIDED, outer=outer, reason=f"outer vertices: {e}")

    certificates = []
    for v in targets:
        try:
            certificates.append(achievable(problem, v, choices, cfg.pair_only))
        except StrategyExhausted as e:
            logger.info(f"Outer vertex {format_point(v)} not achieved: {e}")
            return CapacityVerdict(
                VerdictKind.GAP,
                outer=outer,
                witness=v,
                side=OUTER_UNACHIEVED,
                reason=str(e),
            )
        except BudgetExceeded as e:
            return CapacityVerdict(VerdictKind.UNDECIDED, outer=outer, reason=f"achievability: {e}")
    logger.debug(f"All {len(targets)} maximal outer vertices achieved")

    # (b) inner inside outer
    inner: Tuple[HPolytope, ...] = ()
    nonconvex = None
    method = "lp"
    victims = composite_variable_count(problem, cfg.pair_only)
    if victims <= cfg.inner_fme_max_victims:
        try:
            inner = inner_region(problem, cfg).polytopes
            method = "fme"
        except BudgetExceeded as e:
            logger.warning(f"Inner projection abandoned ({e}); deciding containment by LP")

    if method == "fme":
        for poly in inner:
            try:
                ok, witness = region_contains(outer, poly, cfg.vertex_dim_cap)
            except DimensionCapExceeded as e:
                return CapacityVerdict(VerdictKind.UNDECIDED, outer=outer, inner=inner, reason=f"inner vertices: {e}")
            if not ok:
                logger.error(f"Inner vertex {format_point(witness)} lies outside the outer bound")
                return CapacityVerdict(
                    VerdictKind.GAP,
                    outer=outer,
                    inner=inner,
                    witness=witness,
                    side=INNER_OUTSIDE,
                    reason="inner region exceeds the outer bound",
                    bug=True,
                    inner_method=method,
                )
        try:
            nonconvex = union_convexity_witness(inner, cfg.vertex_dim_cap)
        except DimensionCapExceeded:
            nonconvex = None
    else:
        for choice in choices:
            try:
                lifted = composite_system(problem, choice, cfg.pair_only).polytope
            except BudgetExceeded as e:
                return CapacityVerdict(VerdictKind.UNDECIDED, outer=outer, reason=f"inner system: {e}")
            ok, witness = lp_contains(outer, lifted)
            if not ok:
                return CapacityVerdict(
                    VerdictKind.GAP,
                    outer=outer,
                    witness=witness,
                    side=INNER_OUTSIDE,
                    reason="lifted inner system exceeds the outer bound",
                    bug=True,
                    inner_method=method,
                )

    logger.info(f"Capacity verdict MATCH ({len(targets)} vertices, inner by {method})")
    return CapacityVerdict(
        VerdictKind.MATCH,
        outer=outer,
        inner=inner,
        inner_method=method,
        certificates=tuple(certificates),
        nonconvex_witness=nonconvex,
    )


@dataclass(frozen=True)
class FamilyRow:
    node_count: int
    load: int
    period: int
    mais_size: int
    mais_witness: Tuple[Any, ...]
    outer: HPolytope
    outer_matches_closed_form: bool
    verdict: CapacityVerdict
    symmetric_rate: Optional[Fraction]
    symmetric_binds: Optional[bool]

    @property
    def ok(self) -> bool:
        return (
            self.mais_size == self.node_count - self.load
            and self.outer_matches_closed_form
            and self.verdict.kind == VerdictKind.MATCH
            and self.symmetric_binds is not False
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "K": self.node_count,
            "r": self.load,
            "g": self.period,
            "mais": self.mais_size,
            "mais_witness": [str(m) for m in self.mais_witness],
            "outer": self.outer.to_json(),
            "outer_text": self.outer.to_text(),
            "outer_matches_closed_form": self.outer_matches_closed_form,
            "inner": [p.to_json() for p in self.verdict.inner],
            "verdict": self.verdict.kind.value,
            "witnesses": {
                "gap": format_point(self.verdict.witness),
                "nonconvex": format_point(self.verdict.nonconvex_witness),
            },
            "inner_method": self.verdict.inner_method,
            "symmetric_rate": encode_rational(self.symmetric_rate) if self.symmetric_rate is not None else None,
            "symmetric_binds": self.symmetric_binds,
        }


def family_parameters(max_nodes: int) -> List[Tuple[int, int]]:
    """Valid (K, r) pairs with K <= max_nodes, ordered by (K, r)."""
    return [(K, r) for K in range(2, max_nodes + 1) for r in range(1, K) if K % (K - r) == 0]


def verify_family_row(node_count: int, load: int, capacity: RationalLike = 1, config: Optional[ShuffleConfig] = None) -> FamilyRow:
    cfg = config or ShuffleConfig()
    C = as_rational(capacity)
    g = family_period(node_count, load)
    problem = derive_shuffle_problem(gen_family(node_count, load, capacities=C))
    graph = build_digraph(problem)
    size, witness = mais(graph, budget=cfg.enumeration_budget)
    closed = family_outer_region(node_count, load, C)

    verdict = check_capacity(problem, cfg, graph)
    outer = verdict.outer if verdict.outer is not None else closed
    rate = symmetric_rate(closed)
    logger.info(f"Family row K={node_count} r={load}: {verdict.kind.value}")
    return FamilyRow(
        node_count=node_count,
        load=load,
        period=g,
        mais_size=size,
        mais_witness=witness,
        outer=outer,
        outer_matches_closed_form=verdict.outer is not None and verdict.outer == closed,
        verdict=verdict,
        symmetric_rate=rate,
        symmetric_binds=group_rows_bind(closed, rate),
    )


def verify_family(
    max_nodes: int,
    capacity: RationalLike = 1,
    config: Optional[ShuffleConfig] = None,
) -> List[FamilyRow]:
    """Check every valid family member with K <= ``max_nodes``."""
    cfg = config or ShuffleConfig()
    params = family_parameters(max_nodes)
    return thread_map(lambda p: verify_family_row(p[0], p[1], capacity, cfg), params, cfg.threads)

