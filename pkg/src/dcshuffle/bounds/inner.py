""" :mod:`dcshuffle.bounds.inner`

Achievable region of distributed composite coding.

Sender ``j`` forms one composite index per nonempty message set ``J`` it
holds, at rate ``G[J|j]``. Every receiver first recovers all composite
indices of ``j`` it does not already know (link rows), then decodes the
messages of a decoding set from them (polymatroid rows). The rate of a
message is split across the senders holding it (rate-sum rows).
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Optional
from typing import Tuple

from dcshuffle.apps.shuffle_config import ShuffleConfig
from dcshuffle.apps.shuffle_config import STRATEGIES
from dcshuffle.dtypes.rational import encode_rational
from dcshuffle.errors import BudgetExceeded
from dcshuffle.errors import IncompleteChoice
from dcshuffle.errors import InstanceError
from dcshuffle.errors import InvariantViolation
from dcshuffle.errors import MissingCoordinate
from dcshuffle.errors import StrategyExhausted
from dcshuffle.model.instance import computation_load
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import gen_family
from dcshuffle.model.instance import iter_pairs
from dcshuffle.model.instance import MessageId
from dcshuffle.model.instance import ShuffleProblem
from dcshuffle.polytope.hpolytope import HPolytope
from dcshuffle.polytope.hpolytope import LinearInequality
from dcshuffle.polytope.hpolytope import Point
from dcshuffle.polytope.labels import composite_rate
from dcshuffle.polytope.labels import MESSAGE
from dcshuffle.polytope.labels import message_rate
from dcshuffle.polytope.labels import partial_rate
from dcshuffle.polytope.labels import VarLabel
from dcshuffle.polytope.ops import feasible
from dcshuffle.polytope.ops import fixed_feasible_point
from dcshuffle.polytope.ops import fme_eliminate
from dcshuffle.polytope.ops import remove_redundant
from dcshuffle.utils.pool import thread_map

logger = logging.getLogger(__name__)

MAX_SENDER_SET = 16

LINK = "link"
POLYMATROID = "polymatroid"
RATE_SUM = "rate-sum"
CAPACITY_CAP = "capacity-cap"

Pair = Tuple[MessageId, int]


@dataclass(frozen=True)
class DecodingChoice:
    """Decoding set per (wanted message, sender holding it)."""

    entries: Tuple[Tuple[Pair, FrozenSet[MessageId]], ...]

    @classmethod
    def build(cls, sets: Mapping[Pair, Iterable[MessageId]]) -> "DecodingChoice":
        return cls(entries=tuple(sorted((k, frozenset(v)) for k, v in sets.items())))

    def get(self, message: MessageId, sender: int) -> FrozenSet[MessageId]:
        for key, value in self.entries:
            if key == (message, sender):
                return value
        raise IncompleteChoice(f"No decoding set for message {message} at sender {sender}")

    def as_dict(self) -> Dict[Pair, FrozenSet[MessageId]]:
        return dict(self.entries)

    def to_json(self) -> Dict[str, List[str]]:
        return {f"{m}|{j}": [str(x) for x in sorted(d)] for (m, j), d in self.entries}


@dataclass(frozen=True)
class CompositeSystem:
    """Lifted composite-coding system and the family of each row."""

    polytope: HPolytope
    provenance: Tuple[str, ...]
    choice: DecodingChoice

    @property
    def message_variables(self) -> Tuple[VarLabel, ...]:
        return tuple(v for v in self.polytope.variables if v.kind == MESSAGE)

    @property
    def victims(self) -> Tuple[VarLabel, ...]:
        return tuple(v for v in self.polytope.variables if v.kind != MESSAGE)


@dataclass(frozen=True)
class AchievabilityCertificate:
    """Full lifted assignment proving a rate point achievable."""

    choice_index: int
    choice: DecodingChoice
    assignment: Mapping[VarLabel, Fraction]

    def to_json(self) -> Dict[str, Any]:
        return {
            "choice_index": self.choice_index,
            "assignment": [[str(k), encode_rational(v)] for k, v in sorted(self.assignment.items()) if v],
        }


@dataclass(frozen=True)
class InnerRegion:
    """Achievable region as a union of per-choice polytopes."""

    choices: Tuple[DecodingChoice, ...]
    polytopes: Tuple[HPolytope, ...]

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"choice_index": i, "region": p.to_json()} for i, p in enumerate(self.polytopes)]


def held(problem: ShuffleProblem, sender: int) -> Tuple[MessageId, ...]:
    """Wanted messages that ``sender`` holds, sorted"""
    wanted = set(problem.messages)
    return tuple(sorted(problem.side_info[sender] & wanted))


def family_windows(problem: ShuffleProblem) -> Tuple[FrozenSet[MessageId], ...]:
    """Per sender ``j``, the messages of nodes ``j+1, ..., j+g-1`` (mod K)."""
    instance = problem.origin
    if instance is None:
        raise InstanceError("Pair-only mode needs a problem derived from a family instance")
    K = problem.node_count
    load = computation_load(instance)
    if load.denominator != 1 or load >= K or K % (K - int(load)):
        raise InstanceError("Pair-only mode needs a family instance with K-r dividing K")
    g = K // (K - int(load))

    own = {}
    for k in range(K):
        wanted = problem.wanted_by(k)
        if len(wanted) != 1:
            raise InstanceError("Pair-only mode needs exactly one wanted message per node")
        own[k] = wanted[0]

    windows = tuple(frozenset(own[(j + i) % K] for i in range(1, g)) for j in range(K))
    for j, window in enumerate(windows):
        if not window <= problem.side_info[j]:
            raise InstanceError(f"Sender {j} does not hold its window {sorted(window)}")
    return windows


def composite_sets(problem: ShuffleProblem, sender: int, pair_only: bool = False) -> Tuple[FrozenSet[MessageId], ...]:
    """Message sets ``J`` of sender's composite indices, by size then content."""
    if pair_only:
        return (family_windows(problem)[sender],)
    msgs = held(problem, sender)
    if len(msgs) > MAX_SENDER_SET:
        raise BudgetExceeded(f"Sender {sender} holds {len(msgs)} messages; composites capped at {MAX_SENDER_SET}")
    return tuple(frozenset(c) for size in range(1, len(msgs) + 1) for c in itertools.combinations(msgs, size))


def composite_variable_count(problem: ShuffleProblem, pair_only: bool = False) -> int:
    """Composite plus partial-rate variables of the lifted system."""
    pairs = sum(1 for _ in iter_pairs(problem))
    if pair_only:
        return problem.node_count + pairs
    return sum(2 ** len(held(problem, j)) - 1 for j in range(problem.node_count)) + pairs


def link_constraints(problem: ShuffleProblem, pair_only: bool = False) -> List[LinearInequality]:
    """Per sender and receiver: composites the receiver cannot infer fit the link."""
    rows: Dict[FrozenSet[VarLabel], LinearInequality] = {}
    for j in range(problem.node_count):
        comps = composite_sets(problem, j, pair_only)
        for k in range(problem.node_count):
            if k == j:
                continue
            known = problem.shared(k, j)
            terms = frozenset(composite_rate(J, j) for J in comps if not J <= known)
            if terms and terms not in rows:
                rows[terms] = LinearInequality.build({t: 1 for t in terms}, problem.capacities[j])
    return list(rows.values())


def polymatroid_constraints(
    problem: ShuffleProblem, choice: DecodingChoice, pair_only: bool = False
) -> List[LinearInequality]:
    """Decodability of each decoding set from the sender's composite indices.

    Raises:
        IncompleteChoice: a (message, sender) pair has no decoding set
    """
    rows: Dict[LinearInequality, None] = {}
    for m, j in iter_pairs(problem):
        decoding = choice.get(m, j)
        if m not in decoding or not decoding <= set(held(problem, j)):
            raise ValueError(f"Decoding set for {m} at sender {j} must contain it and lie in the sender's messages")
        known = problem.shared(m.node, j)
        usable = decoding | known
        comps = [J for J in composite_sets(problem, j, pair_only) if J <= usable]
        unknown = sorted(decoding - known)
        for size in range(1, len(unknown) + 1):
            for subset in itertools.combinations(unknown, size):
                coeffs: Dict[VarLabel, int] = {partial_rate(x, j): 1 for x in subset}
                for J in comps:
                    if J & set(subset):
                        coeffs[composite_rate(J, j)] = -1
                rows[LinearInequality.build(coeffs, 0)] = None
    return list(rows)


def rate_sum_constraints(problem: ShuffleProblem) -> List[LinearInequality]:
    """Each message rate is at most the sum of its per-sender parts."""
    rows = []
    for m in problem.messages:
        coeffs: Dict[VarLabel, int] = {message_rate(m): 1}
        for j in problem.holders(m):
            coeffs[partial_rate(m, j)] = -1
        rows.append(LinearInequality.build(coeffs, 0))
    return rows


def composite_system(problem: ShuffleProblem, choice: DecodingChoice, pair_only: bool = False) -> CompositeSystem:
    """Lifted system over message, partial and composite rates."""
    link = link_constraints(problem, pair_only)
    poly = polymatroid_constraints(problem, choice, pair_only)
    rate_sum = rate_sum_constraints(problem)

    composites = [composite_rate(J, j) for j in range(problem.node_count) for J in composite_sets(problem, j, pair_only)]
    in_link = {k for row in link for k in row.support}
    caps = [
        LinearInequality.build({c: 1}, problem.capacities[c.sender]) for c in composites if c not in in_link
    ]

    variables = sorted(
        set(composites)
        | {message_rate(m) for m in problem.messages}
        | {partial_rate(m, j) for m, j in iter_pairs(problem)}
    )
    families = [(LINK, link), (POLYMATROID, poly), (RATE_SUM, rate_sum), (CAPACITY_CAP, caps)]
    return CompositeSystem(
        polytope=HPolytope(
            variables=tuple(variables),
            inequalities=tuple(row for _, rows in families for row in rows),
        ),
        provenance=tuple(tag for tag, rows in families for _ in rows),
        choice=choice,
    )


def default_choice(problem: ShuffleProblem) -> DecodingChoice:
    """Decode the wanted message together with the side information shared with the sender."""
    return DecodingChoice.build(
        {(m, j): ({m} | problem.shared(m.node, j)) & set(held(problem, j)) for m, j in iter_pairs(problem)}
    )


def maximal_choice(problem: ShuffleProblem) -> DecodingChoice:
    """Decode everything the sender holds."""
    return DecodingChoice.build({(m, j): held(problem, j) for m, j in iter_pairs(problem)})


def pair_options(problem: ShuffleProblem, message: MessageId, sender: int) -> List[FrozenSet[MessageId]]:
    """Every valid decoding set for one (message, sender) pair"""
    others = [x for x in held(problem, sender) if x != message]
    return [
        frozenset((message,) + extra) for size in range(len(others) + 1) for extra in itertools.combinations(others, size)
    ]


def decoding_strategies(
    problem: ShuffleProblem,
    strategy: str = "default",
    exhaustive_set_cap: int = 3,
    max_choices: int = 4096,
) -> Iterator[DecodingChoice]:
    """Decoding choices in order: default, maximal, then (exhaustive) all others."""
    if strategy not in STRATEGIES:
        raise ValueError(f"Unknown strategy {strategy!r}")

    seen = set()
    count = 0

    def fresh(choice: DecodingChoice) -> bool:
        nonlocal count
        if choice in seen or count >= max_choices:
            return False
        seen.add(choice)
        count += 1
        return True

    first = default_choice(problem)
    if fresh(first):
        yield first
    if strategy == "default":
        return

    maximal = maximal_choice(problem)
    if fresh(maximal):
        yield maximal
    if strategy == "maximal":
        return

    if any(len(held(problem, j)) > exhaustive_set_cap for j in range(problem.node_count)):
        logger.info(f"Exhaustive decoding choices skipped: a sender holds more than {exhaustive_set_cap} messages")
        return

    pairs = list(iter_pairs(problem))
    options = [pair_options(problem, m, j) for m, j in pairs]
    for combo in itertools.product(*options):
        if count >= max_choices:
            logger.info(f"Decoding choices capped at {max_choices}")
            return
        choice = DecodingChoice.build(dict(zip(pairs, combo)))
        if fresh(choice):
            yield choice


def composite_region(
    problem: ShuffleProblem,
    choice: DecodingChoice,
    config: Optional[ShuffleConfig] = None,
) -> HPolytope:
    """Project the composite system of ``choice`` onto the message rates.

    Raises:
        BlowupBudgetExceeded: the elimination hit ``config.fme_row_cap``
    """
    cfg = config or ShuffleConfig()
    system = composite_system(problem, choice, cfg.pair_only)
    projected = fme_eliminate(
        system.polytope,
        system.victims,
        row_cap=cfg.fme_row_cap,
        redundancy_threshold=cfg.redundancy_threshold,
    )
    return remove_redundant(projected)


def achievable(
    problem: ShuffleProblem,
    target: Mapping[VarLabel, Fraction],
    choices: Iterable[DecodingChoice],
    pair_only: bool = False,
) -> AchievabilityCertificate:
    """First decoding choice whose lifted system admits ``target``.

    Raises:
        MissingCoordinate: ``target`` lacks a message rate
        StrategyExhausted: no choice admits ``target``
    """
    labels = [message_rate(m) for m in problem.messages]
    missing = [str(v) for v in labels if v not in target]
    if missing:
        raise MissingCoordinate(f"Target lacks rates for {missing}")
    fixed = {v: Fraction(target[v]) for v in labels}

    summaries = []
    for index, choice in enumerate(choices):
        system = composite_system(problem, choice, pair_only)
        point = fixed_feasible_point(system.polytope, fixed)
        if point is None:
            summaries.append(f"choice {index}: lifted system infeasible at target")
            continue
        if not feasible(system.polytope, point):
            raise InvariantViolation(f"Certificate for choice {index} fails re-substitution")
        return AchievabilityCertificate(choice_index=index, choice=choice, assignment=point)

    raise StrategyExhausted(f"No decoding choice achieves the target ({len(summaries)} tried)", summaries)


def inner_region(problem: ShuffleProblem, config: Optional[ShuffleConfig] = None) -> InnerRegion:
    """Per-choice composite regions under the configured strategy."""
    cfg = config or ShuffleConfig()
    choices = tuple(decoding_strategies(problem, cfg.strategy, cfg.exhaustive_set_cap, cfg.max_choices))
    polys = thread_map(lambda c: composite_region(problem, c, cfg), choices, cfg.threads)
    logger.info(f"Inner region: {len(polys)} polytope(s) from strategy '{cfg.strategy}'")
    return InnerRegion(choices=choices, polytopes=tuple(polys))


@dataclass(frozen=True)
class SchemeCertificate:
    """Lifted assignment of the explicit family scheme."""

    problem: ShuffleProblem
    system: CompositeSystem
    assignment: Point

    @property
    def rates(self) -> Point:
        return {v: self.assignment[v] for v in self.system.message_variables}


def scheme_certificate(node_count: int, load: int, capacities: Any = 1) -> SchemeCertificate:
    """Composite rates of the family scheme: sender ``j`` spends its whole
    link on the composite over its window, each window message getting
    ``C_j`` from it.

    Raises:
        DivisibilityError, InvariantViolation
    """
    problem = derive_shuffle_problem(gen_family(node_count, load, capacities=capacities))
    windows = family_windows(problem)
    system = composite_system(problem, default_choice(problem))

    point: Point = {v: Fraction(0) for v in system.polytope.variables}
    for j, window in enumerate(windows):
        cap = problem.capacities[j]
        point[composite_rate(window, j)] = cap
        for m in window:
            point[partial_rate(m, j)] = cap
            point[message_rate(m)] += cap

    if not feasible(system.polytope, point):
        raise InvariantViolation("Family scheme assignment violates the composite system")
    return SchemeCertificate(problem=problem, system=system, assignment=point)
