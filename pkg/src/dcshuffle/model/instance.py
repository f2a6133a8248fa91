""" :mod:`dcshuffle.model.instance`

MapReduce instances and the shuffle (index-coding) problem they induce.

A node ``k`` maps the batches in ``map_assignment[k]`` and reduces the
functions in ``reduce_assignment[k]``. For each batch ``f`` it did not map,
node ``k`` wants the message ``(k, f)``: the concatenation of the
intermediate values of its functions over the files of batch ``f``.
"""
import json
import logging
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from pathlib import Path
from typing import Any
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from dcshuffle.dtypes.rational import as_rational
from dcshuffle.dtypes.rational import encode_rational
from dcshuffle.dtypes.rational import RationalLike
from dcshuffle.errors import DivisibilityError
from dcshuffle.errors import InstanceError
from dcshuffle.errors import InvariantViolation
from dcshuffle.errors import UndeliverableMessage
from dcshuffle.utils.response import violation
from dcshuffle.utils.response import Violation

logger = logging.getLogger(__name__)

Capacities = Union[RationalLike, Sequence[RationalLike]]


class MessageId(NamedTuple):
    """Message wanted by ``node`` for a batch it did not map"""

    node: int
    batch: int

    def __str__(self) -> str:
        return f"{self.node},{self.batch}"


@dataclass(frozen=True)
class DcInstance:
    """A distributed-computing (MapReduce) configuration."""

    node_count: int
    file_count: int
    function_count: int
    batch_count: int
    map_assignment: Tuple[FrozenSet[int], ...]
    reduce_assignment: Tuple[FrozenSet[int], ...]
    link_capacities: Tuple[Fraction, ...]
    t_prime: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "map_assignment", tuple(frozenset(m) for m in self.map_assignment))
        object.__setattr__(self, "reduce_assignment", tuple(frozenset(w) for w in self.reduce_assignment))
        object.__setattr__(self, "link_capacities", tuple(as_rational(c) for c in self.link_capacities))

    @property
    def eta1(self) -> Fraction:
        """Files per batch"""
        return Fraction(self.file_count, self.batch_count)

    @property
    def eta2(self) -> Fraction:
        """Functions per node"""
        return Fraction(self.function_count, self.node_count)

    @property
    def message_bits(self) -> Fraction:
        """Nominal message length t = eta1 * eta2 * t'"""
        return self.eta1 * self.eta2 * self.t_prime

    def to_json(self) -> Dict[str, Any]:
        state: Dict[str, Any] = {
            "K": self.node_count,
            "N": self.file_count,
            "Q": self.function_count,
            "F": self.batch_count,
            "map_assignment": [sorted(m) for m in self.map_assignment],
            "reduce_assignment": [sorted(w) for w in self.reduce_assignment],
            "capacities": [encode_rational(c) for c in self.link_capacities],
        }
        if self.t_prime != 1:
            state["t_prime"] = self.t_prime
        return state

    @classmethod
    def from_json(cls, state: Dict[str, Any]) -> "DcInstance":
        try:
            return cls(
                node_count=_as_int(state["K"], "K"),
                file_count=_as_int(state["N"], "N"),
                function_count=_as_int(state["Q"], "Q"),
                batch_count=_as_int(state["F"], "F"),
                map_assignment=tuple(
                    frozenset(_as_int(f, "map_assignment") for f in m) for m in state["map_assignment"]
                ),
                reduce_assignment=tuple(
                    frozenset(_as_int(q, "reduce_assignment") for q in w) for w in state["reduce_assignment"]
                ),
                link_capacities=tuple(as_rational(c) for c in state["capacities"]),
                t_prime=_as_int(state.get("t_prime", 1), "t_prime"),
            )
        except KeyError as e:
            raise InstanceError(f"Instance JSON is missing field {e}") from e
        except (TypeError, ValueError) as e:
            raise InstanceError(f"Malformed instance JSON: {e}") from e


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(f"Field {name} must hold integers, got {value!r}")
    return value


@dataclass(frozen=True)
class ShuffleProblem:
    """Index-coding problem of a shuffle phase.

    ``side_info[j]`` is the set of wanted messages node ``j`` can compute
    (and hence send). Node ``k`` wants every message whose ``node`` is ``k``.
    """

    messages: Tuple[MessageId, ...]
    side_info: Tuple[FrozenSet[MessageId], ...]
    capacities: Tuple[Fraction, ...]
    origin: Optional[DcInstance] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "messages", tuple(sorted(MessageId(*m) for m in self.messages)))
        object.__setattr__(
            self, "side_info", tuple(frozenset(MessageId(*m) for m in s) for s in self.side_info)
        )
        object.__setattr__(self, "capacities", tuple(as_rational(c) for c in self.capacities))
        if len(self.side_info) != len(self.capacities):
            raise InstanceError("side_info and capacities must list the same nodes")

    @property
    def node_count(self) -> int:
        return len(self.side_info)

    def holders(self, message: MessageId) -> Tuple[int, ...]:
        """Senders holding ``message``"""
        return tuple(j for j, s in enumerate(self.side_info) if message in s)

    def shared(self, receiver: int, sender: int) -> FrozenSet[MessageId]:
        """Side information common to ``receiver`` and ``sender``"""
        return self.side_info[receiver] & self.side_info[sender]

    def wanted_by(self, node: int) -> Tuple[MessageId, ...]:
        return tuple(m for m in self.messages if m.node == node)

    def undeliverable(self) -> List[MessageId]:
        return [m for m in self.messages if not self.holders(m)]


def validate(instance: DcInstance) -> List[Violation]:
    """Return every invariant violation of ``instance`` (empty when valid)."""
    out: List[Violation] = []

    def add(code: str, note: str) -> None:
        out.append(violation(code, note, log=logger.warning))

    K, N, Q, F = instance.node_count, instance.file_count, instance.function_count, instance.batch_count
    for name, value in (("K", K), ("N", N), ("Q", Q), ("F", F)):
        if value < 1:
            add("nonpositive-count", f"{name} must be positive, got {value}")
    if out:
        return out

    if N % F:
        add("batch-divisibility", f"F={F} does not divide N={N}")
    if Q % K:
        add("function-divisibility", f"K={K} does not divide Q={Q}")
    if instance.t_prime < 1:
        add("nonpositive-count", f"t_prime must be positive, got {instance.t_prime}")

    # per-node checks below index by node
    length_bad = False
    for name, seq in (
        ("map_assignment", instance.map_assignment),
        ("reduce_assignment", instance.reduce_assignment),
        ("capacities", instance.link_capacities),
    ):
        if len(seq) != K:
            add("assignment-length", f"{name} lists {len(seq)} nodes, expected K={K}")
            length_bad = True
    if length_bad:
        return out

    for k, batches in enumerate(instance.map_assignment):
        bad = sorted(f for f in batches if not 0 <= f < F)
        if bad:
            add("batch-out-of-range", f"node {k} maps batches {bad} outside [0,{F})")
    mapped = set().union(*instance.map_assignment)
    for f in range(F):
        if f not in mapped:
            add("unmapped-batch", f"unmapped batch {f}: no node maps it")

    seen: Dict[int, int] = {}
    for k, funcs in enumerate(instance.reduce_assignment):
        bad = sorted(q for q in funcs if not 0 <= q < Q)
        if bad:
            add("function-out-of-range", f"node {k} reduces functions {bad} outside [0,{Q})")
        if Q % K == 0 and len(funcs) != Q // K:
            add("reduce-size", f"node {k} reduces {len(funcs)} functions, expected Q/K={Q // K}")
        for q in sorted(funcs):
            if q in seen:
                add("reduce-overlap", f"reduce assignment not disjoint: function {q} at nodes {seen[q]} and {k}")
            else:
                seen[q] = k
    missing = sorted(set(range(Q)) - set(seen))
    if missing:
        add("reduce-coverage", f"functions {missing} are reduced by no node")

    for k, c in enumerate(instance.link_capacities):
        if c < 0:
            add("negative-capacity", f"node {k} has negative capacity {c}")

    return out


def ensure_valid(instance: DcInstance) -> None:
    problems = validate(instance)
    if problems:
        raise InstanceError("; ".join(p.message for p in problems), problems)


def computation_load(instance: DcInstance) -> Fraction:
    """Average number of nodes mapping each file"""
    return Fraction(sum(len(m) for m in instance.map_assignment), instance.batch_count)


def derive_shuffle_problem(instance: DcInstance) -> ShuffleProblem:
    """Build the index-coding problem of the shuffle phase of ``instance``."""
    ensure_valid(instance)

    K, F = instance.node_count, instance.batch_count
    mapped = instance.map_assignment
    messages = [MessageId(k, f) for k in range(K) for f in range(F) if f not in mapped[k]]
    side_info = [
        frozenset(MessageId(kh, fh) for kh in range(K) if kh != k for fh in mapped[k] - mapped[kh])
        for k in range(K)
    ]
    problem = ShuffleProblem(
        messages=tuple(messages),
        side_info=tuple(side_info),
        capacities=instance.link_capacities,
        origin=instance,
    )

    lost = problem.undeliverable()
    if lost:
        raise UndeliverableMessage(f"Messages held by no sender: {', '.join(map(str, lost))}")

    expected = F * (K - computation_load(instance))
    if len(problem.messages) != expected:
        raise InvariantViolation(f"{len(problem.messages)} messages, expected F(K-r) = {expected}")

    logger.debug(f"Derived shuffle problem: K={K}, {len(messages)} messages")
    return problem


def uniform_capacities(capacities: Capacities, node_count: int) -> Tuple[Fraction, ...]:
    """Expand a single capacity to every node, or check a per-node list."""
    if isinstance(capacities, (Fraction, int, str)):
        return (as_rational(capacities),) * node_count
    caps = tuple(as_rational(c) for c in capacities)
    if len(caps) != node_count:
        raise InstanceError(f"{len(caps)} capacities given for {node_count} nodes")
    return caps


def family_period(node_count: int, load: int) -> int:
    """g = K / (K - r), raising DivisibilityError when it is not an integer"""
    if not 1 <= load < node_count:
        raise DivisibilityError(f"r must satisfy 1 <= r < K, got K={node_count}, r={load}")
    if node_count % (node_count - load):
        raise DivisibilityError(f"K-r must divide K (K={node_count}, r={load})")
    return node_count // (node_count - load)


def gen_family(
    node_count: int,
    load: int,
    eta1: int = 2,
    function_count: Optional[int] = None,
    capacities: Capacities = 1,
) -> DcInstance:
    """Instance of the symmetric family with K-r dividing K.

    Node ``k`` maps every batch except ``k mod g``; there are ``g`` batches.
    """
    g = family_period(node_count, load)
    Q = node_count if function_count is None else function_count
    if Q < 1 or Q % node_count:
        raise DivisibilityError(f"K must divide Q (K={node_count}, Q={Q})")
    if eta1 < 1:
        raise InstanceError(f"eta1 must be positive, got {eta1}")

    per_node = Q // node_count
    instance = DcInstance(
        node_count=node_count,
        file_count=g * eta1,
        function_count=Q,
        batch_count=g,
        map_assignment=tuple(frozenset(range(g)) - {k % g} for k in range(node_count)),
        reduce_assignment=tuple(frozenset(range(k * per_node, (k + 1) * per_node)) for k in range(node_count)),
        link_capacities=uniform_capacities(capacities, node_count),
    )
    if computation_load(instance) != load:
        raise InvariantViolation(f"family instance has load {computation_load(instance)}, expected {load}")
    return instance


def permute_nodes(instance: DcInstance, perm: Sequence[int]) -> DcInstance:
    """Relabel node ``k`` as ``perm[k]``."""
    K = instance.node_count
    if sorted(perm) != list(range(K)):
        raise ValueError(f"{list(perm)} is not a permutation of range({K})")
    inverse = [0] * K
    for k, p in enumerate(perm):
        inverse[p] = k
    return DcInstance(
        node_count=K,
        file_count=instance.file_count,
        function_count=instance.function_count,
        batch_count=instance.batch_count,
        map_assignment=tuple(instance.map_assignment[inverse[p]] for p in range(K)),
        reduce_assignment=tuple(instance.reduce_assignment[inverse[p]] for p in range(K)),
        link_capacities=tuple(instance.link_capacities[inverse[p]] for p in range(K)),
        t_prime=instance.t_prime,
    )


def describe(instance: DcInstance) -> Dict[str, Any]:
    """Summary figures of a valid instance."""
    r = computation_load(instance)
    return {
        "K": instance.node_count,
        "N": instance.file_count,
        "Q": instance.function_count,
        "F": instance.batch_count,
        "eta1": encode_rational(instance.eta1),
        "eta2": encode_rational(instance.eta2),
        "t": encode_rational(instance.message_bits),
        "r": encode_rational(r),
        "M": int(instance.batch_count * (instance.node_count - r)),
        "receivers_per_node": [instance.batch_count - len(m) for m in instance.map_assignment],
    }


def load_instance_file(path: Union[str, Path]) -> DcInstance:
    try:
        with open(path, "r") as f:
            state = json.load(f)
    except json.JSONDecodeError as e:
        raise InstanceError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(state, dict):
        raise InstanceError(f"{path} does not hold a JSON object")
    return DcInstance.from_json(state)


def iter_pairs(problem: ShuffleProblem) -> Iterable[Tuple[MessageId, int]]:
    """Every (message, sender) pair with the sender holding the message"""
    for m in problem.messages:
        for j in problem.holders(m):
            yield m, j
