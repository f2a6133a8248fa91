""" :mod:`dcshuffle.sim.shuffle_sim`

Finite-length XOR shuffling scheme for the symmetric family.

Each message ``V_k`` is split into ``g-1`` segments of ``L`` IVs, each IV
``t'`` bits wide. Sender
``j`` broadcasts ``Y_j``, the XOR of segment ``i`` of ``V_(j+i) mod K`` over
``i = 1..g-1``. Receiver ``k`` gets segment ``u`` of its message from sender
``(k-u) mod K`` by cancelling the other segments with its side information.
"""
import json
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from dcshuffle.bounds.inner import scheme_certificate
from dcshuffle.bounds.outer import family_messages
from dcshuffle.bounds.outer import family_outer_region
from dcshuffle.dtypes.bitstring import bits_to_int
from dcshuffle.dtypes.bitstring import BitArray
from dcshuffle.dtypes.bitstring import encode_bits
from dcshuffle.dtypes.rational import encode_rational
from dcshuffle.errors import InstanceError
from dcshuffle.errors import InvariantViolation
from dcshuffle.errors import NonuniformCapacity
from dcshuffle.model.instance import Capacities
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import family_period
from dcshuffle.model.instance import gen_family
from dcshuffle.model.instance import uniform_capacities
from dcshuffle.polytope.labels import message_rate
from dcshuffle.utils.pool import thread_map

logger = logging.getLogger(__name__)

# (message node, segment index), segments counted from 1
Component = Tuple[int, int]


@dataclass(frozen=True)
class CodedShuffleScheme:
    node_count: int
    load: int
    period: int
    segment_bits: int
    plan: Tuple[Tuple[Component, ...], ...]
    t_prime: int = 1

    @property
    def word_bits(self) -> int:
        """Bits per segment and per transmission"""
        return self.segment_bits * self.t_prime

    @property
    def message_bits(self) -> int:
        return (self.period - 1) * self.word_bits

    def carrier(self, node: int, segment: int) -> int:
        """Sender whose word carries ``segment`` of ``V_node``"""
        return (node - segment) % self.node_count

    def to_json(self) -> Dict[str, Any]:
        return {
            "K": self.node_count,
            "r": self.load,
            "g": self.period,
            "L": self.segment_bits,
            "t_prime": self.t_prime,
            "plan": [[f"seg{i}(V{k})" for k, i in row] for row in self.plan],
        }


def build_scheme(node_count: int, load: int, segment_bits: int, t_prime: int = 1) -> CodedShuffleScheme:
    """Plan the family scheme and check it before returning.

    Raises:
        DivisibilityError: K-r does not divide K
        ValueError: segment_bits < 1 or t_prime < 1
    """
    g = family_period(node_count, load)
    if segment_bits < 1:
        raise ValueError(f"Segment length must be at least 1 IV, got {segment_bits}")
    if t_prime < 1:
        raise ValueError(f"IV width t_prime must be at least 1 bit, got {t_prime}")

    K = node_count
    plan = tuple(tuple(((j + i) % K, i) for i in range(1, g)) for j in range(K))
    scheme = CodedShuffleScheme(
        node_count=K, load=load, period=g, segment_bits=segment_bits, plan=plan, t_prime=t_prime
    )

    # every (message, segment) carried exactly once, by the expected sender
    counts = Counter(c for row in plan for c in row)
    expected = {(k, i) for k in range(K) for i in range(1, g)}
    if set(counts) != expected or any(n != 1 for n in counts.values()):
        raise InvariantViolation("Scheme does not carry every message segment exactly once")
    for j, row in enumerate(plan):
        for k, i in row:
            if scheme.carrier(k, i) != j:
                raise InvariantViolation(f"Segment {i} of V{k} carried by sender {j}")

    # every sender holds what it XORs
    problem = derive_shuffle_problem(gen_family(K, load))
    own = dict(zip(range(K), family_messages(K, load)))
    for j, row in enumerate(plan):
        for k, _ in row:
            if own[k] not in problem.side_info[j]:
                raise InvariantViolation(f"Sender {j} XORs V{k} without holding it")

    logger.debug(f"Built XOR scheme K={K} r={load} g={g} L={segment_bits} t'={t_prime}")
    return scheme


@dataclass(frozen=True)
class ShuffleTranscript:
    scheme: CodedShuffleScheme
    seed: int
    messages: Tuple[BitArray, ...]
    transmissions: Tuple[BitArray, ...]
    decoded: Tuple[BitArray, ...]
    verdicts: Tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.verdicts)

    def to_json(self) -> Dict[str, Any]:
        s = self.scheme
        return {
            "seed": self.seed,
            "K": s.node_count,
            "r": s.load,
            "g": s.period,
            "L": s.segment_bits,
            "t_prime": s.t_prime,
            "message_bits": s.message_bits,
            "messages": [encode_bits(v) for v in self.messages],
            "transmissions": [encode_bits(y) for y in self.transmissions],
            "decoded": [encode_bits(d) for d in self.decoded],
            "verdicts": list(self.verdicts),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _segment(word: BitArray, index: int, length: int) -> BitArray:
    return word[(index - 1) * length : index * length]


def run(scheme: CodedShuffleScheme, seed: int) -> ShuffleTranscript:
    """Encode seeded random messages, broadcast and decode at every receiver.

    A receiver that cannot decode gets a zero segment and a false verdict.
    """
    K, g, L = scheme.node_count, scheme.period, scheme.word_bits
    rng = np.random.default_rng(seed)
    messages = rng.integers(0, 2, size=(K, scheme.message_bits), dtype=np.uint8)

    transmissions = []
    for row in scheme.plan:
        y = np.zeros(L, dtype=np.uint8)
        for k, i in row:
            np.bitwise_xor(y, _segment(messages[k], i, L), out=y)
        transmissions.append(y)

    decoded = []
    verdicts = []
    for k in range(K):
        # node k computes V_x for every x outside its residue class
        known = {x for x in range(K) if (x - k) % g}
        out = np.zeros(scheme.message_bits, dtype=np.uint8)
        ok = True
        for u in range(1, g):
            j = scheme.carrier(k, u)
            word = transmissions[j].copy()
            for x, i in scheme.plan[j]:
                if x == k:
                    continue
                if x not in known:
                    logger.error(f"Receiver {k} lacks V{x} needed to read sender {j}")
                    ok = False
                    break
                np.bitwise_xor(word, _segment(messages[x], i, L), out=word)
            else:
                out[(u - 1) * L : u * L] = word
        ok = ok and bool(np.array_equal(out, messages[k]))
        decoded.append(out)
        verdicts.append(ok)

    if not all(verdicts):
        logger.error(f"Seed {seed}: receivers {[k for k, v in enumerate(verdicts) if not v]} failed")
    return ShuffleTranscript(
        scheme=scheme,
        seed=seed,
        messages=tuple(messages),
        transmissions=tuple(transmissions),
        decoded=tuple(decoded),
        verdicts=tuple(verdicts),
    )


def run_seeds(scheme: CodedShuffleScheme, seeds: Sequence[int], threads: int = 1) -> List[ShuffleTranscript]:
    return thread_map(lambda s: run(scheme, s), list(seeds), threads)


def replay_decode(transcript: Dict[str, Any]) -> List[bool]:
    """Decode an exported transcript from its hex strings alone.

    Works on integers: a message is ``(g-1)*L*t'`` bits, segment 1 most
    significant. Returns per receiver whether the decoded message equals
    the exported original.
    """
    K = int(transcript["K"])
    g = int(transcript["g"])
    L = int(transcript["L"]) * int(transcript.get("t_prime", 1))
    nbits = (g - 1) * L
    mask = (1 << L) - 1

    V = [bits_to_int(h, nbits) for h in transcript["messages"]]
    Y = [bits_to_int(h, L) for h in transcript["transmissions"]]

    def seg(value: int, i: int) -> int:
        return (value >> ((g - 1 - i) * L)) & mask

    result = []
    for k in range(K):
        value = 0
        ok = True
        for u in range(1, g):
            j = (k - u) % K
            w = Y[j]
            for i in range(1, g):
                x = (j + i) % K
                if x == k:
                    continue
                if (x - k) % g == 0:
                    ok = False
                w ^= seg(V[x], i)
            value = (value << L) | w
        result.append(ok and value == V[k])
    return result


@dataclass(frozen=True)
class RateReport:
    node_count: int
    load: int
    capacity: Fraction
    blocklength: Fraction
    rate: Fraction
    satisfies_outer: bool
    binds: bool
    identity_holds: bool
    certified: bool

    @property
    def ok(self) -> bool:
        return self.satisfies_outer and self.binds and self.identity_holds and self.certified

    def to_json(self) -> Dict[str, Any]:
        return {
            "K": self.node_count,
            "r": self.load,
            "C": encode_rational(self.capacity),
            "blocklength": encode_rational(self.blocklength),
            "rates": [encode_rational(self.rate)] * self.node_count,
            "satisfies_outer": self.satisfies_outer,
            "binds": self.binds,
            "identity_holds": self.identity_holds,
            "certified": self.certified,
        }


def rate_report(
    scheme: CodedShuffleScheme,
    capacities: Capacities = 1,
    certify: bool = True,
) -> RateReport:
    """Rates achieved by ``scheme`` over links of capacity C.

    One transmission of Lt' bits takes n = Lt'/C channel uses, so each
    message of (g-1)Lt' bits arrives at rate (g-1)C whatever t' is.

    Raises:
        NonuniformCapacity: the links differ in capacity
        ValueError: C is not positive
    """
    K, r, g, L = scheme.node_count, scheme.load, scheme.period, scheme.word_bits
    caps = uniform_capacities(capacities, K)
    if len(set(caps)) > 1:
        raise NonuniformCapacity(f"Explicit scheme needs uniform capacities, got {sorted(set(caps))}")
    C = caps[0]
    if C <= 0:
        raise ValueError(f"Capacity must be positive, got {C}")

    n = Fraction(L) / C
    rate = (g - 1) * L / n
    outer = family_outer_region(K, r, C)
    point = {message_rate(m): rate for m in family_messages(K, r)}

    certified = True
    if certify:
        try:
            cert = scheme_certificate(K, r, C)
        except (InstanceError, InvariantViolation) as e:
            logger.error(f"Scheme certificate failed: {e}")
            certified = False
        else:
            certified = all(v == rate for v in cert.rates.values())

    return RateReport(
        node_count=K,
        load=r,
        capacity=C,
        blocklength=n,
        rate=rate,
        satisfies_outer=all(ineq.holds(point) for ineq in outer.inequalities),
        binds=all(ineq.lhs(point) == ineq.rhs for ineq in outer.inequalities),
        identity_holds=(K - r) * (g - 1) == r,
        certified=certified,
    )


def simulation_summary(
    scheme: CodedShuffleScheme,
    transcripts: Sequence[ShuffleTranscript],
    report: Optional[RateReport] = None,
) -> Dict[str, Any]:
    """Aggregate of a multi-seed run, with replay checks"""
    replayed = [all(replay_decode(t.to_json())) for t in transcripts]
    return {
        "scheme": scheme.to_json(),
        "seeds": [t.seed for t in transcripts],
        "exact": sum(1 for t in transcripts if t.ok),
        "replay_exact": sum(replayed),
        "runs": len(transcripts),
        "rate": report.to_json() if report is not None else None,
    }
