""" :mod:`dcshuffle.polytope.labels`

Variable labels of rate systems and their text form::

    R[k,f]            rate of message (k,f)
    R[k,f|j]          part of that rate carried by sender j
    G[k1,f1;k2,f2|j]  rate of sender j's composite index over a message set
    x                 free variable (tests and ad-hoc systems)
"""
import functools
import re
from dataclasses import dataclass
from typing import Iterable
from typing import Tuple

from dcshuffle.model.instance import MessageId

MESSAGE = "R"
PARTIAL = "P"
COMPOSITE = "G"
FREE = "X"

# Variable order within a system: message rates, partial rates, composites, free
_KIND_RANK = {MESSAGE: 0, PARTIAL: 1, COMPOSITE: 2, FREE: 3}

_MSG = r"(\d+),(\d+)"
_MESSAGE_RE = re.compile(rf"^R\[{_MSG}\]$")
_PARTIAL_RE = re.compile(rf"^R\[{_MSG}\|(\d+)\]$")
_COMPOSITE_RE = re.compile(r"^G\[([\d,;]+)\|(\d+)\]$")
_FREE_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@functools.total_ordering
@dataclass(frozen=True)
class VarLabel:
    kind: str
    members: Tuple[MessageId, ...] = ()
    sender: int = -1
    name: str = ""

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RANK:
            raise ValueError(f"Unknown variable kind {self.kind!r}")
        if self.kind == COMPOSITE and not self.members:
            raise ValueError("Composite labels need a nonempty message set")

    def sort_key(self) -> Tuple[int, int, int, Tuple[MessageId, ...], int, str]:
        if self.kind == COMPOSITE:
            # per sender, smaller message sets first
            return (_KIND_RANK[self.kind], self.sender, len(self.members), self.members, self.sender, "")
        return (_KIND_RANK[self.kind], 0, 0, self.members, self.sender, self.name)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, VarLabel):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    @property
    def message(self) -> MessageId:
        if self.kind not in (MESSAGE, PARTIAL):
            raise AttributeError(f"{self} is not a per-message rate")
        return self.members[0]

    def __str__(self) -> str:
        if self.kind == MESSAGE:
            return f"R[{self.members[0]}]"
        if self.kind == PARTIAL:
            return f"R[{self.members[0]}|{self.sender}]"
        if self.kind == COMPOSITE:
            return f"G[{';'.join(str(m) for m in self.members)}|{self.sender}]"
        return self.name


def message_rate(message: MessageId) -> VarLabel:
    return VarLabel(MESSAGE, (MessageId(*message),))


def partial_rate(message: MessageId, sender: int) -> VarLabel:
    return VarLabel(PARTIAL, (MessageId(*message),), sender)


def composite_rate(messages: Iterable[MessageId], sender: int) -> VarLabel:
    return VarLabel(COMPOSITE, tuple(sorted(MessageId(*m) for m in messages)), sender)


def free_var(name: str) -> VarLabel:
    if not _FREE_RE.match(name):
        raise ValueError(f"Invalid variable name {name!r}")
    return VarLabel(FREE, name=name)


def parse_label(text: str) -> VarLabel:
    """Inverse of ``str(label)``."""
    s = text.strip()
    match = _MESSAGE_RE.match(s)
    if match:
        return message_rate(MessageId(int(match.group(1)), int(match.group(2))))
    match = _PARTIAL_RE.match(s)
    if match:
        return partial_rate(MessageId(int(match.group(1)), int(match.group(2))), int(match.group(3)))
    match = _COMPOSITE_RE.match(s)
    if match:
        members = []
        for part in match.group(1).split(";"):
            node, _, batch = part.partition(",")
            if not node or not batch:
                raise ValueError(f"Malformed composite label {text!r}")
            members.append(MessageId(int(node), int(batch)))
        return composite_rate(members, int(match.group(2)))
    if _FREE_RE.match(s):
        return free_var(s)
    raise ValueError(f"Cannot parse variable label {text!r}")
