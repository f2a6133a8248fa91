""" :mod:`dcshuffle.polytope.hpolytope`

Exact linear-inequality systems ``a.x <= b`` over labelled, nonnegative
variables.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import Iterable
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from dcshuffle.dtypes.rational import as_rational
from dcshuffle.dtypes.rational import encode_rational
from dcshuffle.dtypes.rational import RationalLike
from dcshuffle.errors import MissingCoordinate
from dcshuffle.polytope.labels import parse_label
from dcshuffle.polytope.labels import VarLabel

Point = Dict[VarLabel, Fraction]


def normalize_row(coeffs: Mapping[Any, Fraction], rhs: Fraction) -> Tuple[Dict[Any, Fraction], Fraction]:
    """Scale a row by a positive factor to coprime integer coefficients.

    Zero coefficients are dropped. The rhs takes part in the gcd.
    """
    items = {k: Fraction(v) for k, v in coeffs.items() if v}
    values = list(items.values()) + [Fraction(rhs)]
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = 0
    for n in ints:
        g = math.gcd(g, n)
    if g == 0:
        return {}, Fraction(0)
    scale = Fraction(lcm, g)
    return {k: v * scale for k, v in items.items()}, Fraction(rhs) * scale


@dataclass(frozen=True)
class LinearInequality:
    """``sum(coeff * var) <= rhs`` with only nonzero coefficients stored."""

    coefficients: Tuple[Tuple[VarLabel, Fraction], ...]
    rhs: Fraction

    @classmethod
    def build(cls, coeffs: Mapping[VarLabel, RationalLike], rhs: RationalLike) -> "LinearInequality":
        items = {k: as_rational(v) for k, v in coeffs.items()}
        items = {k: v for k, v in items.items() if v}
        if not items:
            raise ValueError("An inequality needs at least one nonzero coefficient")
        return cls(coefficients=tuple(sorted(items.items())), rhs=as_rational(rhs))

    @classmethod
    def contradiction(cls) -> "LinearInequality":
        """The row ``0 <= -1``, satisfied by no point"""
        return cls(coefficients=(), rhs=Fraction(-1))

    @property
    def is_contradiction(self) -> bool:
        return not self.coefficients and self.rhs < 0

    @property
    def support(self) -> Tuple[VarLabel, ...]:
        return tuple(k for k, _ in self.coefficients)

    def as_dict(self) -> Dict[VarLabel, Fraction]:
        return dict(self.coefficients)

    def coeff(self, label: VarLabel) -> Fraction:
        return self.as_dict().get(label, Fraction(0))

    def lhs(self, point: Mapping[VarLabel, Fraction]) -> Fraction:
        return sum((v * point[k] for k, v in self.coefficients), Fraction(0))

    def holds(self, point: Mapping[VarLabel, Fraction]) -> bool:
        return self.lhs(point) <= self.rhs

    def normalized(self) -> "LinearInequality":
        coeffs, rhs = normalize_row(self.as_dict(), self.rhs)
        return LinearInequality(coefficients=tuple(sorted(coeffs.items())), rhs=rhs)

    def to_text(self) -> str:
        if not self.coefficients:
            return f"0 <= {self.rhs}"
        parts = []
        for i, (label, c) in enumerate(self.coefficients):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = str(label) if mag == 1 else f"{mag}*{label}"
            if i == 0:
                parts.append(term if sign == "+" else f"-{term}")
            else:
                parts.append(f"{sign} {term}")
        return f"{' '.join(parts)} <= {self.rhs}"

    def to_json(self) -> Dict[str, Any]:
        return {
            "coeffs": {str(k): encode_rational(v) for k, v in self.coefficients},
            "rhs": encode_rational(self.rhs),
        }

    @classmethod
    def from_json(cls, state: Mapping[str, Any]) -> "LinearInequality":
        if not state["coeffs"]:
            return cls(coefficients=(), rhs=as_rational(state["rhs"]))
        return cls.build({parse_label(k): v for k, v in state["coeffs"].items()}, state["rhs"])


@dataclass(frozen=True)
class HPolytope:
    """Inequality system over ``variables``; all variables are nonnegative."""

    variables: Tuple[VarLabel, ...]
    inequalities: Tuple[LinearInequality, ...] = ()
    nonneg: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        if not self.nonneg:
            raise ValueError("Only nonnegative systems are supported")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("Variable labels must be unique")
        known = set(self.variables)
        for ineq in self.inequalities:
            unknown = [str(k) for k in ineq.support if k not in known]
            if unknown:
                raise ValueError(f"Inequality references undeclared variables {unknown}")

    @classmethod
    def empty(cls, variables: Iterable[VarLabel]) -> "HPolytope":
        """Canonical system with no solution"""
        return cls(variables=tuple(variables), inequalities=(LinearInequality.contradiction(),))

    @property
    def is_empty(self) -> bool:
        """True when the system carries an explicit contradiction"""
        return any(ineq.is_contradiction for ineq in self.inequalities)

    @classmethod
    def build(
        cls,
        variables: Iterable[VarLabel],
        rows: Iterable[Tuple[Mapping[VarLabel, RationalLike], RationalLike]],
    ) -> "HPolytope":
        return cls(
            variables=tuple(variables),
            inequalities=tuple(LinearInequality.build(c, b) for c, b in rows),
        )

    def row_key(self, ineq: LinearInequality) -> Tuple[Any, ...]:
        d = ineq.as_dict()
        return tuple(-d.get(v, Fraction(0)) for v in self.variables) + (ineq.rhs,)

    def canonical(self) -> "HPolytope":
        """Rows scaled to coprime integers, deduplicated and sorted."""
        if self.is_empty:
            return HPolytope.empty(self.variables)
        rows = {}
        for ineq in self.inequalities:
            n = ineq.normalized()
            rows[n] = None
        return HPolytope(
            variables=self.variables,
            inequalities=tuple(sorted(rows, key=self.row_key)),
        )

    def with_inequalities(self, inequalities: Iterable[LinearInequality]) -> "HPolytope":
        return HPolytope(variables=self.variables, inequalities=tuple(inequalities))

    def point(self, values: Sequence[RationalLike]) -> Point:
        """Point from coordinates listed in variable order."""
        if len(values) != len(self.variables):
            raise ValueError(f"{len(values)} coordinates for {len(self.variables)} variables")
        return {k: as_rational(v) for k, v in zip(self.variables, values)}

    def coordinates(self, point: Mapping[VarLabel, Fraction]) -> Tuple[Fraction, ...]:
        missing = [str(v) for v in self.variables if v not in point]
        if missing:
            raise MissingCoordinate(f"Point lacks coordinates for {missing}")
        return tuple(point[v] for v in self.variables)

    def is_down_closed(self) -> bool:
        """All coefficients nonnegative (with nonneg variables the set is down-closed)."""
        return all(c >= 0 for ineq in self.inequalities for _, c in ineq.coefficients)

    def to_text(self) -> str:
        return "\n".join(ineq.to_text() for ineq in self.inequalities)

    def to_json(self) -> Dict[str, Any]:
        return {
            "vars": [str(v) for v in self.variables],
            "ineqs": [ineq.to_json() for ineq in self.inequalities],
        }

    @classmethod
    def from_json(cls, state: Mapping[str, Any]) -> "HPolytope":
        return cls(
            variables=tuple(parse_label(v) for v in state["vars"]),
            inequalities=tuple(LinearInequality.from_json(i) for i in state["ineqs"]),
        )


def format_point(point: Optional[Mapping[VarLabel, Fraction]]) -> Optional[Dict[str, str]]:
    if point is None:
        return None
    return {str(k): encode_rational(v) for k, v in sorted(point.items())}
