""" :mod:`dcshuffle.polytope.simplex`

Exact two-phase primal simplex on sparse ``Fraction`` rows.

Solves ``max c.x  s.t.  A x <= b, x >= 0``. Pivoting follows Bland's rule
(lowest-index entering column, lowest-index leaving basic variable among
ratio ties), so the method terminates on degenerate problems.
"""
import logging
from fractions import Fraction
from typing import Dict
from typing import List
from typing import Mapping
from typing import NamedTuple
from typing import Optional
from typing import Sequence

from dcshuffle.errors import Infeasible
from dcshuffle.errors import Unbounded

logger = logging.getLogger(__name__)

Row = Dict[int, Fraction]


class LpSolution(NamedTuple):
    value: Fraction
    x: List[Fraction]
    pivots: int


class _Tableau:
    """Rows ``x_basis[i] + sum(row[j] x_j) = rhs[i]`` plus an objective row.

    The objective row stores ``z + sum(obj[j] x_j) = obj_value``; the current
    basis is optimal when no ``obj[j]`` is negative.
    """

    def __init__(self, rows: List[Row], rhs: List[Fraction], basis: List[int]) -> None:
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj: Row = {}
        self.obj_value = Fraction(0)
        self.pivots = 0

    def pivot(self, r: int, e: int) -> None:
        row = self.rows[r]
        piv = row[e]
        if piv != 1:
            row = {j: v / piv for j, v in row.items()}
            self.rows[r] = row
            self.rhs[r] /= piv
        b = self.rhs[r]

        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(e)
            if f is None:
                continue
            _axpy(other, -f, row)
            self.rhs[i] -= f * b

        f = self.obj.get(e)
        if f is not None:
            _axpy(self.obj, -f, row)
            self.obj_value -= f * b

        self.basis[r] = e
        self.pivots += 1

    def optimize(self) -> None:
        while True:
            entering = min((j for j, d in self.obj.items() if d < 0), default=None)
            if entering is None:
                return

            best_key = None
            best_row = -1
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best_key is None or key < best_key:
                        best_key = key
                        best_row = i
            if best_key is None:
                raise Unbounded(f"Objective unbounded along column {entering}")
            self.pivot(best_row, entering)

    def set_objective(self, costs: Mapping[int, Fraction]) -> None:
        """Install ``max sum(costs[j] x_j)`` priced out against the basis."""
        self.obj = {j: -c for j, c in costs.items() if c}
        self.obj_value = Fraction(0)
        for i, b in enumerate(self.basis):
            f = self.obj.get(b)
            if f:
                _axpy(self.obj, -f, self.rows[i])
                self.obj_value -= f * self.rhs[i]


def _axpy(target: Row, factor: Fraction, source: Row) -> None:
    """target += factor * source, keeping the row sparse"""
    for j, v in source.items():
        nv = target.get(j, 0) + factor * v
        if nv:
            target[j] = nv
        else:
            target.pop(j, None)


def maximize(
    objective: Mapping[int, Fraction],
    rows: Sequence[Mapping[int, Fraction]],
    rhs: Sequence[Fraction],
    num_vars: int,
) -> LpSolution:
    """Maximize ``objective . x`` subject to ``rows[i] . x <= rhs[i]``, ``x >= 0``.

    Args:
        objective: sparse cost vector over columns ``0..num_vars-1``
        rows: sparse constraint rows over the same columns
        rhs: right-hand sides
        num_vars: number of structural columns

    Raises:
        Infeasible: no ``x >= 0`` satisfies the rows
        Unbounded: the objective is unbounded above
    """
    m = len(rows)
    t_rows: List[Row] = []
    t_rhs: List[Fraction] = []
    basis: List[int] = []
    artificial: List[int] = []

    for i, (row, b) in enumerate(zip(rows, rhs)):
        r = {j: Fraction(v) for j, v in row.items() if v}
        if any(not 0 <= j < num_vars for j in r):
            raise ValueError(f"Row {i} references a column outside 0..{num_vars - 1}")
        slack = num_vars + i
        r[slack] = Fraction(1)
        b = Fraction(b)
        if b >= 0:
            basis.append(slack)
        else:
            r = {j: -v for j, v in r.items()}
            b = -b
            art = num_vars + m + len(artificial)
            r[art] = Fraction(1)
            artificial.append(art)
            basis.append(art)
        t_rows.append(r)
        t_rhs.append(b)

    tab = _Tableau(t_rows, t_rhs, basis)

    if artificial:
        tab.set_objective({a: Fraction(-1) for a in artificial})
        tab.optimize()
        if tab.obj_value < 0:
            raise Infeasible("No nonnegative point satisfies the constraints")
        _drive_out_artificials(tab, first_artificial=num_vars + m)

    tab.set_objective({j: Fraction(v) for j, v in objective.items() if v})
    tab.optimize()

    x = [Fraction(0)] * num_vars
    for i, b in enumerate(tab.basis):
        if b < num_vars:
            x[b] = tab.rhs[i]
    logger.debug(f"LP solved: {num_vars} vars, {m} rows, {tab.pivots} pivots")
    return LpSolution(value=tab.obj_value, x=x, pivots=tab.pivots)


def _drive_out_artificials(tab: _Tableau, first_artificial: int) -> None:
    """Pivot zero-level artificials out of the basis and drop their columns."""
    keep: List[int] = []
    for i in range(len(tab.rows)):
        if tab.basis[i] >= first_artificial:
            col: Optional[int] = min((j for j in tab.rows[i] if j < first_artificial), default=None)
            if col is None:
                continue  # redundant equation
            tab.pivot(i, col)
        keep.append(i)

    tab.rows = [{j: v for j, v in tab.rows[i].items() if j < first_artificial} for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
