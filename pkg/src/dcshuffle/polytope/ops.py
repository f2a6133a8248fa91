""" :mod:`dcshuffle.polytope.ops`

Exact operations on :class:`HPolytope` systems: projection by
Fourier-Motzkin elimination, redundancy removal, linear programming,
vertex enumeration and containment tests.

Internally rows are ``(coeffs, rhs)`` pairs with ``coeffs`` a sparse
``{column: Fraction}`` map over the system's variable indices.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict
from typing import Iterable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple

import networkx as nx

from dcshuffle.errors import BlowupBudgetExceeded
from dcshuffle.errors import DimensionCapExceeded
from dcshuffle.errors import Infeasible
from dcshuffle.errors import MissingCoordinate
from dcshuffle.errors import Unbounded
from dcshuffle.errors import UnboundedPolytope
from dcshuffle.polytope.hpolytope import HPolytope
from dcshuffle.polytope.hpolytope import LinearInequality
from dcshuffle.polytope.hpolytope import normalize_row
from dcshuffle.polytope.hpolytope import Point
from dcshuffle.polytope.labels import VarLabel
from dcshuffle.polytope.simplex import maximize

logger = logging.getLogger(__name__)

Coeffs = Dict[int, Fraction]
Row = Tuple[Coeffs, Fraction]
RowKey = Tuple[Tuple[Tuple[int, Fraction], ...], Fraction]

DEFAULT_ROW_CAP = 20000
DEFAULT_REDUNDANCY_THRESHOLD = 40
DEFAULT_DIM_CAP = 12


@dataclass(frozen=True)
class LpResult:
    value: Fraction
    point: Point


def _rows(poly: HPolytope) -> List[Row]:
    index = {v: i for i, v in enumerate(poly.variables)}
    return [({index[k]: c for k, c in ineq.coefficients}, ineq.rhs) for ineq in poly.inequalities]


def _to_polytope(variables: Sequence[VarLabel], rows: Iterable[Row]) -> HPolytope:
    ineqs = []
    for coeffs, rhs in rows:
        if coeffs:
            ineqs.append(LinearInequality.build({variables[j]: c for j, c in coeffs.items()}, rhs))
    return HPolytope(variables=tuple(variables), inequalities=tuple(ineqs))


def _key(row: Row) -> RowKey:
    return tuple(sorted(row[0].items())), row[1]


def _clean(rows: Iterable[Row]) -> List[Row]:
    """Normalize, deduplicate and drop rows implied by nonnegativity alone."""
    seen: Dict[RowKey, Row] = {}
    for coeffs, rhs in rows:
        c, b = normalize_row(coeffs, rhs)
        if not c:
            if b < 0:
                raise Infeasible(f"Inconsistent constraint 0 <= {b}")
            continue
        if b >= 0 and all(v <= 0 for v in c.values()):
            continue
        row = (c, b)
        seen.setdefault(_key(row), row)
    return [seen[k] for k in sorted(seen)]


def _dominates(strong: Row, weak: Row) -> bool:
    """``strong`` implies ``weak`` for nonnegative variables."""
    sc, sb = strong
    wc, wb = weak
    if sb > wb:
        return False
    for j, v in sc.items():
        if v < wc.get(j, 0):
            return False
    for j, v in wc.items():
        if j not in sc and v > 0:
            return False
    return True


def _drop_dominated(rows: List[Row]) -> List[Row]:
    by_positive: Dict[int, Set[int]] = {}
    for i, (coeffs, _) in enumerate(rows):
        for j, v in coeffs.items():
            if v > 0:
                by_positive.setdefault(j, set()).add(i)

    everyone = set(range(len(rows)))
    dead: Set[int] = set()
    for i, row in enumerate(rows):
        positive = [j for j, v in row[0].items() if v > 0]
        if positive:
            candidates = set.intersection(*(by_positive[j] for j in positive))
        else:
            candidates = everyone
        for k in sorted(candidates):
            if k != i and k not in dead and _dominates(rows[k], row):
                dead.add(i)
                break
    return [row for i, row in enumerate(rows) if i not in dead]


def _lp_redundancy(rows: List[Row], num_vars: int) -> List[Row]:
    """Drop every row whose lhs cannot exceed its rhs under the remaining rows."""
    alive = list(rows)
    i = 0
    while i < len(alive):
        coeffs, rhs = alive[i]
        others = alive[:i] + alive[i + 1 :]
        try:
            sol = maximize(coeffs, [r[0] for r in others], [r[1] for r in others], num_vars)
            redundant = sol.value <= rhs
        except Unbounded:
            redundant = False
        if redundant:
            del alive[i]
        else:
            i += 1
    return alive


def _prune_dominated_columns(rows: List[Row], candidates: Sequence[int]) -> Tuple[List[Row], Set[int]]:
    """Fix to zero each candidate column that dominates another candidate column.

    If ``col_x >= col_y`` row by row, moving the value of ``x`` onto ``y``
    keeps every row satisfied, so ``x = 0`` loses no projected point.
    """
    cols: Dict[int, Dict[int, Fraction]] = {}
    for i, (coeffs, _) in enumerate(rows):
        for j, v in coeffs.items():
            cols.setdefault(j, {})[i] = v

    eligible = set(candidates)
    pruned: Set[int] = set()
    for x in candidates:
        col_x = cols.get(x, {})
        negative = [i for i, v in col_x.items() if v < 0]
        if not negative:
            continue
        first = min(negative)
        for y in sorted(rows[first][0]):
            if y == x or y not in eligible or y in pruned:
                continue
            col_y = cols[y]
            if col_y.get(first, 0) > col_x[first]:
                continue
            if all(col_x.get(i, 0) >= col_y.get(i, 0) for i in set(col_x) | set(col_y)):
                pruned.add(x)
                break

    if not pruned:
        return rows, pruned
    stripped = [({j: v for j, v in c.items() if j not in pruned}, b) for c, b in rows]
    return _clean(stripped), pruned


def fme_eliminate(
    poly: HPolytope,
    victims: Sequence[VarLabel],
    *,
    row_cap: int = DEFAULT_ROW_CAP,
    redundancy_threshold: int = DEFAULT_REDUNDANCY_THRESHOLD,
    prune_dominated: bool = True,
) -> HPolytope:
    """Project ``poly`` onto its variables other than ``victims``.

    The next variable eliminated is the one with the fewest generated rows
    (positive count times negative count, the nonnegativity bound counted
    as a negative row). After each step rows are normalized, deduplicated
    and filtered for dominance; LP redundancy removal runs once the row
    count passes ``redundancy_threshold`` (the threshold then doubles
    relative to the cleaned size). An infeasible system projects to
    ``HPolytope.empty``.

    Raises:
        BlowupBudgetExceeded: a step generates more than ``row_cap`` rows
    """
    index = {v: i for i, v in enumerate(poly.variables)}
    missing = [str(v) for v in victims if v not in index]
    if missing:
        raise ValueError(f"Cannot eliminate undeclared variables {missing}")

    gone = set(victims)
    kept = [v for v in poly.variables if v not in gone]
    try:
        rows = _eliminate(poly, [index[v] for v in victims], row_cap, redundancy_threshold, prune_dominated)
        if rows:
            maximize({}, [r[0] for r in rows], [r[1] for r in rows], len(poly.variables))
    except Infeasible:
        logger.debug("Eliminated system is empty")
        return HPolytope.empty(kept)

    new_index = {index[v]: i for i, v in enumerate(kept)}
    projected = [({new_index[j]: c for j, c in coeffs.items()}, rhs) for coeffs, rhs in rows]
    return _to_polytope(kept, projected)


def _eliminate(
    poly: HPolytope,
    victims: Sequence[int],
    row_cap: int,
    redundancy_threshold: int,
    prune_dominated: bool,
) -> List[Row]:
    """FME over column indices; raises Infeasible on a contradictory row."""
    if poly.is_empty:
        raise Infeasible("System holds a contradiction")

    num_vars = len(poly.variables)
    remaining = list(dict.fromkeys(victims))
    rows = _rows(poly)

    if prune_dominated and remaining:
        rows, pruned = _prune_dominated_columns(rows, remaining)
        if pruned:
            logger.debug(f"Fixed {len(pruned)} dominated columns to zero")
            remaining = [v for v in remaining if v not in pruned]

    logger.debug(f"Eliminate: {num_vars} -> {num_vars - len(remaining)} columns, {len(rows)} rows")
    threshold = redundancy_threshold
    while remaining:
        pos = {v: 0 for v in remaining}
        neg = {v: 0 for v in remaining}
        for coeffs, _ in rows:
            for j, c in coeffs.items():
                if j in pos:
                    if c > 0:
                        pos[j] += 1
                    else:
                        neg[j] += 1
        col = min(remaining, key=lambda v: pos[v] * (neg[v] + 1))
        remaining.remove(col)
        if not pos[col] and not neg[col]:
            continue

        P: List[Row] = []
        N: List[Row] = []
        new: List[Row] = []
        for row in rows:
            c = row[0].get(col)
            if c is None:
                new.append(row)
            elif c > 0:
                P.append(row)
            else:
                N.append(row)

        for pc, pb in P:
            a = pc[col]
            new.append(({j: v for j, v in pc.items() if j != col}, pb))
            for nc, nb in N:
                b = -nc[col]
                combo = {j: b * v for j, v in pc.items() if j != col}
                for j, v in nc.items():
                    if j != col:
                        combo[j] = combo.get(j, 0) + a * v
                new.append((combo, b * pb + a * nb))

        if len(new) > row_cap:
            logger.warning(f"Elimination produced {len(new)} rows, above the cap of {row_cap}")
            raise BlowupBudgetExceeded(f"Elimination exceeded {row_cap} inequalities")

        rows = _drop_dominated(_clean(new))
        if len(rows) > threshold:
            before = len(rows)
            rows = _lp_redundancy(rows, num_vars)
            threshold = max(redundancy_threshold, 2 * len(rows))
            logger.debug(f"  LP redundancy removal: {before} -> {len(rows)} rows")
        logger.debug(
            f"  {len(remaining):4} left, z={len(rows) - len(P) * (len(N) + 1):5}, "
            f"p+n={len(P) + len(N):4}, p*n={len(P) * len(N):5}"
        )

    return rows


def remove_redundant(poly: HPolytope) -> HPolytope:
    """Minimal canonical description of the same set.

    A system with no nonnegative solution becomes ``HPolytope.empty``.
    """
    if poly.is_empty:
        return HPolytope.empty(poly.variables)
    try:
        rows = _drop_dominated(_clean(_rows(poly)))
        rows = _lp_redundancy(rows, len(poly.variables))
        if rows:
            # row-by-row tests do not detect an empty system
            maximize({}, [r[0] for r in rows], [r[1] for r in rows], len(poly.variables))
    except Infeasible:
        return HPolytope.empty(poly.variables)
    return _to_polytope(poly.variables, rows).canonical()


def lp_max(poly: HPolytope, objective: Mapping[VarLabel, Fraction]) -> LpResult:
    """Exact maximum of ``objective`` over ``poly`` with an optimal point.

    Raises:
        Unbounded, Infeasible
    """
    index = {v: i for i, v in enumerate(poly.variables)}
    unknown = [str(k) for k in objective if k not in index]
    if unknown:
        raise ValueError(f"Objective references undeclared variables {unknown}")
    if poly.is_empty:
        raise Infeasible("System holds a contradiction")
    rows = _rows(poly)
    sol = maximize(
        {index[k]: Fraction(c) for k, c in objective.items()},
        [r[0] for r in rows],
        [r[1] for r in rows],
        len(poly.variables),
    )
    return LpResult(value=sol.value, point=dict(zip(poly.variables, sol.x)))


def feasible(poly: HPolytope, point: Mapping[VarLabel, Fraction]) -> bool:
    """True iff ``point`` satisfies every row and nonnegativity exactly.

    Raises:
        MissingCoordinate: a variable has no coordinate
    """
    coords = poly.coordinates(point)
    if any(x < 0 for x in coords):
        return False
    return all(ineq.holds(point) for ineq in poly.inequalities)


def fixed_feasible_point(
    poly: HPolytope, fixed: Mapping[VarLabel, Fraction], prune_dominated: bool = True
) -> Optional[Point]:
    """A point of ``poly`` agreeing with ``fixed``, or None when there is none."""
    missing = [str(k) for k in fixed if k not in set(poly.variables)]
    if missing:
        raise MissingCoordinate(f"Fixed values for undeclared variables {missing}")

    free = [v for v in poly.variables if v not in fixed]
    index = {v: i for i, v in enumerate(free)}
    rows: List[Row] = []
    for ineq in poly.inequalities:
        coeffs: Coeffs = {}
        rhs = ineq.rhs
        for k, c in ineq.coefficients:
            if k in fixed:
                rhs -= c * Fraction(fixed[k])
            else:
                coeffs[index[k]] = c
        rows.append((coeffs, rhs))

    if any(x < 0 for x in fixed.values()):
        return None
    try:
        rows = _clean(rows)
        if prune_dominated:
            rows, _ = _prune_dominated_columns(rows, list(range(len(free))))
        sol = maximize({}, [r[0] for r in rows], [r[1] for r in rows], len(free))
    except Infeasible:
        return None

    point: Point = {k: Fraction(v) for k, v in fixed.items()}
    point.update(zip(free, sol.x))
    return point


def _solve_square(matrix: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None if singular."""
    n = len(rhs)
    a = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [v - f * w for v, w in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def _blocks(poly: HPolytope) -> List[List[int]]:
    """Variable indices grouped by connected row supports."""
    g = nx.Graph()
    g.add_nodes_from(range(len(poly.variables)))
    for coeffs, _ in _rows(poly):
        cols = sorted(coeffs)
        g.add_edges_from(zip(cols, cols[1:]))
    return sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])


def _block_vertices(rows: List[Row], dim: int) -> List[Tuple[Fraction, ...]]:
    try:
        maximize({j: Fraction(1) for j in range(dim)}, [r[0] for r in rows], [r[1] for r in rows], dim)
    except Unbounded:
        raise UnboundedPolytope("Vertex enumeration needs a bounded polytope") from None
    except Infeasible:
        return []

    constraints = list(rows) + [({j: Fraction(-1)}, Fraction(0)) for j in range(dim)]
    found: Set[Tuple[Fraction, ...]] = set()
    for combo in itertools.combinations(constraints, dim):
        matrix = [[c.get(j, Fraction(0)) for j in range(dim)] for c, _ in combo]
        x = _solve_square(matrix, [b for _, b in combo])
        if x is None or any(v < 0 for v in x):
            continue
        if all(sum((c * x[j] for j, c in coeffs.items()), Fraction(0)) <= b for coeffs, b in rows):
            found.add(tuple(x))
    return sorted(found)


def _vertices_by_block(poly: HPolytope, dim_cap: int) -> Tuple[List[List[int]], List[List[Tuple[Fraction, ...]]]]:
    if len(poly.variables) > dim_cap:
        raise DimensionCapExceeded(f"Dimension {len(poly.variables)} exceeds the cap of {dim_cap}")
    blocks = _blocks(poly)
    all_rows = _rows(poly)
    per_block = []
    for block in blocks:
        local = {j: i for i, j in enumerate(block)}
        rows = [
            ({local[j]: c for j, c in coeffs.items()}, rhs) for coeffs, rhs in all_rows if next(iter(coeffs)) in local
        ]
        per_block.append(_block_vertices(rows, len(block)))
    return blocks, per_block


def _combine(
    poly: HPolytope, blocks: List[List[int]], per_block: List[List[Tuple[Fraction, ...]]]
) -> List[Point]:
    points = []
    for parts in itertools.product(*per_block):
        coords = [Fraction(0)] * len(poly.variables)
        for block, part in zip(blocks, parts):
            for j, v in zip(block, part):
                coords[j] = v
        points.append(tuple(coords))
    return [dict(zip(poly.variables, p)) for p in sorted(points)]


def vertices(poly: HPolytope, dim_cap: int = DEFAULT_DIM_CAP) -> List[Point]:
    """All vertices, sorted lexicographically in variable order.

    Independent variable blocks are enumerated separately and combined.

    Raises:
        DimensionCapExceeded, UnboundedPolytope
    """
    if poly.is_empty:
        return []
    blocks, per_block = _vertices_by_block(poly, dim_cap)
    return _combine(poly, blocks, per_block)


def _pareto_maximal(points: List[Tuple[Fraction, ...]]) -> List[Tuple[Fraction, ...]]:
    return [
        p for p in points if not any(q != p and all(a >= b for a, b in zip(q, p)) for q in points)
    ]


def maximal_vertices(poly: HPolytope, dim_cap: int = DEFAULT_DIM_CAP) -> List[Point]:
    """Componentwise-maximal vertices of a down-closed polytope."""
    if not poly.is_down_closed():
        raise ValueError("Maximal-vertex pruning needs nonnegative coefficients")
    if poly.is_empty:
        return []
    blocks, per_block = _vertices_by_block(poly, dim_cap)
    return _combine(poly, blocks, [_pareto_maximal(p) for p in per_block])


def region_contains(
    outer: HPolytope, inner: HPolytope, dim_cap: int = DEFAULT_DIM_CAP
) -> Tuple[bool, Optional[Point]]:
    """Whether every vertex of ``inner`` lies in ``outer``; else a violating vertex."""
    if set(outer.variables) != set(inner.variables):
        raise ValueError("Containment needs the same variables on both sides")
    for v in vertices(inner, dim_cap):
        if not feasible(outer, v):
            return False, v
    return True, None


def lp_contains(outer: HPolytope, lifted: HPolytope) -> Tuple[bool, Optional[Point]]:
    """Whether the projection of ``lifted`` onto ``outer``'s variables lies in ``outer``.

    Each outer row is maximized over ``lifted``; on failure the optimal
    point restricted to ``outer``'s variables is returned (None when the
    row is unbounded over ``lifted``).
    """
    names = set(lifted.variables)
    missing = [str(v) for v in outer.variables if v not in names]
    if missing:
        raise ValueError(f"Lifted system lacks variables {missing}")
    if lifted.is_empty:
        return True, None
    for ineq in outer.inequalities:
        try:
            res = lp_max(lifted, ineq.as_dict())
        except Unbounded:
            return False, None
        except Infeasible:
            return True, None
        if res.value > ineq.rhs:
            return False, {v: res.point[v] for v in outer.variables}
    return True, None


def symmetric_rate(poly: HPolytope) -> Fraction:
    """Largest ``t`` with every variable equal to ``t`` inside ``poly``.

    Closed form over the rows, no LP: each row with coefficient sum s
    bounds t by rhs/s from above (s > 0) or below (s < 0).

    Raises:
        Unbounded, Infeasible
    """
    low = Fraction(0)
    high: Optional[Fraction] = None
    for ineq in poly.inequalities:
        s = sum((c for _, c in ineq.coefficients), Fraction(0))
        if s > 0:
            bound = ineq.rhs / s
            high = bound if high is None else min(high, bound)
        elif s < 0:
            low = max(low, ineq.rhs / s)
        elif ineq.rhs < 0:
            raise Infeasible("No symmetric point satisfies the system")
    if high is None:
        raise Unbounded("Symmetric rate is unbounded")
    if low > high:
        raise Infeasible("No symmetric point satisfies the system")
    return high


def union_convexity_witness(polys: Sequence[HPolytope], dim_cap: int = DEFAULT_DIM_CAP) -> Optional[Point]:
    """Midpoint of two member vertices that lies in no member, if any.

    None means no such midpoint was found among vertex pairs of distinct
    members (the union may still be non-convex elsewhere).
    """
    if len(polys) < 2:
        return None
    verts = [vertices(p, dim_cap) for p in polys]
    for a, b in itertools.combinations(range(len(polys)), 2):
        for u in verts[a]:
            for w in verts[b]:
                mid = {k: (u[k] + w[k]) / 2 for k in u}
                if not any(feasible(p, mid) for p in polys):
                    return mid
    return None
