"""
Unit tests covering inequality systems and exact polytope operations.
"""
import random
from fractions import Fraction

import pytest

from dcshuffle.errors import DimensionCapExceeded
from dcshuffle.errors import Infeasible
from dcshuffle.errors import MissingCoordinate
from dcshuffle.errors import UnboundedPolytope
from dcshuffle.model.instance import MessageId
from dcshuffle.polytope.hpolytope import HPolytope
from dcshuffle.polytope.hpolytope import LinearInequality
from dcshuffle.polytope.labels import composite_rate
from dcshuffle.polytope.labels import free_var
from dcshuffle.polytope.labels import message_rate
from dcshuffle.polytope.labels import parse_label
from dcshuffle.polytope.labels import partial_rate
from dcshuffle.polytope.ops import feasible
from dcshuffle.polytope.ops import fixed_feasible_point
from dcshuffle.polytope.ops import fme_eliminate
from dcshuffle.polytope.ops import lp_contains
from dcshuffle.polytope.ops import lp_max
from dcshuffle.polytope.ops import maximal_vertices
from dcshuffle.polytope.ops import region_contains
from dcshuffle.polytope.ops import remove_redundant
from dcshuffle.polytope.ops import symmetric_rate
from dcshuffle.polytope.ops import union_convexity_witness
from dcshuffle.polytope.ops import vertices

F = Fraction
x, y, z = free_var("x"), free_var("y"), free_var("z")


def box(*rows, variables=(x, y)):
    return HPolytope.build(variables, rows)


def test_labels():
    m = MessageId(3, 0)
    assert str(message_rate(m)) == "R[3,0]"
    assert str(partial_rate(m, 1)) == "R[3,0|1]"
    g = composite_rate([MessageId(1, 1), MessageId(0, 0)], 2)
    assert str(g) == "G[0,0;1,1|2]"
    assert parse_label("G[0,0;1,1|2]") == g
    assert parse_label("R[3,0|1]") == partial_rate(m, 1)

    ordered = sorted([free_var("a"), g, partial_rate(m, 1), message_rate(m)])
    assert [label.kind for label in ordered] == ["R", "P", "G", "X"]

    with pytest.raises(ValueError):
        parse_label("Q[1]")


def test_inequality_text():
    a, b = message_rate(MessageId(0, 0)), message_rate(MessageId(3, 0))
    ineq = LinearInequality.build({b: 1, a: 1}, 4)
    assert ineq.to_text() == "R[0,0] + R[3,0] <= 4"
    assert LinearInequality.build({a: F(1, 2), b: -2}, F(3, 2)).to_text() == "1/2*R[0,0] - 2*R[3,0] <= 3/2"

    with pytest.raises(ValueError):
        LinearInequality.build({a: 0}, 1)


def test_canonical_form():
    poly = box(({x: 2, y: 2}, 4), ({x: 1, y: 1}, 2), ({x: F(1, 3)}, 1))
    canon = poly.canonical()
    assert canon.to_text() == "x + y <= 2\nx <= 3"

    with pytest.raises(ValueError):
        HPolytope.build([x], [({y: 1}, 1)])
    with pytest.raises(ValueError):
        HPolytope(variables=(x, x))


def test_polytope_json():
    poly = box(({x: 1, y: F(1, 2)}, F(3, 4)))
    state = poly.to_json()
    assert state == {"vars": ["x", "y"], "ineqs": [{"coeffs": {"x": "1/1", "y": "1/2"}, "rhs": "3/4"}]}
    assert HPolytope.from_json(state) == poly


def test_fme_small():
    poly = HPolytope.build(
        [x, y, z],
        [({x: 1, z: -1}, 0), ({z: 1}, 2), ({y: 1, z: 1}, 3)],
    )
    projected = fme_eliminate(poly, [z])
    assert projected.variables == (x, y)
    expected = box(({x: 1}, 2), ({x: 1, y: 1}, 3))
    assert remove_redundant(projected) == remove_redundant(expected)


def test_fme_unknown_victim():
    with pytest.raises(ValueError):
        fme_eliminate(box(({x: 1}, 1)), [z])


def test_fme_empty_projection():
    poly = box(({x: 1}, 1), ({x: -1}, -2), ({y: 1}, 1))
    projected = fme_eliminate(poly, [x])
    assert projected == HPolytope.empty([y])
    assert projected.is_empty
    assert projected.to_text() == "0 <= -1"
    assert HPolytope.from_json(projected.to_json()) == projected

    assert not feasible(projected, {y: F(0)})
    assert vertices(projected) == []
    with pytest.raises(Infeasible):
        lp_max(projected, {y: F(1)})

    segment = HPolytope.build([y], [({y: 1}, 1)])
    assert region_contains(segment, projected) == (True, None)
    assert region_contains(projected, segment) == (False, {y: F(0)})
    assert lp_contains(segment, HPolytope.empty([y, z])) == (True, None)

    # contradiction only visible once every variable is gone
    assert fme_eliminate(box(({x: 1, y: 1}, -1)), [y]).is_empty
    assert fme_eliminate(box(({x: 1}, -1)), []).is_empty


def test_remove_redundant():
    poly = box(({x: 1}, 1), ({y: 1}, 1), ({x: 1, y: 1}, 3), ({x: 2, y: 2}, 4))
    assert remove_redundant(poly).to_text() == "x <= 1\ny <= 1"

    assert remove_redundant(box(({x: 1}, 1), ({x: -1}, -2))) == HPolytope.empty([x, y])


def test_lp_max_and_feasible():
    poly = box(({x: 1, y: 1}, 4), ({x: 1}, 3))
    res = lp_max(poly, {x: 1, y: 2})
    assert res.value == 8
    assert res.point == {x: F(0), y: F(4)}

    assert feasible(poly, {x: F(3), y: F(1)})
    assert not feasible(poly, {x: F(3), y: F(2)})
    assert not feasible(poly, {x: F(-1), y: F(0)})
    with pytest.raises(MissingCoordinate):
        feasible(poly, {x: F(1)})


def test_vertices():
    tri = box(({x: 1, y: 1}, 1))
    assert [tri.coordinates(v) for v in vertices(tri)] == [(0, 0), (0, 1), (1, 0)]
    assert [tri.coordinates(v) for v in maximal_vertices(tri)] == [(0, 1), (1, 0)]

    rect = box(({x: 1}, 1), ({y: 1}, 2))
    assert len(vertices(rect)) == 4
    assert [rect.coordinates(v) for v in maximal_vertices(rect)] == [(1, 2)]

    with pytest.raises(UnboundedPolytope):
        vertices(box(({x: 1}, 1)))
    with pytest.raises(DimensionCapExceeded):
        vertices(tri, dim_cap=1)
    with pytest.raises(ValueError):
        maximal_vertices(box(({x: 1, y: -1}, 1), ({y: 1}, 1)))


def test_region_contains():
    outer = box(({x: 1, y: 1}, 2))
    assert region_contains(outer, box(({x: 1}, 1), ({y: 1}, 1))) == (True, None)

    ok, witness = region_contains(outer, box(({x: 1}, 2), ({y: 1}, 1)))
    assert not ok
    assert witness == {x: F(2), y: F(1)}


def test_lp_contains():
    outer = HPolytope.build([x], [({x: 1}, 1)])
    lifted = HPolytope.build([x, z], [({x: 1, z: -1}, 0), ({z: 1}, 1)])
    assert lp_contains(outer, lifted) == (True, None)

    loose = HPolytope.build([x, z], [({x: 1, z: -1}, 0), ({z: 1}, 2)])
    ok, witness = lp_contains(outer, loose)
    assert not ok
    assert witness == {x: F(2)}


def test_symmetric_rate():
    assert symmetric_rate(box(({x: 1, y: 1}, 4), ({x: 1}, 3))) == 2
    assert symmetric_rate(box(({x: 1, y: -1}, 1), ({y: 3}, 1))) == F(1, 3)


def test_union_convexity_witness():
    horizontal = box(({x: 1}, 1), ({y: 1}, 0))
    vertical = box(({x: 1}, 0), ({y: 1}, 1))
    assert union_convexity_witness([horizontal, vertical]) == {x: F(1, 2), y: F(1, 2)}
    assert union_convexity_witness([horizontal]) is None
    assert union_convexity_witness([horizontal, horizontal]) is None


def test_fixed_feasible_point():
    poly = HPolytope.build([x, z], [({x: 1, z: -1}, 0), ({z: 1}, 2)])
    point = fixed_feasible_point(poly, {x: F(2)})
    assert point == {x: F(2), z: F(2)}
    assert fixed_feasible_point(poly, {x: F(3)}) is None
    assert fixed_feasible_point(poly, {x: F(-1)}) is None
    with pytest.raises(MissingCoordinate):
        fixed_feasible_point(poly, {y: F(0)})


def _random_system(rng, dim, max_rows=5):
    names = [free_var(f"v{i}") for i in range(dim)]
    rows = []
    for _ in range(rng.randint(2, max_rows)):
        coeffs = {v: rng.randint(-3, 3) for v in names}
        if not any(coeffs.values()):
            coeffs[names[0]] = 1
        rows.append((coeffs, rng.randint(-3, 6)))
    # keep the system bounded
    rows += [({v: 1}, 3) for v in names]
    return HPolytope.build(names, rows)


def test_lp_max_matches_vertices():
    rng = random.Random(2024)
    for _ in range(200):
        poly = _random_system(rng, rng.randint(2, 4))
        objective = {v: F(rng.randint(-3, 3)) for v in poly.variables}
        points = vertices(poly)
        if not points:
            with pytest.raises(Infeasible):
                lp_max(poly, objective)
            continue
        best = max(sum((c * p[v] for v, c in objective.items()), F(0)) for p in points)
        assert lp_max(poly, objective).value == best


def test_projection_matches_lift_search():
    rng = random.Random(7)
    for _ in range(200):
        dim = rng.randint(2, 5)
        poly = _random_system(rng, dim, max_rows=8)
        victims = poly.variables[rng.randint(1, dim - 1) :]
        projected = fme_eliminate(poly, victims, redundancy_threshold=4)
        kept = projected.variables
        if fixed_feasible_point(poly, {}, prune_dominated=False) is None:
            assert projected.is_empty
            continue
        assert not projected.is_empty

        grid = [F(0), F(1), F(3, 2), F(3)]
        points = [{}]
        for v in kept:
            points = [dict(p, **{v.name: c}) for p in points for c in grid]
        for named in points:
            point = {v: named[v.name] for v in kept}
            lifted = fixed_feasible_point(poly, point, prune_dominated=False)
            assert feasible(projected, point) == (lifted is not None)
