"""
Unit tests covering the exact simplex solver.
"""
from fractions import Fraction

import pytest

from dcshuffle.errors import Infeasible
from dcshuffle.errors import Unbounded
from dcshuffle.polytope.simplex import maximize

F = Fraction


def test_two_variable_lp():
    rows = [{0: F(1), 1: F(1)}, {0: F(1), 1: F(3)}, {0: F(1)}]
    sol = maximize({0: F(3), 1: F(2)}, rows, [F(4), F(6), F(3)], 2)
    assert sol.value == 11
    assert sol.x == [F(3), F(1)]


def test_negative_rhs_needs_phase_one():
    # x >= 1, x <= 2
    rows = [{0: F(-1)}, {0: F(1)}]
    sol = maximize({0: F(-1)}, rows, [F(-1), F(2)], 1)
    assert sol.value == -1
    assert sol.x == [F(1)]


def test_fractional_optimum():
    rows = [{0: F(2), 1: F(1)}, {0: F(1), 1: F(2)}]
    sol = maximize({0: F(1), 1: F(1)}, rows, [F(1), F(1)], 2)
    assert sol.value == F(2, 3)
    assert sol.x == [F(1, 3), F(1, 3)]


def test_degenerate_vertex():
    # three rows through the optimum (1, 1)
    rows = [{0: F(1)}, {1: F(1)}, {0: F(1), 1: F(1)}]
    sol = maximize({0: F(1), 1: F(1)}, rows, [F(1), F(1), F(2)], 2)
    assert sol.value == 2


def test_infeasible():
    with pytest.raises(Infeasible):
        maximize({0: F(1)}, [{0: F(1)}], [F(-1)], 1)
    with pytest.raises(Infeasible):
        maximize({}, [{0: F(1)}, {0: F(-1)}], [F(1), F(-2)], 1)


def test_unbounded():
    with pytest.raises(Unbounded):
        maximize({0: F(1)}, [{0: F(-1), 1: F(1)}], [F(0)], 2)


def test_empty_problem():
    sol = maximize({}, [], [], 3)
    assert sol.value == 0
    assert sol.x == [F(0)] * 3


def test_bad_column():
    with pytest.raises(ValueError):
        maximize({}, [{2: F(1)}], [F(1)], 2)
