"""
Unit tests covering the composite-coding inner bound.
"""
import random
from fractions import Fraction

import pytest

from dcshuffle.apps.shuffle_config import ShuffleConfig
from dcshuffle.bounds.inner import achievable
from dcshuffle.bounds.inner import composite_sets
from dcshuffle.bounds.inner import composite_system
from dcshuffle.bounds.inner import composite_variable_count
from dcshuffle.bounds.inner import decoding_strategies
from dcshuffle.bounds.inner import DecodingChoice
from dcshuffle.bounds.inner import default_choice
from dcshuffle.bounds.inner import family_windows
from dcshuffle.bounds.inner import inner_region
from dcshuffle.bounds.inner import LINK
from dcshuffle.bounds.inner import maximal_choice
from dcshuffle.bounds.inner import scheme_certificate
from dcshuffle.bounds.outer import family_outer_region
from dcshuffle.bounds.outer import acyclic_outer_region
from dcshuffle.errors import IncompleteChoice
from dcshuffle.errors import InstanceError
from dcshuffle.errors import MissingCoordinate
from dcshuffle.errors import StrategyExhausted
from dcshuffle.model.instance import DcInstance
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import MessageId
from dcshuffle.model.instance import ShuffleProblem
from dcshuffle.polytope.labels import message_rate
from dcshuffle.polytope.ops import feasible
from dcshuffle.polytope.ops import region_contains
from dcshuffle.polytope.ops import vertices

V0, V1, V2 = MessageId(0, 0), MessageId(1, 1), MessageId(2, 2)


def test_composite_sets(ex1_problem):
    assert composite_sets(ex1_problem, 0) == (
        frozenset({V1}),
        frozenset({V2}),
        frozenset({V1, V2}),
    )
    assert composite_sets(ex1_problem, 0, pair_only=True) == (frozenset({V1, V2}),)
    assert composite_variable_count(ex1_problem) == 15
    assert composite_variable_count(ex1_problem, pair_only=True) == 9


def test_family_windows(ex2_problem):
    windows = family_windows(ex2_problem)
    assert windows[0] == {MessageId(1, 1), MessageId(2, 2)}
    assert windows[5] == {MessageId(0, 0), MessageId(1, 1)}

    bare = ShuffleProblem(messages=ex2_problem.messages, side_info=ex2_problem.side_info, capacities=(1,) * 6)
    with pytest.raises(InstanceError):
        family_windows(bare)


def test_decoding_choices(ex1_problem, ex2_problem):
    choice = default_choice(ex1_problem)
    assert choice.get(V0, 1) == {V0, V2}
    assert choice == maximal_choice(ex1_problem)

    with pytest.raises(IncompleteChoice):
        DecodingChoice.build({}).get(V0, 1)

    assert len(list(decoding_strategies(ex1_problem, "default"))) == 1
    assert len(list(decoding_strategies(ex1_problem, "maximal"))) == 1
    assert len(list(decoding_strategies(ex1_problem, "exhaustive"))) == 64
    assert len(list(decoding_strategies(ex1_problem, "exhaustive", max_choices=10))) == 10

    # ex2 senders hold four messages each: no exhaustive enumeration at cap 3
    assert len(list(decoding_strategies(ex2_problem, "exhaustive"))) == 2

    with pytest.raises(ValueError):
        list(decoding_strategies(ex1_problem, "random"))


def test_composite_system_rows(ex1_problem):
    system = composite_system(ex1_problem, default_choice(ex1_problem))
    assert len(system.provenance) == len(system.polytope.inequalities)
    assert system.message_variables == tuple(message_rate(m) for m in ex1_problem.messages)
    assert len(system.victims) == 15

    link_rows = [row for row, tag in zip(system.polytope.inequalities, system.provenance) if tag == LINK]
    assert len(link_rows) == 6
    assert all(row.rhs == 1 for row in link_rows)


def test_achievable_corner(ex1_problem):
    target = {message_rate(m): Fraction(2) for m in ex1_problem.messages}
    cert = achievable(ex1_problem, target, [default_choice(ex1_problem)])
    assert cert.choice_index == 0

    system = composite_system(ex1_problem, cert.choice)
    assert feasible(system.polytope, cert.assignment)
    assert all(cert.assignment[k] == v for k, v in target.items())
    assert cert.to_json()["choice_index"] == 0


def test_not_achievable(ex1_problem):
    target = {message_rate(V0): Fraction(3), message_rate(V1): Fraction(0), message_rate(V2): Fraction(0)}
    with pytest.raises(StrategyExhausted) as excinfo:
        achievable(ex1_problem, target, [default_choice(ex1_problem)])
    assert len(excinfo.value.summaries) == 1

    with pytest.raises(MissingCoordinate):
        achievable(ex1_problem, {message_rate(V0): Fraction(1)}, [default_choice(ex1_problem)])


def test_pair_only_achieves_family_corner(ex2_problem):
    target = {message_rate(m): Fraction(2) for m in ex2_problem.messages}
    cert = achievable(ex2_problem, target, [default_choice(ex2_problem)], pair_only=True)
    system = composite_system(ex2_problem, cert.choice, pair_only=True)
    assert feasible(system.polytope, cert.assignment)


def test_ex1_inner_equals_outer(ex1_problem):
    region = inner_region(ex1_problem)
    assert len(region.polytopes) == 1
    assert region.polytopes[0] == acyclic_outer_region(ex1_problem)
    assert region.to_json()[0]["choice_index"] == 0


def test_ex1_pair_only_inner(ex1_problem):
    region = inner_region(ex1_problem, ShuffleConfig(pair_only=True))
    assert region.polytopes[0] == family_outer_region(3, 2)


@pytest.mark.parametrize("K, r, rate", [(3, 2, 2), (4, 2, 1), (6, 4, 2), (6, 3, 1), (8, 6, 3)])
def test_scheme_certificate(K, r, rate):
    cert = scheme_certificate(K, r)
    assert set(cert.rates.values()) == {Fraction(rate)}
    assert feasible(cert.system.polytope, cert.assignment)


def test_scheme_certificate_scales_with_capacity():
    cert = scheme_certificate(6, 4, "1/2")
    assert set(cert.rates.values()) == {Fraction(1)}


def _random_instance(rng):
    K = rng.randint(2, 4)
    F = rng.randint(1, 3)
    maps = [frozenset(f for f in range(F) if rng.random() < 0.6) for _ in range(K)]
    return DcInstance(
        node_count=K,
        file_count=F,
        function_count=K,
        batch_count=F,
        map_assignment=tuple(maps),
        reduce_assignment=tuple(frozenset({k}) for k in range(K)),
        link_capacities=tuple(rng.choice(["0", "1/2", "1", "2"]) for _ in range(K)),
    )


def test_inner_inside_outer_on_random_instances():
    rng = random.Random(11)
    accepted = 0
    for _ in range(5000):
        try:
            problem = derive_shuffle_problem(_random_instance(rng))
        except InstanceError:
            continue
        if not 1 <= len(problem.messages) <= 4 or composite_variable_count(problem) > 40:
            continue

        outer = acyclic_outer_region(problem)
        for poly in inner_region(problem).polytopes:
            ok, witness = region_contains(outer, poly)
            assert ok, f"inner vertex {witness} outside the outer bound"
        accepted += 1
        if accepted == 50:
            break
    assert accepted == 50


def test_ex1_boundary_overshoot(ex1_problem):
    corner = {message_rate(m): Fraction(2) for m in ex1_problem.messages}
    over = dict(corner)
    over[message_rate(V2)] = 2 + Fraction(1, 1000)

    choices = list(decoding_strategies(ex1_problem, "exhaustive"))
    assert len(choices) == 64
    assert achievable(ex1_problem, corner, choices).choice_index == 0
    with pytest.raises(StrategyExhausted) as excinfo:
        achievable(ex1_problem, over, choices)
    assert len(excinfo.value.summaries) == 64
    assert not feasible(acyclic_outer_region(ex1_problem), over)


def _covered(point, region):
    return any(feasible(poly, point) for poly in region.polytopes)


def test_inner_union_grows_with_strategy():
    rng = random.Random(23)
    accepted = 0
    for _ in range(5000):
        try:
            problem = derive_shuffle_problem(_random_instance(rng))
        except InstanceError:
            continue
        if not 1 <= len(problem.messages) <= 3 or composite_variable_count(problem) > 24:
            continue

        regions = [
            inner_region(problem, ShuffleConfig(strategy="default")),
            inner_region(problem, ShuffleConfig(strategy="maximal")),
            inner_region(problem, ShuffleConfig(strategy="exhaustive", max_choices=6)),
        ]
        for smaller, larger in zip(regions, regions[1:]):
            assert larger.choices[: len(smaller.choices)] == smaller.choices
            for poly in smaller.polytopes:
                for point in vertices(poly):
                    assert _covered(point, larger), point
        accepted += 1
        if accepted == 15:
            break
    assert accepted == 15
