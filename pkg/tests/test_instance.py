"""
Unit tests covering MapReduce instances and the derived shuffle problem.
"""
import json
from fractions import Fraction

import pytest

from dcshuffle.errors import DivisibilityError
from dcshuffle.errors import InstanceError
from dcshuffle.model.instance import computation_load
from dcshuffle.model.instance import DcInstance
from dcshuffle.model.instance import derive_shuffle_problem
from dcshuffle.model.instance import describe
from dcshuffle.model.instance import ensure_valid
from dcshuffle.model.instance import family_period
from dcshuffle.model.instance import gen_family
from dcshuffle.model.instance import load_instance_file
from dcshuffle.model.instance import MessageId
from dcshuffle.model.instance import permute_nodes
from dcshuffle.model.instance import uniform_capacities
from dcshuffle.model.instance import validate


def test_ex1_problem(ex1_instance, ex1_problem):
    assert computation_load(ex1_instance) == 2
    assert ex1_problem.messages == (MessageId(0, 0), MessageId(1, 1), MessageId(2, 2))
    assert ex1_problem.side_info[0] == {MessageId(1, 1), MessageId(2, 2)}
    assert ex1_problem.side_info[1] == {MessageId(0, 0), MessageId(2, 2)}
    assert ex1_problem.holders(MessageId(0, 0)) == (1, 2)
    assert ex1_problem.shared(0, 1) == {MessageId(2, 2)}


def test_ex2_problem(ex2_instance, ex2_problem):
    assert computation_load(ex2_instance) == 4
    assert len(ex2_problem.messages) == 6
    # node 0 computes every message outside its residue class mod 3
    assert ex2_problem.side_info[0] == {
        MessageId(1, 1),
        MessageId(2, 2),
        MessageId(4, 1),
        MessageId(5, 2),
    }
    assert ex2_problem.wanted_by(3) == (MessageId(3, 0),)


def test_describe(ex1_instance, ex2_instance):
    s = describe(ex1_instance)
    assert (s["K"], s["N"], s["Q"], s["F"], s["M"]) == (3, 6, 3, 3, 3)
    assert s["r"] == "2/1"
    assert s["eta1"] == "2/1"
    assert s["t"] == "2/1"
    assert s["receivers_per_node"] == [1, 1, 1]

    s = describe(ex2_instance)
    assert (s["r"], s["M"]) == ("4/1", 6)


def test_message_text():
    assert str(MessageId(3, 0)) == "3,0"


def test_family_period():
    assert family_period(6, 4) == 3
    assert family_period(4, 2) == 2
    assert family_period(8, 7) == 8

    with pytest.raises(DivisibilityError, match="K-r must divide K"):
        family_period(5, 2)
    with pytest.raises(DivisibilityError):
        family_period(4, 4)


def test_gen_family_checks():
    with pytest.raises(DivisibilityError):
        gen_family(4, 2, function_count=6)
    with pytest.raises(InstanceError):
        gen_family(4, 2, eta1=0)

    inst = gen_family(4, 2, capacities=["1", "1/2", 2, 0])
    assert inst.link_capacities == (Fraction(1), Fraction(1, 2), Fraction(2), Fraction(0))


def test_validate_reports_every_violation():
    inst = DcInstance(
        node_count=2,
        file_count=3,
        function_count=2,
        batch_count=2,
        map_assignment=({0}, {0}),
        reduce_assignment=({0}, {0}),
        link_capacities=(1, "-1"),
    )
    problems = validate(inst)
    codes = [p.code for p in problems]
    assert codes == [
        "batch-divisibility",
        "unmapped-batch",
        "reduce-overlap",
        "reduce-coverage",
        "negative-capacity",
    ]
    assert "unmapped batch 1" in problems[1].message
    assert "not disjoint" in problems[2].message

    with pytest.raises(InstanceError) as excinfo:
        derive_shuffle_problem(inst)
    assert len(excinfo.value.violations) == 5


def test_validate_counts_first():
    inst = DcInstance(
        node_count=0,
        file_count=1,
        function_count=1,
        batch_count=1,
        map_assignment=(),
        reduce_assignment=(),
        link_capacities=(),
    )
    assert [p.code for p in validate(inst)] == ["nonpositive-count"]


def test_validate_lengths():
    inst = gen_family(3, 2)
    broken = DcInstance(
        node_count=3,
        file_count=inst.file_count,
        function_count=3,
        batch_count=3,
        map_assignment=inst.map_assignment[:2],
        reduce_assignment=inst.reduce_assignment,
        link_capacities=inst.link_capacities,
    )
    assert [p.code for p in validate(broken)] == ["assignment-length"]
    ensure_valid(inst)


def test_empty_shuffle():
    inst = DcInstance(
        node_count=2,
        file_count=1,
        function_count=2,
        batch_count=1,
        map_assignment=({0}, {0}),
        reduce_assignment=({0}, {1}),
        link_capacities=(1, 1),
    )
    problem = derive_shuffle_problem(inst)
    assert problem.messages == ()
    assert describe(inst)["M"] == 0


def test_json_fields(ex1_instance, tmp_path):
    state = ex1_instance.to_json()
    assert state["capacities"] == ["1/1", "1/1", "1/1"]
    assert state["map_assignment"] == [[1, 2], [0, 2], [0, 1]]
    assert "t_prime" not in state

    path = tmp_path / "ex1.json"
    path.write_text(json.dumps(state))
    assert load_instance_file(path) == ex1_instance

    del state["F"]
    path.write_text(json.dumps(state))
    with pytest.raises(InstanceError, match="missing field"):
        load_instance_file(path)

    path.write_text("[1, 2]")
    with pytest.raises(InstanceError):
        load_instance_file(path)

    path.write_text("{not json")
    with pytest.raises(InstanceError):
        load_instance_file(path)


def test_json_rejects_floats(ex1_instance):
    state = ex1_instance.to_json()
    state["capacities"] = [0.5, 1, 1]
    with pytest.raises(InstanceError):
        DcInstance.from_json(state)


def test_permute_nodes(ex2_instance):
    perm = [1, 2, 3, 4, 5, 0]
    moved = permute_nodes(ex2_instance, perm)
    assert moved.map_assignment[1] == ex2_instance.map_assignment[0]

    original = derive_shuffle_problem(ex2_instance)
    relabeled = derive_shuffle_problem(moved)
    assert {MessageId(perm[m.node], m.batch) for m in original.messages} == set(relabeled.messages)

    with pytest.raises(ValueError):
        permute_nodes(ex2_instance, [0, 0, 1, 2, 3, 4])


def test_uniform_capacities():
    assert uniform_capacities("1/2", 3) == (Fraction(1, 2),) * 3
    with pytest.raises(InstanceError):
        uniform_capacities([1, 2], 3)
