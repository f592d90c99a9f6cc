"""Unit tests for the MILP encoders, schedule translation and the checker"""

from fractions import Fraction

import pytest

from common.errors import CapacityExceeded, MissingVariable
from core.timing import left_shift_timing
from milp import (
    MilpModel,
    check_assignment,
    default_big_k,
    encode_pa,
    encode_rp,
    schedule_to_pa_assignment,
    schedule_to_rp_assignment,
)
from milp.checker import slack
from milp.model import Sense, VarKind
from milp.pa import slot_count
from milp.rp import rp_batches

SIZED = [[[1, 2, 5], [3, 4]]]


def test_default_big_k(example_instance):
    """Test the horizon constant of the worked example"""
    assert default_big_k(example_instance) == 29


def test_rp_structure(example_instance):
    """Test relative positioning variable and row counts"""
    model = encode_rp(example_instance)
    assert len(rp_batches(example_instance)) == 2
    assert len(model.variables_named("x")) == 5
    assert len(model.constraints_named("assign_job")) == 5
    assert len(model.variables_named("w")) == 1
    assert len(model.variables_named("z")) == 3 + 1
    assert len(model.constraints_named("batch_machine")) == 2
    assert model.objective == tuple((1, f"C[{j}]") for j in range(1, 6))


def test_rp_accepts_optimal_schedule(example_instance, ipf):
    """Test that the translated optimum is feasible at the same objective"""
    schedule = left_shift_timing(example_instance, SIZED, ipf)
    model = encode_rp(example_instance)
    report = check_assignment(model, schedule_to_rp_assignment(example_instance, schedule))
    assert report.feasible, report.violated
    assert report.objective == 61


def test_rp_two_machines(two_machine_instance, ipf):
    """Test translation of a schedule spread over two machines"""
    seq = [[[1, 3, 5]], [[2, 4, 6]]]
    schedule = left_shift_timing(two_machine_instance, seq, ipf)
    report = check_assignment(
        encode_rp(two_machine_instance),
        schedule_to_rp_assignment(two_machine_instance, schedule),
    )
    assert report.feasible, report.violated


def test_rp_detects_early_completion(example_instance, ipf):
    """Test that lowering a completion below its batch position is caught"""
    schedule = left_shift_timing(example_instance, SIZED, ipf)
    values = schedule_to_rp_assignment(example_instance, schedule)
    values["C[1]"] = 2
    report = check_assignment(encode_rp(example_instance), values)
    assert not report.feasible
    assert "item_completion[1,1]" in report.violated
    assert report.objective == 60


def test_rp_capacity(example_instance, ipf):
    """Test that more batches than slots cannot be translated"""
    schedule = left_shift_timing(example_instance, [[[1, 2], [3, 4], [5]]], ipf)
    with pytest.raises(CapacityExceeded):
        schedule_to_rp_assignment(example_instance, schedule)


def test_pa_structure(example_instance):
    """Test positional assignment variable and row counts"""
    model = encode_pa(example_instance)
    assert slot_count(example_instance) == 2
    assert len(model.variables_named("y")) == 4
    assert len(model.constraints_named("one_family")) == 2
    assert len(model.constraints_named("assign_job")) == 5
    assert len(model.constraints_named("used_first")) == 1


def test_pa_accepts_optimal_schedule(example_instance, bc):
    """Test that the batch/complete optimum is feasible at the same objective"""
    schedule = left_shift_timing(example_instance, SIZED, bc)
    report = check_assignment(
        encode_pa(example_instance), schedule_to_pa_assignment(example_instance, schedule)
    )
    assert report.feasible, report.violated
    assert report.objective == 99


def test_pa_rejects_early_start(example_instance, ipf):
    """Test that a batch started before its last release is infeasible"""
    schedule = left_shift_timing(example_instance, SIZED, ipf)
    report = check_assignment(
        encode_pa(example_instance), schedule_to_pa_assignment(example_instance, schedule)
    )
    assert not report.feasible
    assert any(name.startswith("release[") for name in report.violated)


def test_pa_capacity(example_instance, ipf):
    """Test that a machine with more batches than slots cannot be translated"""
    schedule = left_shift_timing(example_instance, [[[1, 2], [3, 4], [5]]], ipf)
    with pytest.raises(CapacityExceeded):
        schedule_to_pa_assignment(example_instance, schedule)


def test_missing_variable(example_instance):
    """Test that a partial assignment is refused"""
    with pytest.raises(MissingVariable):
        check_assignment(encode_pa(example_instance), {"C[1]": 3})


def test_domain_violations():
    """Test bound and integrality checks"""
    model = MilpModel()
    model.binary("b")
    model.continuous("t", 0, 10)
    model.add_constraint("cap", [(1, "t"), (-10, "b")], Sense.LE, 0)
    model.set_objective([(1, "t")])
    report = check_assignment(model, {"b": Fraction(1, 2), "t": 5})
    assert report.violated == ("bounds:b",)
    report = check_assignment(model, {"b": 0, "t": 5})
    assert report.violated == ("cap",)
    assert slack(model, {"b": 1, "t": 4}, "cap") == 6
    assert slack(model, {"b": 1, "t": 4}, "nothing") is None


def test_model_declarations():
    """Test declaration rules of the model builder"""
    model = MilpModel()
    model.add_variable("b", VarKind.BINARY, lower=-5, upper=7)
    assert (model.variable("b").lower, model.variable("b").upper) == (0, 1)
    with pytest.raises(ValueError):
        model.binary("b")
    with pytest.raises(ValueError):
        model.add_constraint("row", [(1, "missing")], Sense.EQ, 0)
    model.add_constraint("row", [(1, "b"), (2, "b")], Sense.EQ, 3)
    assert model.constraints[0].terms == ((3, "b"),)
    with pytest.raises(ValueError):
        model.add_constraint("row", [(1, "b")], Sense.EQ, 1)
