"""Unit tests for instance validation and batch counts"""

import pytest

from common.models import BatchSizeBounds
from core.validation import (
    can_partition,
    infeasible_families,
    max_batch_counts,
    structural_violations,
    validate_instance,
)
from tests.conftest import make_instance


@pytest.mark.parametrize(
    "count,lower,upper,expected",
    [
        (0, 3, 5, True),
        (5, 5, 5, True),
        (4, 3, 3, False),
        (7, 3, 4, True),
        (5, 3, 4, False),
        (6, 3, 3, True),
        (2, 3, 10, False),
    ],
)
def test_can_partition(count, lower, upper, expected):
    """Test batch partition reachability"""
    assert can_partition(count, lower, upper) is expected


def test_example_instance_is_valid(example_instance):
    """Test that the worked example passes every rule"""
    assert validate_instance(example_instance) == []
    assert infeasible_families(example_instance) == []


def test_max_batch_counts(example_instance):
    """Test batch count bounds with and without sizing"""
    assert max_batch_counts(example_instance, sizing_enabled=True).per_family == (1, 1)
    assert max_batch_counts(example_instance, sizing_enabled=True).total == 2
    assert max_batch_counts(example_instance, sizing_enabled=False).total == 5
    one_family = make_instance(releases=[0] * 7, families=[0] * 7, inter=((0,),), initial=(1,),
                               min_size=[2], max_size=[7])
    assert max_batch_counts(one_family, sizing_enabled=True).total == 3


def test_triangle_violation():
    """Test that a setup shortcut through another family is reported"""
    inst = make_instance(
        releases=[0, 0, 0],
        families=[0, 1, 2],
        inter=((0, 1, 9), (1, 0, 1), (1, 1, 0)),
        initial=(1, 1, 1),
    )
    rules = [v.rule for v in validate_instance(inst)]
    assert "triangle" in rules


def test_diagonal_and_negative_setups():
    """Test setup diagonal and sign rules"""
    inst = make_instance(releases=[0, 0], families=[0, 1], inter=((1, 2), (-1, 0)))
    rules = {v.rule for v in validate_instance(inst)}
    assert {"setup-diagonal", "setup-negative"} <= rules


def test_initial_triangle_violation():
    """Test the idle-machine triangle rule"""
    inst = make_instance(releases=[0, 0], families=[0, 1], inter=((0, 1), (1, 0)), initial=(0, 5))
    assert "initial-triangle" in [v.rule for v in validate_instance(inst)]


def test_job_field_rules():
    """Test weight, processing and family range rules"""
    inst = make_instance(releases=[0, -1], families=[0, 1], processing=[0, 2], weights=[0, 1])
    rules = {v.rule for v in validate_instance(inst)}
    assert {"weight", "processing", "release"} <= rules


def test_unreachable_min_size_is_not_structural(example_instance):
    """Test that a too-large minimum batch size is a sizing infeasibility only"""
    inst = example_instance.with_bounds(BatchSizeBounds(min_size=(4, 2), max_size=(5, 2)))
    assert "bound-reach" in [v.rule for v in validate_instance(inst)]
    assert structural_violations(inst) == []
    assert infeasible_families(inst) == [0]


def test_bound_order():
    """Test that min above max is rejected"""
    inst = make_instance(releases=[0, 0], families=[0, 0], initial=(1,), inter=((0,),),
                         min_size=[2], max_size=[1])
    assert "bound-order" in [v.rule for v in structural_violations(inst)]
