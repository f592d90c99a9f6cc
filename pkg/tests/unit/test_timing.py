"""Unit tests for left-shift timing"""

import pytest

from common.models import Availability, Initiation, Preemption, VariationConfig
from core.timing import batch_start, left_shift_timing, sequencing_twct, time_batch

SIZED = [[[1, 2, 5], [3, 4]]]


def starts(schedule):
    return [[job.start for job in batch.jobs] for _, _, batch in schedule.batches()]


def test_core_timing(example_instance, ipf):
    """Test sizing-free runs split as the releases suggest"""
    seq = [[[1, 2], [3, 4], [5]]]
    schedule = left_shift_timing(example_instance, seq, ipf)
    assert starts(schedule) == [[1, 5], [10, 12], [17]]
    assert sequencing_twct(example_instance, seq, ipf) == 55


def test_preemptive_batch_idles(example_instance, ipf):
    """Test that a flexible batch waits for each release"""
    schedule = left_shift_timing(example_instance, SIZED, ipf)
    assert starts(schedule) == [[1, 5, 11], [16, 18]]
    assert schedule.machines[0][0].end == 13
    assert sequencing_twct(example_instance, SIZED, ipf) == 61


def test_non_preemptive_shifts_batch(example_instance, non_preemptive):
    """Test that a non-preemptive batch starts late enough to run without gaps"""
    schedule = left_shift_timing(example_instance, SIZED, non_preemptive)
    assert starts(schedule) == [[7, 9, 11], [16, 18]]
    assert sequencing_twct(example_instance, SIZED, non_preemptive) == 71


def test_complete_initiation(example_instance, bc):
    """Test that a batch waits for its last release"""
    schedule = left_shift_timing(example_instance, SIZED, bc)
    assert starts(schedule) == [[11, 13, 15], [20, 22]]
    assert sequencing_twct(example_instance, SIZED, bc) == 99


@pytest.mark.parametrize(
    "availability,preemption,initiation,expected",
    [
        (Availability.BATCH, Preemption.ALLOWED, Initiation.FLEXIBLE, 79),
        (Availability.ITEM, Preemption.ALLOWED, Initiation.COMPLETE, 91),
        (Availability.BATCH, Preemption.ALLOWED, Initiation.COMPLETE, 99),
        (Availability.ITEM, Preemption.FORBIDDEN, Initiation.FLEXIBLE, 71),
    ],
)
def test_variation_objectives(example_instance, availability, preemption, initiation, expected):
    """Test the TWCT of one sequencing under each variation"""
    var = VariationConfig(
        availability=availability, preemption=preemption, initiation=initiation
    )
    assert sequencing_twct(example_instance, SIZED, var) == expected


def test_batch_start_rules(ipf, non_preemptive, bc):
    """Test batch start under each start rule"""
    releases, processings = [1, 5, 11], [2, 2, 2]
    assert batch_start(1, releases, processings, ipf) == 1
    assert batch_start(1, releases, processings, non_preemptive) == 7
    assert batch_start(1, releases, processings, bc) == 11
    assert time_batch(20, releases, processings, ipf) == ([20, 22, 24], 26)


def test_empty_machines_padded(two_machine_instance, ipf):
    """Test that unused machines come out as empty lanes"""
    schedule = left_shift_timing(two_machine_instance, [[[1, 3, 5], [2, 4, 6]]], ipf)
    assert len(schedule.machines) == 2
    assert schedule.machines[1] == ()


def test_mixed_family_batch_rejected(example_instance, ipf):
    """Test that a batch mixing families is refused"""
    with pytest.raises(ValueError):
        left_shift_timing(example_instance, [[[1, 3]]], ipf)


def test_retiming_is_a_fixed_point(two_machine_instance, bc):
    """Test that timing the sequencing of a timed schedule reproduces it"""
    schedule = left_shift_timing(two_machine_instance, [[[1, 5], [2]], [[3], [4, 6]]], bc)
    assert left_shift_timing(two_machine_instance, schedule.sequencing(), bc) == schedule


def test_weight_scaling(example_instance, ipf):
    """Test that scaling weights scales the objective"""
    scaled = example_instance.with_weights_scaled(4)
    assert sequencing_twct(scaled, SIZED, ipf) == 4 * 61
