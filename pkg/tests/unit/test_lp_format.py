"""Unit tests for LP text export and import"""

from fractions import Fraction

import pytest

from common.errors import LpParseError
from core.timing import left_shift_timing
from milp import check_assignment, encode_pa, read_lp, schedule_to_pa_assignment, write_lp
from milp.lp_format import sanitize
from milp.model import MilpModel, Sense


def test_sanitize():
    """Test LP-safe names"""
    assert sanitize("x[1,2]") == "x_1_2"
    assert sanitize("Cb[3]") == "Cb_3"
    assert sanitize("plain") == "plain"


def test_empty_model():
    """Test the text of a model without variables"""
    text = write_lp(MilpModel())
    assert text == "Minimize\n obj: 0\nSubject To\nEnd\n"
    assert read_lp(text).variables == []


def test_sections_and_rows():
    """Test section order and row layout"""
    model = MilpModel()
    model.continuous("t[1]", 0, 5)
    model.continuous("free", None)
    model.binary("b[1,1]")
    model.add_constraint("link[1]", [(1, "t[1]"), (-3, "b[1,1]")], Sense.LE, 0)
    model.add_constraint("floor", [(-1, "free")], Sense.GE, -2)
    model.set_objective([(2, "t[1]")])
    lines = write_lp(model).splitlines()
    assert lines == [
        "Minimize",
        " obj: 2 t_1",
        "Subject To",
        " link_1: t_1 - 3 b_1_1 <= 0",
        " floor: - free >= -2",
        "Bounds",
        " 0 <= t_1 <= 5",
        " free >= -inf",
        "Binary",
        " b_1_1",
        "End",
    ]


def test_read_preserves_rows(example_instance, bc):
    """Test that a parsed model judges an assignment like the original"""
    model = encode_pa(example_instance)
    parsed = read_lp(write_lp(model))
    assert len(parsed.variables) == len(model.variables)
    assert [c.name for c in parsed.constraints] == [sanitize(c.name) for c in model.constraints]

    schedule = left_shift_timing(example_instance, [[[1, 2, 5], [3, 4]]], bc)
    values = {
        sanitize(name): value
        for name, value in schedule_to_pa_assignment(example_instance, schedule).items()
    }
    report = check_assignment(parsed, values)
    assert report.feasible
    assert report.objective == 99



def test_fractional_coefficients_are_exact():
    """Test that fractional data is written as exact decimals and read back unchanged"""
    model = MilpModel()
    model.continuous("x", 0, Fraction(5, 2))
    model.continuous("y", Fraction(-1, 2**40))
    model.add_constraint(
        "r", [(Fraction(1, 4), "x"), (Fraction(-1, 80), "y")], Sense.LE, Fraction(-3, 8)
    )
    model.set_objective([(Fraction(7, 5), "x")])
    text = write_lp(model)
    assert " obj: 1.4 x" in text
    assert " r: 0.25 x - 0.0125 y <= -0.375" in text
    assert " 0 <= x <= 2.5" in text
    assert " y >= -0.0000000000009094947017729282379150390625" in text

    parsed = read_lp(text)
    assert [Fraction(c) for c, _ in parsed.objective] == [Fraction(7, 5)]
    row = parsed.constraints[0]
    expected = [(Fraction(1, 4), "x"), (Fraction(-1, 80), "y")]
    assert [(Fraction(c), v) for c, v in row.terms] == expected
    assert Fraction(row.rhs) == Fraction(-3, 8)
    assert Fraction(parsed.variable("x").upper) == Fraction(5, 2)
    assert Fraction(parsed.variable("y").lower) == Fraction(-1, 2**40)


def test_repeating_decimal_rejected():
    """Test that a coefficient without a finite decimal form is not rounded"""
    model = MilpModel()
    model.continuous("x", 0)
    model.add_constraint("r", [(Fraction(1, 3), "x")], Sense.GE, 1)
    with pytest.raises(ValueError):
        write_lp(model)


@pytest.mark.parametrize(
    "text",
    [
        "Minimize\n obj: x\nSubject To\n r: x >= 1\n",
        "Minimize\n obj: x\nSubject To\n x >= 1\nEnd\n",
        "Minimize\n obj: x\nSubject To\n r: x 1\nEnd\n",
        "Minimize\n obj: 0\nSubject To\n r: y >= 1\nEnd\n",
        "obj: x\nEnd\n",
    ],
)
def test_parse_errors(text):
    """Test rejection of malformed LP text"""
    with pytest.raises(LpParseError):
        read_lp(text)
