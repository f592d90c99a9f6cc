"""Exact evaluation of a variable assignment against a model."""

from fractions import Fraction
from typing import List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from common.errors import MissingVariable
from milp.model import MilpModel, Sense, VarKind


class AssignmentReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    feasible: bool
    objective: Fraction
    violated: Tuple[str, ...] = ()


def _value(raw: Union[int, float, str, Fraction]) -> Fraction:
    if isinstance(raw, float):
        return Fraction(str(raw))
    return Fraction(raw)


def _satisfied(lhs: Fraction, sense: Sense, rhs: Fraction) -> bool:
    if sense is Sense.LE:
        return lhs <= rhs
    if sense is Sense.GE:
        return lhs >= rhs
    return lhs == rhs


def check_assignment(
    model: MilpModel, assignment: Mapping[str, Union[int, float, str, Fraction]]
) -> AssignmentReport:
    """Evaluate every row, bound and integrality requirement in rational arithmetic.

    Violated rows are reported by name; variable domain violations as
    `bounds:<name>`.
    """
    missing = [v.name for v in model.variables if v.name not in assignment]
    if missing:
        raise MissingVariable(missing)
    values = {v.name: _value(assignment[v.name]) for v in model.variables}

    violated: List[str] = []
    for variable in model.variables:
        value = values[variable.name]
        out_of_domain = (
            (variable.lower is not None and value < variable.lower)
            or (variable.upper is not None and value > variable.upper)
            or (variable.kind is VarKind.BINARY and value.denominator != 1)
        )
        if out_of_domain:
            violated.append(f"bounds:{variable.name}")

    for constraint in model.constraints:
        lhs = sum((Fraction(coef) * values[name] for coef, name in constraint.terms), Fraction(0))
        if not _satisfied(lhs, constraint.sense, Fraction(constraint.rhs)):
            violated.append(constraint.name)

    objective = sum((Fraction(coef) * values[name] for coef, name in model.objective), Fraction(0))
    return AssignmentReport(feasible=not violated, objective=objective, violated=tuple(violated))


def slack(model: MilpModel, assignment: Mapping[str, int], name: str) -> Optional[Fraction]:
    """lhs - rhs of a >= row, rhs - lhs of a <= row; None for unknown rows"""
    for constraint in model.constraints:
        if constraint.name != name:
            continue
        lhs = sum(Fraction(coef) * _value(assignment[var]) for coef, var in constraint.terms)
        if constraint.sense is Sense.LE:
            return Fraction(constraint.rhs) - lhs
        return lhs - Fraction(constraint.rhs)
    return None
