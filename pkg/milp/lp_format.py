"""LP text export and import.

Sections are written in the order Minimize, Subject To, Bounds, Binary, End,
one row per line, everything in declaration order. Names are made LP-safe:
brackets and commas become underscores (x[1,2] -> x_1_2).
"""

import re
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from common.errors import LpParseError
from milp.model import MilpModel, Number, Sense, VarKind

_UNSAFE = re.compile(r"[^A-Za-z0-9_.]")
_TOKEN = re.compile(r"\s*([+-]|[^\s+-]+)")
_SENSES = {"<=": Sense.LE, ">=": Sense.GE, "=": Sense.EQ, "=<": Sense.LE, "=>": Sense.GE}


def sanitize(name: str) -> str:
    """x[1,2] -> x_1_2"""
    return _UNSAFE.sub("_", name.replace("]", ""))


def _number(value: Number) -> str:
    """Exact decimal text; fractions without a finite decimal form are rejected"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    twos = fives = 0
    rest = value.denominator
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        raise ValueError(f"{value} has no exact decimal form")
    places = max(twos, fives)
    digits = str(abs(value.numerator) * 10**places // value.denominator).rjust(places + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _expression(terms: Iterable[Tuple[Number, str]]) -> str:
    parts: List[str] = []
    for coef, name in terms:
        coef = Fraction(coef)
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        body = sanitize(name) if magnitude == 1 else f"{_number(magnitude)} {sanitize(name)}"
        if not parts:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


def write_lp(model: MilpModel) -> str:
    lines = ["Minimize", f" obj: {_expression(model.objective)}", "Subject To"]
    for constraint in model.constraints:
        lines.append(
            f" {sanitize(constraint.name)}: {_expression(constraint.terms)} "
            f"{constraint.sense.value} {_number(constraint.rhs)}"
        )
    continuous = [v for v in model.variables if v.kind is VarKind.CONTINUOUS]
    binary = [v for v in model.variables if v.kind is VarKind.BINARY]
    if continuous:
        lines.append("Bounds")
        for variable in continuous:
            lower = "-inf" if variable.lower is None else _number(variable.lower)
            if variable.upper is None:
                lines.append(f" {sanitize(variable.name)} >= {lower}")
            else:
                lines.append(f" {lower} <= {sanitize(variable.name)} <= {_number(variable.upper)}")
    if binary:
        lines.append("Binary")
        for variable in binary:
            lines.append(f" {sanitize(variable.name)}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def _parse_terms(text: str, where: str) -> List[Tuple[Fraction, str]]:
    tokens = _TOKEN.findall(text)
    terms = []
    sign = 1
    coef: Optional[Fraction] = None
    for token in tokens:
        if token in "+-":
            sign = -1 if token == "-" else 1
            continue
        try:
            number = Fraction(token)
        except (ValueError, ZeroDivisionError):
            terms.append((sign * (coef if coef is not None else Fraction(1)), token))
            sign = 1
            coef = None
            continue
        if coef is not None:
            raise LpParseError(f"{where}: two numbers in a row")
        coef = number
    if coef is not None:
        if coef != 0 or terms:
            raise LpParseError(f"{where}: dangling constant {coef}")
    return terms


def _parse_row(line: str, where: str):
    name, sep, body = line.partition(":")
    if not sep:
        raise LpParseError(f"{where}: missing row name")
    match = re.search(r"(<=|>=|=<|=>|=)", body)
    if not match:
        raise LpParseError(f"{where}: missing sense")
    lhs = body[: match.start()]
    rhs = body[match.end() :].strip()
    try:
        value = Fraction(rhs)
    except ValueError as exc:
        raise LpParseError(f"{where}: bad right-hand side {rhs!r}") from exc
    return name.strip(), _parse_terms(lhs, where), _SENSES[match.group(1)], value


def _integral(value: Fraction) -> Number:
    return value.numerator if value.denominator == 1 else value


def read_lp(text: str) -> MilpModel:
    """Parse text written by `write_lp`; names come back sanitized"""
    section = None
    objective: List[Tuple[Fraction, str]] = []
    rows = []
    bounds = []
    binaries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        header = line.lower()
        if header in ("minimize", "subject to", "bounds", "binary", "end"):
            section = header
            continue
        where = f"line {number}"
        if section == "minimize":
            _, _, body = line.partition(":")
            objective = _parse_terms(body, where)
        elif section == "subject to":
            rows.append(_parse_row(line, where))
        elif section == "bounds":
            parts = line.split()
            if len(parts) == 3 and parts[1] == ">=":
                lower = None if parts[2] == "-inf" else Fraction(parts[2])
                bounds.append((parts[0], lower, None))
            elif len(parts) == 5 and parts[1] == parts[3] == "<=":
                lower = None if parts[0] == "-inf" else Fraction(parts[0])
                bounds.append((parts[2], lower, Fraction(parts[4])))
            else:
                raise LpParseError(f"{where}: unsupported bound {line!r}")
        elif section == "binary":
            binaries.extend(line.split())
        else:
            raise LpParseError(f"{where}: text outside a section")
    if section != "end":
        raise LpParseError("missing End")

    model = MilpModel()
    for name, lower, upper in bounds:
        model.continuous(
            name,
            None if lower is None else _integral(lower),
            None if upper is None else _integral(upper),
        )
    for name in binaries:
        model.binary(name)
    for name, terms, _, _ in rows:
        for _, var in terms:
            if not model.has_variable(var):
                raise LpParseError(f"row {name} uses undeclared {var}")
    for name, terms, sense, rhs in rows:
        model.add_constraint(name, ((_integral(c), v) for c, v in terms), sense, _integral(rhs))
    model.set_objective((_integral(c), v) for c, v in objective)
    return model
