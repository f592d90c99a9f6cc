"""Container for mixed-integer linear models."""

from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

Number = Union[int, Fraction]
Terms = Tuple[Tuple[Number, str], ...]


class VarKind(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Variable(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    kind: VarKind
    lower: Optional[Number] = 0
    upper: Optional[Number] = None


class Constraint(BaseModel):
    """sum(coef * var) <sense> rhs"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    terms: Terms
    sense: Sense
    rhs: Number


def combine(terms: Iterable[Tuple[Number, str]]) -> Terms:
    """Merge repeated variables, drop zero coefficients, keep first-seen order"""
    merged: Dict[str, Number] = {}
    for coef, name in terms:
        merged[name] = merged.get(name, 0) + coef
    return tuple((coef, name) for name, coef in merged.items() if coef != 0)


class MilpModel:
    """Variables in declaration order, named linear constraints, a minimized objective"""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: List[Variable] = []
        self.constraints: List[Constraint] = []
        self.objective: Terms = ()
        self._index: Dict[str, Variable] = {}
        self._constraint_names: set = set()

    def add_variable(
        self,
        name: str,
        kind: VarKind,
        lower: Optional[Number] = 0,
        upper: Optional[Number] = None,
    ) -> str:
        if name in self._index:
            raise ValueError(f"variable {name} declared twice")
        if kind is VarKind.BINARY:
            lower, upper = 0, 1
        variable = Variable(name=name, kind=kind, lower=lower, upper=upper)
        self.variables.append(variable)
        self._index[name] = variable
        return name

    def binary(self, name: str) -> str:
        return self.add_variable(name, VarKind.BINARY)

    def continuous(self, name: str, lower: Optional[Number] = 0, upper: Optional[Number] = None) -> str:
        return self.add_variable(name, VarKind.CONTINUOUS, lower, upper)

    def add_constraint(
        self, name: str, terms: Iterable[Tuple[Number, str]], sense: Sense, rhs: Number
    ) -> None:
        terms = combine(terms)
        unknown = [var for _, var in terms if var not in self._index]
        if unknown:
            raise ValueError(f"constraint {name} references undeclared {unknown}")
        if name in self._constraint_names:
            raise ValueError(f"constraint {name} declared twice")
        self._constraint_names.add(name)
        self.constraints.append(Constraint(name=name, terms=terms, sense=sense, rhs=rhs))

    def set_objective(self, terms: Iterable[Tuple[Number, str]]) -> None:
        terms = combine(terms)
        unknown = [var for _, var in terms if var not in self._index]
        if unknown:
            raise ValueError(f"objective references undeclared {unknown}")
        self.objective = terms

    def variable(self, name: str) -> Variable:
        return self._index[name]

    def has_variable(self, name: str) -> bool:
        return name in self._index

    def constraints_named(self, prefix: str) -> List[Constraint]:
        """Rows of one constraint family, `prefix[...]`"""
        return [c for c in self.constraints if c.name.split("[", 1)[0] == prefix]

    def variables_named(self, prefix: str) -> List[Variable]:
        return [v for v in self.variables if v.name.split("[", 1)[0] == prefix]
