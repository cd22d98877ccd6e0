"""Solver-agnostic MIP model: typed variables, linear rows, an objective."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from pwlgen.geometry import HPolytope, as_fraction

KINDS = ("continuous", "binary", "integer")
SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = "continuous"
    lower: Fraction | None = Fraction(0)
    upper: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == "binary":
            object.__setattr__(self, "lower", Fraction(0))
            object.__setattr__(self, "upper", Fraction(1))
        for attr in ("lower", "upper"):
            v = getattr(self, attr)
            if v is not None:
                object.__setattr__(self, attr, as_fraction(v))

    @property
    def is_integer(self) -> bool:
        return self.kind != "continuous"

    def renamed(self, name: str) -> "Variable":
        return Variable(name, self.kind, self.lower, self.upper)


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[str, Fraction]
    sense: str
    rhs: Fraction
    name: str = ""

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        clean = {k: as_fraction(v) for k, v in self.coeffs.items() if v != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    def renamed(self, mapping: Mapping[str, str], prefix: str = "") -> "Constraint":
        return Constraint(
            {mapping.get(k, k): v for k, v in self.coeffs.items()},
            self.sense,
            self.rhs,
            prefix + self.name if self.name else "",
        )

    def holds(self, values: Mapping[str, Fraction]) -> bool:
        lhs = sum((c * values[k] for k, c in self.coeffs.items()), Fraction(0))
        return {"<=": lhs <= self.rhs, "=": lhs == self.rhs, ">=": lhs >= self.rhs}[self.sense]


def le(coeffs, rhs, name="") -> Constraint:
    return Constraint(coeffs, "<=", rhs, name)


def eq(coeffs, rhs, name="") -> Constraint:
    return Constraint(coeffs, "=", rhs, name)


def to_polytope(
    variables: list[Variable],
    constraints: Iterable[Constraint],
    fix: Mapping[str, Fraction] | None = None,
) -> HPolytope:
    """LP relaxation over the given variable order; ``fix`` pins values."""
    index = {v.name: i for i, v in enumerate(variables)}
    n = len(variables)

    def row(coeffs):
        out = [Fraction(0)] * n
        for k, c in coeffs.items():
            out[index[k]] += c
        return tuple(out)

    eqs, ineqs = [], []
    for con in constraints:
        a = row(con.coeffs)
        if con.sense == "=":
            eqs.append((a, con.rhs))
        elif con.sense == "<=":
            ineqs.append((a, con.rhs))
        else:
            ineqs.append((tuple(-x for x in a), -con.rhs))
    for i, v in enumerate(variables):
        unit = tuple(Fraction(int(i == j)) for j in range(n))
        if v.lower is not None:
            ineqs.append((tuple(-x for x in unit), -v.lower))
        if v.upper is not None:
            ineqs.append((unit, v.upper))
    for name, value in (fix or {}).items():
        eqs.append((row({name: 1}), as_fraction(value)))
    return HPolytope(n, tuple(eqs), tuple(ineqs))


@dataclass
class Model:
    name: str = "pwl"
    variables: dict[str, Variable] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    objective_sense: str = "min"
    objective: dict[str, Fraction] = field(default_factory=dict)

    def add_variable(self, name: str, kind: str = "continuous", lower=0, upper=None) -> str:
        if name in self.variables:
            raise ValueError(f"duplicate variable {name!r}")
        self.variables[name] = Variable(name, kind, lower, upper)
        return name

    def add_constraint(self, coeffs, sense: str, rhs, name: str = "") -> Constraint:
        unknown = [k for k in coeffs if k not in self.variables]
        if unknown:
            raise ValueError(f"constraint references undeclared variables {unknown}")
        con = Constraint(coeffs, sense, rhs, name or f"c{len(self.constraints) + 1}")
        self.constraints.append(con)
        return con

    def set_objective(self, coeffs, sense: str = "min") -> None:
        if sense not in ("min", "max"):
            raise ValueError("objective sense must be 'min' or 'max'")
        self.objective_sense = sense
        self.objective = {k: as_fraction(v) for k, v in coeffs.items() if v != 0}

    def fresh_name(self, base: str) -> str:
        if base not in self.variables:
            return base
        i = 2
        while f"{base}_{i}" in self.variables:
            i += 1
        return f"{base}_{i}"

    def relaxation(self) -> HPolytope:
        return to_polytope(list(self.variables.values()), self.constraints)
