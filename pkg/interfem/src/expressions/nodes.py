"""
Expression tree

Immutable nodes of the coefficient expression language. Structural equality
is dataclass equality, and ``to_text`` prints a fully parenthesised form that
parses back to an equal tree.
"""

from dataclasses import dataclass
from typing import Tuple, Union

VARIABLES = ("x", "y", "r", "theta", "pi")
FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "log": 1, "abs": 1, "sqrt": 1, "pow": 2}
BINARY_OPERATORS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expression"


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expression", ...]


Expression = Union[Number, Variable, UnaryOp, BinaryOp, Call]


def number(value: float) -> Expression:
    """Literal node; negative values become a negated literal so that printing round-trips."""
    value = float(value)
    if value < 0:
        return UnaryOp("-", Number(-value))
    return Number(value)


def to_text(expr: Expression) -> str:
    """Fully parenthesised source text of an expression."""
    if isinstance(expr, Number):
        return repr(float(expr.value))
    if isinstance(expr, Variable):
        return expr.name
    if isinstance(expr, UnaryOp):
        return f"({expr.op}{to_text(expr.operand)})"
    if isinstance(expr, BinaryOp):
        return f"({to_text(expr.left)} {expr.op} {to_text(expr.right)})"
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(to_text(a) for a in expr.args)})"
    raise TypeError(f"not an expression node: {expr!r}")


def variables_of(expr: Expression) -> set:
    """Names of the variables an expression depends on."""
    if isinstance(expr, Variable):
        return {expr.name}
    if isinstance(expr, UnaryOp):
        return variables_of(expr.operand)
    if isinstance(expr, BinaryOp):
        return variables_of(expr.left) | variables_of(expr.right)
    if isinstance(expr, Call):
        return set().union(*(variables_of(a) for a in expr.args))
    return set()
