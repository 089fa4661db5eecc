"""
Expression language for coefficients, data and exact solutions.
"""

from .nodes import (
    BINARY_OPERATORS,
    FUNCTIONS,
    VARIABLES,
    BinaryOp,
    Call,
    Expression,
    Number,
    UnaryOp,
    Variable,
    to_text,
    variables_of,
)
from .grammar import parse_expression
from .evaluate import as_function, evaluate, evaluate_point
from .differentiate import differentiate, laplacian

__all__ = [
    "BINARY_OPERATORS",
    "FUNCTIONS",
    "VARIABLES",
    "BinaryOp",
    "Call",
    "Expression",
    "Number",
    "UnaryOp",
    "Variable",
    "to_text",
    "variables_of",
    "parse_expression",
    "as_function",
    "evaluate",
    "evaluate_point",
    "differentiate",
    "laplacian",
]
