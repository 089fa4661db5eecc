"""
Guarded evaluation of expressions

``evaluate`` interprets a tree on an array of points with numpy; division by
zero, logarithms and square roots of invalid arguments, and any other
non-finite intermediate raise EvalError instead of producing nan or inf.
``evaluate_point`` is the scalar interpreter on Python floats and the math
module, used as the reference for the vectorised one.
"""

import math
import operator
from typing import Callable, Dict, Sequence

import numpy as np

from .nodes import BinaryOp, Call, Expression, Number, UnaryOp, Variable, to_text
from ..exceptions import EvalError


_SCALAR_OPERATORS = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}


def _fail(expr: Expression, reason: str):
    raise EvalError(f"{reason} in {to_text(expr)}", error_code="EVAL_ERROR")


def _environment(points: np.ndarray) -> Dict[str, np.ndarray]:
    x, y = points[:, 0], points[:, 1]
    return {"x": x, "y": y, "r": np.hypot(x, y), "theta": np.arctan2(y, x),
            "pi": np.full(x.shape, np.pi)}


def _checked(expr: Expression, value: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        _fail(expr, "non-finite value")
    return value


def _eval(expr: Expression, env: Dict[str, np.ndarray], size: int) -> np.ndarray:
    if isinstance(expr, Number):
        return np.full(size, expr.value)
    if isinstance(expr, Variable):
        return env[expr.name]
    if isinstance(expr, UnaryOp):
        return -_eval(expr.operand, env, size)
    if isinstance(expr, BinaryOp):
        a = _eval(expr.left, env, size)
        b = _eval(expr.right, env, size)
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return _checked(expr, a * b)
        if expr.op == "/":
            if np.any(b == 0):
                _fail(expr, "division by zero")
            return _checked(expr, a / b)
        return _power(expr, a, b)
    if isinstance(expr, Call):
        args = [_eval(a, env, size) for a in expr.args]
        return _call(expr, args)
    raise TypeError(f"not an expression node: {expr!r}")


def _power(expr: Expression, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if np.any((a < 0) & (b != np.round(b))):
        _fail(expr, "fractional power of a negative number")
    if np.any((a == 0) & (b < 0)):
        _fail(expr, "negative power of zero")
    with np.errstate(over="ignore", invalid="ignore"):
        return _checked(expr, np.power(a, b))


def _call(expr: Call, args: Sequence[np.ndarray]) -> np.ndarray:
    name = expr.name
    u = args[0]
    if name == "log":
        if np.any(u <= 0):
            _fail(expr, "logarithm of a nonpositive number")
        return np.log(u)
    if name == "sqrt":
        if np.any(u < 0):
            _fail(expr, "square root of a negative number")
        return np.sqrt(u)
    if name == "pow":
        return _power(expr, u, args[1])
    with np.errstate(over="ignore"):
        value = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs}[name](u)
    return _checked(expr, value)


def evaluate(expr: Expression, points) -> np.ndarray:
    """
    Values of an expression at points.

    Args:
        expr: Expression tree
        points: Array of shape (P, 2) (a single point is accepted)

    Returns:
        Array of shape (P,)

    Raises:
        EvalError: On an undefined operation at any point
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return _checked(expr, np.asarray(_eval(expr, _environment(pts), pts.shape[0]), dtype=float))


def evaluate_point(expr: Expression, x: float, y: float) -> float:
    """Scalar interpreter with the same guards as ``evaluate``."""
    env = {"x": float(x), "y": float(y), "r": math.hypot(x, y), "theta": math.atan2(y, x), "pi": math.pi}

    def walk(node: Expression) -> float:
        if isinstance(node, Number):
            return node.value
        if isinstance(node, Variable):
            return env[node.name]
        if isinstance(node, UnaryOp):
            return -walk(node.operand)
        if isinstance(node, BinaryOp):
            a, b = walk(node.left), walk(node.right)
            if node.op == "/" and b == 0:
                _fail(node, "division by zero")
            if node.op == "^":
                return _scalar_power(node, a, b)
            return _SCALAR_OPERATORS[node.op](a, b)
        args = [walk(a) for a in node.args]
        if node.name == "pow":
            return _scalar_power(node, args[0], args[1])
        if node.name == "log" and args[0] <= 0:
            _fail(node, "logarithm of a nonpositive number")
        if node.name == "sqrt" and args[0] < 0:
            _fail(node, "square root of a negative number")
        try:
            return {"sin": math.sin, "cos": math.cos, "exp": math.exp, "log": math.log,
                    "abs": abs, "sqrt": math.sqrt}[node.name](args[0])
        except OverflowError:
            _fail(node, "non-finite value")

    value = walk(expr)
    if not math.isfinite(value):
        _fail(expr, "non-finite value")
    return float(value)


def _scalar_power(expr: Expression, a: float, b: float) -> float:
    if a < 0 and b != round(b):
        _fail(expr, "fractional power of a negative number")
    if a == 0 and b < 0:
        _fail(expr, "negative power of zero")
    try:
        return float(a ** b)
    except OverflowError:
        _fail(expr, "non-finite value")


def as_function(exprs: Sequence[Expression]) -> Callable[[np.ndarray], np.ndarray]:
    """Data callable (P, 2) -> (P, len(exprs)) evaluating one expression per component."""
    exprs = tuple(exprs)

    def func(points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.column_stack([evaluate(e, pts) for e in exprs])

    return func
