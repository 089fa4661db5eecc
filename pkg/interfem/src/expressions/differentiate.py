"""
Symbolic derivatives of expressions

Derivatives in x and y follow the chain rule through r = hypot(x, y) and
theta = atan2(y, x). Results are simplified by constant folding and the
neutral-element rules, so that derivatives of polynomials stay small.
"""

from .nodes import BinaryOp, Call, Expression, Number, UnaryOp, Variable, number
from ..exceptions import ValidationError

ZERO = Number(0.0)
ONE = Number(1.0)

_R = Variable("r")


def _is(expr: Expression, value: float) -> bool:
    return isinstance(expr, Number) and expr.value == value


def _constant_value(expr: Expression):
    if isinstance(expr, Number):
        return expr.value
    if isinstance(expr, UnaryOp) and isinstance(expr.operand, Number):
        return -expr.operand.value
    return None


def add(a: Expression, b: Expression) -> Expression:
    ca, cb = _constant_value(a), _constant_value(b)
    if ca is not None and cb is not None:
        return number(ca + cb)
    if ca == 0:
        return b
    if cb == 0:
        return a
    return BinaryOp("+", a, b)


def sub(a: Expression, b: Expression) -> Expression:
    ca, cb = _constant_value(a), _constant_value(b)
    if ca is not None and cb is not None:
        return number(ca - cb)
    if cb == 0:
        return a
    if ca == 0:
        return neg(b)
    if a == b:
        return ZERO
    return BinaryOp("-", a, b)


def mul(a: Expression, b: Expression) -> Expression:
    ca, cb = _constant_value(a), _constant_value(b)
    if ca is not None and cb is not None:
        return number(ca * cb)
    if ca == 0 or cb == 0:
        return ZERO
    if ca == 1:
        return b
    if cb == 1:
        return a
    if ca == -1:
        return neg(b)
    if cb == -1:
        return neg(a)
    return BinaryOp("*", a, b)


def div(a: Expression, b: Expression) -> Expression:
    ca, cb = _constant_value(a), _constant_value(b)
    if ca == 0 and cb != 0:
        return ZERO
    if cb == 1:
        return a
    if ca is not None and cb not in (None, 0):
        return number(ca / cb)
    return BinaryOp("/", a, b)


def power(a: Expression, b: Expression) -> Expression:
    cb = _constant_value(b)
    if cb == 0:
        return ONE
    if cb == 1:
        return a
    return BinaryOp("^", a, b)


def neg(a: Expression) -> Expression:
    if isinstance(a, UnaryOp):
        return a.operand
    if isinstance(a, Number):
        return number(-a.value)
    return UnaryOp("-", a)


def _variable_derivative(name: str, var: str) -> Expression:
    if name == var:
        return ONE
    if name == "r":
        return div(Variable(var), _R)
    if name == "theta":
        # d theta / dx = -y / r^2, d theta / dy = x / r^2
        other = Variable("y" if var == "x" else "x")
        numerator = neg(other) if var == "x" else other
        return div(numerator, power(_R, Number(2.0)))
    return ZERO


def differentiate(expr: Expression, var: str) -> Expression:
    """
    Partial derivative of an expression in ``x`` or ``y``.

    Raises:
        ValidationError: If ``var`` is not x or y
    """
    if var not in ("x", "y"):
        raise ValidationError(f"can only differentiate in x or y, got {var!r}")
    if isinstance(expr, Number):
        return ZERO
    if isinstance(expr, Variable):
        return _variable_derivative(expr.name, var)
    if isinstance(expr, UnaryOp):
        return neg(differentiate(expr.operand, var))
    if isinstance(expr, BinaryOp):
        a, b = expr.left, expr.right
        da, db = differentiate(a, var), differentiate(b, var)
        if expr.op == "+":
            return add(da, db)
        if expr.op == "-":
            return sub(da, db)
        if expr.op == "*":
            return add(mul(da, b), mul(a, db))
        if expr.op == "/":
            return div(sub(mul(da, b), mul(a, db)), power(b, Number(2.0)))
        return _power_derivative(a, b, da, db)
    if isinstance(expr, Call):
        u = expr.args[0]
        du = differentiate(u, var)
        if expr.name == "pow":
            return _power_derivative(u, expr.args[1], du, differentiate(expr.args[1], var))
        if expr.name == "sin":
            outer = Call("cos", (u,))
        elif expr.name == "cos":
            outer = neg(Call("sin", (u,)))
        elif expr.name == "exp":
            outer = expr
        elif expr.name == "log":
            outer = div(ONE, u)
        elif expr.name == "abs":
            outer = div(u, expr)
        else:
            outer = div(ONE, mul(Number(2.0), expr))
        return mul(outer, du)
    raise TypeError(f"not an expression node: {expr!r}")


def _power_derivative(a: Expression, b: Expression, da: Expression, db: Expression) -> Expression:
    cb = _constant_value(b)
    if cb is not None:
        return mul(mul(number(cb), power(a, number(cb - 1.0))), da)
    # a^b (b' log a + b a' / a)
    return mul(BinaryOp("^", a, b), add(mul(db, Call("log", (a,))), div(mul(b, da), a)))


def laplacian(expr: Expression) -> Expression:
    """Second derivatives d2/dx2 + d2/dy2."""
    return add(differentiate(differentiate(expr, "x"), "x"), differentiate(differentiate(expr, "y"), "y"))
