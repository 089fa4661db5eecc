"""
Parser of the expression language

Operators ``+ - * / ^`` with the usual precedence, ``^`` right-associative
and binding tighter than unary minus (``-x^2`` is ``-(x^2)``). Names are the
variables x, y, r, theta and the constant pi; calls are sin, cos, exp, log,
abs, sqrt and pow(a, b).
"""

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from .nodes import FUNCTIONS, VARIABLES, BinaryOp, Call, Expression, Number, UnaryOp, Variable
from ..exceptions import ParseError

expression_grammar = r"""
    ?start: sum

    ?sum: product
        | sum "+" product   -> add
        | sum "-" product   -> sub

    ?product: unary
        | product "*" unary -> mul
        | product "/" unary -> div

    ?unary: power
        | "-" unary         -> neg
        | "+" unary         -> pos

    ?power: atom
        | atom "^" unary    -> pow

    ?atom: NUMBER           -> number
         | NAME             -> var
         | NAME "(" sum ("," sum)* ")" -> call
         | "(" sum ")"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    %import common.NUMBER
    %import common.WS
    %ignore WS
"""


def _binary(op):
    def build(self, left, right):
        return BinaryOp(op, left, right)
    return build


@v_args(inline=True)
class ExpressionBuilder(Transformer):
    """Turns the parse tree into expression nodes, checking names and arities."""

    add = _binary("+")
    sub = _binary("-")
    mul = _binary("*")
    div = _binary("/")
    pow = _binary("^")

    def number(self, token):
        return Number(float(token))

    def neg(self, operand):
        return UnaryOp("-", operand)

    def pos(self, operand):
        return operand

    def var(self, name: Token):
        if name.value not in VARIABLES:
            raise ParseError(f"unknown variable {name.value!r}", name.line, name.column,
                             error_code="UNKNOWN_NAME")
        return Variable(name.value)

    def call(self, name: Token, *args):
        arity = FUNCTIONS.get(name.value)
        if arity is None:
            raise ParseError(f"unknown function {name.value!r}", name.line, name.column,
                             error_code="UNKNOWN_NAME")
        if len(args) != arity:
            raise ParseError(f"{name.value} takes {arity} argument(s), got {len(args)}", name.line, name.column,
                             error_code="ARITY")
        return Call(name.value, tuple(args))


_parser = Lark(expression_grammar, parser="lalr")


def parse_expression(text: str, line_offset: int = 0, column_offset: int = 0) -> Expression:
    """
    Parse one expression.

    Args:
        text: Source text
        line_offset: Added to reported line numbers (position inside a config file)
        column_offset: Added to reported column numbers on the first line

    Raises:
        ParseError: On a syntax error, an unknown name or a wrong arity
    """
    def located(line, column):
        if line is None or line < 1:
            return None, None
        return line + line_offset, column + (column_offset if line == 1 else 0)

    try:
        return ExpressionBuilder().transform(_parser.parse(text))
    except UnexpectedInput as exc:
        line, column = located(getattr(exc, "line", None), getattr(exc, "column", None))
        raise ParseError(f"invalid expression {text.strip()!r}", line, column) from None
    except VisitError as exc:
        inner = exc.orig_exc
        if isinstance(inner, ParseError):
            line, column = located(inner.line, inner.column)
            raise ParseError(inner.message.split(" (line")[0], line, column, error_code=inner.error_code) from None
        raise
