"""
Tests for the expression language: parsing, printing, evaluation and
symbolic differentiation.
"""

import math

import numpy as np
import pytest

from interfem.src.exceptions import EvalError, ParseError, ValidationError
from interfem.src.expressions import (
    BinaryOp,
    Number,
    UnaryOp,
    Variable,
    as_function,
    differentiate,
    evaluate,
    evaluate_point,
    laplacian,
    parse_expression,
    to_text,
    variables_of,
)

POINTS = np.array([[0.3, 0.4], [-0.7, 0.2], [0.5, -0.9]])

SAMPLES = [
    "x^2 + y^2",
    "-(8/3)*cos(theta)",
    "-(1/3)*(x - x/r^2)",
    "exp(-x)*sin(pi*y)",
    "pow(r, 3) - 2*log(1 + r)",
    "sqrt(1 + x^2)/abs(y - 2)",
]


def test_precedence():
    """Test operator precedence and associativity."""
    assert evaluate_point(parse_expression("1 + 2*3"), 0, 0) == 7.0
    assert evaluate_point(parse_expression("2^3^2"), 0, 0) == 512.0
    assert evaluate_point(parse_expression("-2^2"), 0, 0) == -4.0
    assert evaluate_point(parse_expression("8/4/2"), 0, 0) == 1.0
    assert evaluate_point(parse_expression("2^-1"), 0, 0) == 0.5


def test_tree_shape():
    """Test the parsed tree of a small expression."""
    tree = parse_expression("-x^2 + 1")
    assert tree == BinaryOp("+", UnaryOp("-", BinaryOp("^", Variable("x"), Number(2.0))), Number(1.0))
    assert variables_of(parse_expression("sin(theta) * r + pi")) == {"theta", "r", "pi"}


@pytest.mark.parametrize("text", SAMPLES)
def test_printing_reparses_to_equal_tree(text):
    """Test that the printed form parses back to the same tree."""
    tree = parse_expression(text)
    assert parse_expression(to_text(tree)) == tree


@pytest.mark.parametrize("text", SAMPLES)
def test_vector_and_scalar_evaluation_agree(text):
    """Test the numpy interpreter against the scalar one."""
    tree = parse_expression(text)
    values = evaluate(tree, POINTS)
    expected = [evaluate_point(tree, x, y) for x, y in POINTS]
    np.testing.assert_allclose(values, expected, rtol=1e-14)


def test_polar_variables():
    """Test r and theta."""
    np.testing.assert_allclose(evaluate(parse_expression("r"), [[3.0, 4.0]]), [5.0])
    np.testing.assert_allclose(evaluate(parse_expression("theta"), [[0.0, 1.0]]), [math.pi / 2])


@pytest.mark.parametrize("text,code", [
    ("x +", "PARSE_ERROR"),
    ("foo(x)", "UNKNOWN_NAME"),
    ("z + 1", "UNKNOWN_NAME"),
    ("pow(x)", "ARITY"),
    ("sin(x, y)", "ARITY"),
])
def test_parse_errors(text, code):
    """Test syntax, name and arity errors."""
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.error_code == code


def test_parse_error_location_with_offsets():
    """Test that reported positions include the line and column offsets."""
    with pytest.raises(ParseError) as info:
        parse_expression("x + w", line_offset=9, column_offset=4)
    assert info.value.line == 10
    assert info.value.column == 9


@pytest.mark.parametrize("text,point", [
    ("1/x", (0.0, 1.0)),
    ("log(x)", (-1.0, 0.0)),
    ("sqrt(y)", (0.0, -1.0)),
    ("x^0.5", (-1.0, 0.0)),
    ("x^-1", (0.0, 2.0)),
    ("exp(x)", (1000.0, 0.0)),
])
def test_eval_errors(text, point):
    """Test that undefined operations raise instead of returning nan or inf."""
    tree = parse_expression(text)
    with pytest.raises(EvalError):
        evaluate(tree, [point])
    with pytest.raises(EvalError):
        evaluate_point(tree, *point)


def test_as_function_shape():
    """Test vector-valued data callables."""
    func = as_function([parse_expression("x"), parse_expression("2*y")])
    np.testing.assert_allclose(func(POINTS), np.column_stack([POINTS[:, 0], 2 * POINTS[:, 1]]))


@pytest.mark.parametrize("text", SAMPLES[:5])
def test_derivatives_match_finite_differences(text):
    """Test symbolic derivatives against central differences."""
    tree = parse_expression(text)
    eps = 1e-6
    for var, shift in (("x", np.array([eps, 0.0])), ("y", np.array([0.0, eps]))):
        exact = evaluate(differentiate(tree, var), POINTS)
        numeric = (evaluate(tree, POINTS + shift) - evaluate(tree, POINTS - shift)) / (2 * eps)
        np.testing.assert_allclose(exact, numeric, rtol=1e-6, atol=1e-6)


def test_derivative_simplification():
    """Test that derivatives of polynomials fold constants."""
    assert differentiate(parse_expression("3*x + y"), "x") == Number(3.0)
    assert differentiate(parse_expression("pi"), "y") == Number(0.0)
    assert differentiate(parse_expression("x^2"), "x") == BinaryOp("*", Number(2.0), Variable("x"))


def test_laplacian():
    """Test the Laplacian of harmonic and quadratic expressions."""
    harmonic = laplacian(parse_expression("x - x/r^2"))
    np.testing.assert_allclose(evaluate(harmonic, POINTS), 0.0, atol=1e-10)
    assert evaluate_point(laplacian(parse_expression("1 - x^2 - y^2")), 0.2, 0.1) == pytest.approx(-4.0)


def test_differentiate_rejects_other_variables():
    """Test the variable check."""
    with pytest.raises(ValidationError):
        differentiate(parse_expression("x"), "r")


if __name__ == "__main__":
    pytest.main([__file__])
