"""Expression language: parsing, evaluation, differentiation."""

import cmath

import numpy as np
import pytest

from slspectral.expr import (
    ExprDomainError,
    ExprSyntaxError,
    compile_scalar,
    differentiate,
    evaluate,
    parse,
    to_string,
)


CASES = [
    ("1", 2.0, 1.0),
    ("y", 3.5, 3.5),
    ("y^2", 3.0, 9.0),
    ("2*y + 1", 2.0, 5.0),
    ("1/(4*y) + 2*y/(y-1/2)^2", 1.0, 0.25 + 8.0),
    ("exp(-2*y)", 0.5, np.exp(-1.0)),
    ("(y^2+1)*exp(-2*y)", 1.0, 2.0 * np.exp(-2.0)),
    ("exp(i*y)", np.pi / 2, 1j),
    ("sin(pi*y)", 0.5, 1.0),
    ("sqrt(y)", 4.0, 2.0),
    ("-y^2", 2.0, -4.0),  # ^ binds tighter than unary minus
    ("2^3^2", 1.0, 512.0),  # right-associative
    ("abs(-3*y)", 2.0, 6.0),
    ("log(exp(y))", 1.25, 1.25),
]


@pytest.mark.parametrize("text,y,expected", CASES)
def test_evaluate(text, y, expected):
    got = evaluate(parse(text), y)
    assert abs(got - expected) <= 1e-14 * (1 + abs(expected))


@pytest.mark.parametrize("text,y,expected", CASES)
def test_compiled_matches_tree(text, y, expected):
    fn = compile_scalar(parse(text))
    assert fn(y) == pytest.approx(evaluate(parse(text), y), rel=1e-15, abs=1e-300)


def test_array_evaluation_matches_scalar():
    node = parse("exp(i*y) * (y^2 + 1) / (y + 3)")
    ys = np.linspace(0.0, 2.0, 17)
    arr = evaluate(node, ys)
    for k, y in enumerate(ys):
        assert arr[k] == pytest.approx(evaluate(node, complex(y)), rel=1e-15)


@pytest.mark.parametrize(
    "text",
    ["", "y +", "((y)", "2 ** 3", "foo(y)", "1..2", "y @ 2"],
)
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_syntax_error_carries_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse("y + $")
    assert err.value.offset == 4
    assert "offset 4" in str(err.value)


def test_domain_error_at_pole():
    with pytest.raises(ExprDomainError):
        evaluate(parse("1/(y-1)"), 1.0)


def test_differentiate_against_central_difference():
    rng = np.random.default_rng(7)
    for text in ["y^3 - 2*y", "exp(-2*y)*sin(y)", "1/(4*y) + 2*y/(y-1/2)^2", "sqrt(y+2)"]:
        node = parse(text)
        dnode = differentiate(node)
        for y in rng.uniform(0.7, 2.0, 5):
            h = 1e-6
            fd = (evaluate(node, y + h) - evaluate(node, y - h)) / (2 * h)
            assert evaluate(dnode, y) == pytest.approx(fd, rel=1e-8, abs=1e-10)


def test_to_string_round_trip():
    for text in ["y^2 + 1", "-(y + 2)^2", "exp(i*y)/(y - 1/2)", "2*pi*y"]:
        node = parse(text)
        again = parse(to_string(node))
        ys = np.linspace(0.6, 1.9, 7)
        assert np.allclose(evaluate(node, ys), evaluate(again, ys), rtol=1e-15)
