import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from operators.seq_expr import (
    BinOp,
    Neg,
    Number,
    Pow,
    Var,
    depth,
    evaluate,
    parse,
    to_source,
)
from utils.errors import EvaluationError, ExprSyntaxError

CLASS_B_A = "1 + 1/(2*(n+1)^2) + 1/(2*(n+1)^3)"


@pytest.mark.parametrize('src, n, expected', [
    ("2+3*4", 1, 14.0),
    ("-2^2", 1, -4.0),
    ("(-2)^2", 1, 4.0),
    ("8/4/2", 1, 1.0),
    ("2 - 3 - 4", 1, -5.0),
    ("n^2 + 1", 3, 10.0),
    ("1/n", 4, 0.25),
    ("n^-2", 2, 0.25),
    ("1.5e1 + .5", 1, 15.5),
    (CLASS_B_A, 1, 1.1875),
])
def test_evaluate(src, n, expected):
    assert evaluate(parse(src), n) == pytest.approx(expected, rel=1e-15)


def test_evaluate_over_array():
    values = evaluate(parse("1 + 1/n"), np.arange(1, 5))
    assert np.allclose(values, [2.0, 1.5, 4.0 / 3.0, 1.25])


def test_constant_formula_over_array_broadcasts():
    values = evaluate(parse("1/2"), np.arange(1, 4))
    assert values.shape == (3,)
    assert np.all(values == 0.5)


def test_parse_structure():
    assert parse("-2^2") == Neg(Pow(Number(2.0), 2))
    assert parse("n*2") == BinOp('*', Var(), Number(2.0))


@pytest.mark.parametrize('src, offset', [
    ("2 +", 3),
    ("2 $ 3", 2),
    ("x + 1", 0),
    ("n^2.5", 2),
    ("n^13", 2),
    ("(n + 1", 6),
    ("1 2", 2),
    ("", 0),
])
def test_parse_errors_carry_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.offset == offset


def test_parse_rejects_non_ascii():
    with pytest.raises(ExprSyntaxError):
        parse("n²")


def test_parse_rejects_deep_nesting():
    with pytest.raises(ExprSyntaxError):
        parse("(" * 65 + "n" + ")" * 65)
    with pytest.raises(ExprSyntaxError):
        parse("-" * 70 + "n")
    assert depth(parse("(" * 10 + "n" + ")" * 10)) == 1


def test_division_by_zero_reports_n():
    with pytest.raises(EvaluationError, match="n=3"):
        evaluate(parse("1/(n-3)"), np.arange(1, 6))
    with pytest.raises(EvaluationError):
        evaluate(parse("(n-1)^-1"), 1)


def test_non_finite_result():
    with pytest.raises(EvaluationError):
        evaluate(parse("1e300*1e300"), 1)


def test_evaluate_rejects_n_below_one():
    with pytest.raises(ValueError):
        evaluate(parse("n"), 0)


def test_canonical_source_parses_back():
    ast = parse("1 + 1/n")
    source = to_source(ast)
    assert source == "(1.0 + (1.0 / n))"
    assert parse(source) == ast


def formulas(max_leaves=12):
    leaves = st.one_of(
        st.just(Var()),
        st.floats(0.0, 100.0, allow_nan=False).map(Number),
    )

    def extend(children):
        return st.one_of(
            children.map(Neg),
            st.tuples(st.sampled_from('+-*/'), children, children).map(lambda t: BinOp(*t)),
            st.tuples(children, st.integers(-3, 3)).map(lambda t: Pow(*t)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@seed(4)
@settings(max_examples=200, deadline=None)
@given(formulas())
def test_to_source_parses_back(ast):
    assert parse(to_source(ast)) == ast
