import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from minkenv.dual import DomainError
from minkenv.expr import (
    Binary, Num, ParseError, Unary, Var, eval_dual, evaluate, is_constant, parse, to_source,
)


@pytest.mark.parametrize("src, t, val, der", [
    ("sqrt(1+t^6)", 1.0, math.sqrt(2), 3 / math.sqrt(2)),
    ("2-t", 0.5, 1.5, -1.0),
    ("cosh(t)", 0.0, 1.0, 0.0),
    ("t^2/2+t^3/3", 2.0, 2 + 8 / 3, 2 + 4),
    ("-t^2", 3.0, -9.0, -6.0),
    ("2^t", 1.0, 2.0, 2 * math.log(2)),
    ("abs(t)", -2.0, 2.0, -1.0),
    ("exp(log(t))", 2.5, 2.5, 1.0),
    ("pi*t", 1.0, math.pi, math.pi),
])
def test_values_and_derivatives(src, t, val, der):
    d = eval_dual(parse(src), t)
    assert float(d.val) == pytest.approx(val, rel=1e-14)
    assert float(d.der) == pytest.approx(der, rel=1e-14, abs=1e-15)


def test_precedence():
    assert evaluate(parse("1+2*3^2"), 0.0) == 19.0
    assert evaluate(parse("2^3^2"), 0.0) == 512.0
    assert evaluate(parse("-2^2"), 0.0) == -4.0
    assert evaluate(parse("(1+2)*3"), 0.0) == 9.0
    assert evaluate(parse("8/4/2"), 0.0) == 1.0


@pytest.mark.parametrize("src, pos", [("2-)", 2), ("", 0), ("sin(t)", 0), ("t+", 2), ("(t", 2)])
def test_parse_errors(src, pos):
    with pytest.raises(ParseError) as err:
        parse(src)
    assert err.value.position == pos


@pytest.mark.parametrize("src, t", [("sqrt(t)", -1.0), ("log(t)", 0.0), ("1/t", 0.0)])
def test_domain_errors(src, t):
    with pytest.raises(DomainError):
        eval_dual(parse(src), t)


def test_value_only_evaluation_allows_kinks():
    assert evaluate(parse("abs(t)"), 0.0) == 0.0
    assert evaluate(parse("sqrt(t)"), 0.0) == 0.0


def test_array_broadcast():
    t = np.linspace(-1, 1, 7)
    d = eval_dual(parse("3"), t)
    assert d.val.shape == t.shape and np.all(d.der == 0)


# random expression trees over functions that are defined on (0.2, 1.5)
_safe_unary = st.sampled_from(["sinh", "cosh", "tanh", "exp", "neg"])


def _trees():
    leaves = st.one_of(st.just(Var()), st.floats(0.5, 3.0).map(Num))

    def extend(children):
        return st.one_of(
            st.builds(Unary, _safe_unary, children),
            st.builds(Binary, st.sampled_from(["+", "-", "*"]), children, children),
            st.builds(lambda a: Unary("sqrt", Binary("+", Num(1.0), Binary("*", a, a))), children),
        )
    return st.recursive(leaves, extend, max_leaves=6)


@settings(max_examples=150, deadline=None)
@given(_trees(), st.floats(0.2, 1.5))
def test_ad_matches_central_difference(tree, t):
    d = eval_dual(tree, t)
    assume(abs(float(d.val)) < 1e6)
    h = 1e-5 * (1 + abs(t))
    fd = (evaluate(tree, t + h) - evaluate(tree, t - h)) / (2 * h)
    assert float(d.der) == pytest.approx(fd, rel=1e-5, abs=1e-6)


@settings(max_examples=150, deadline=None)
@given(_trees(), st.floats(0.2, 1.5))
def test_print_parse_round_trip(tree, t):
    back = parse(to_source(tree))
    a, b = evaluate(tree, t), evaluate(back, t)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


@given(st.floats(-5, 5))
def test_constants_have_zero_derivative(c):
    node = parse(f"sinh({c!r})*2+1")
    assert is_constant(node)
    assert float(eval_dual(node, 0.7).der) == 0.0
