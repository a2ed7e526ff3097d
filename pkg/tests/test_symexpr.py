import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_expr
from e1dirac.symexpr import (
    DomainError,
    ExprSyntaxError,
    UnknownIdentifier,
    compile_exprs,
    const,
    cos,
    evaluate,
    exp,
    log,
    parse_expr,
    partial,
    simplify,
    sin,
    var,
)

NAMES = ("x", "y", "t")
x, y, t = var("x"), var("y"), var("t")


def env_of(p):
    return dict(zip(NAMES, p))


def test_evaluate_basic():
    assert evaluate(parse_expr("x*y + 1"), {"x": 2, "y": 3}) == 7
    assert evaluate(exp(const(0)), {}) == 1
    assert exp(const(0)) == 1


def test_pythagorean_identity(rng):
    e = sin(x) ** 2 + cos(x) ** 2
    for p in rng.uniform(-5, 5, size=100):
        assert abs(evaluate(e, {"x": p}) - 1) <= 1e-12


def test_partial_examples():
    assert partial(x * y, "x") == y
    assert partial(exp(-t) * x, "t") == -exp(-t) * x
    assert partial(x * x, "x") == 2 * x
    assert partial(x, "y") == 0


def test_simplify_examples():
    assert simplify(0 * x + y) == y
    assert simplify(x - x) == 0
    assert simplify(partial(x ** 2, "x")) == 2 * x


def test_rationals_stay_exact():
    e = parse_expr("1/3 + 1/6")
    assert e == const(Fraction(1, 2))
    assert isinstance(parse_expr("0.5").value, float)


def magnitude(e, env):
    """Sum of absolute term values: the scale of rounding error in ``e``."""
    from e1dirac.symexpr import Add, Mul

    if isinstance(e, Add):
        return abs(float(e.const)) + sum(abs(float(c)) * magnitude(t, env) for t, c in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for b, k in e.factors:
            out *= magnitude(b, env) ** k if k > 0 else abs(evaluate(b, env)) ** k
        return out
    return abs(evaluate(e, env))


def test_partial_against_central_difference(rng):
    h = 1e-5
    checked = 0
    while checked < 200:
        e = random_expr(rng, NAMES, depth=4)
        p = rng.uniform(-1.5, 1.5, size=3)
        i = int(rng.integers(0, 3))
        d = evaluate(partial(e, NAMES[i]), env_of(p))
        pp, pm = p.copy(), p.copy()
        pp[i] += h
        pm[i] -= h
        fd = (evaluate(e, env_of(pp)) - evaluate(e, env_of(pm))) / (2 * h)
        scale = max(1.0, abs(d), magnitude(e, env_of(p)))
        assert abs(d - fd) <= 1e-6 * scale, (str(e), p, d, fd)
        checked += 1


def test_mixed_partials_commute(rng):
    for _ in range(60):
        e = random_expr(rng, NAMES, depth=3)
        a = partial(partial(e, "x"), "y")
        b = partial(partial(e, "y"), "x")
        p = rng.uniform(-1.5, 1.5, size=3)
        va, vb = evaluate(a, env_of(p)), evaluate(b, env_of(p))
        assert abs(va - vb) <= 1e-12 * (1 + abs(va)) * 10


def test_simplify_preserves_value(rng):
    pts = rng.uniform(-2, 2, size=(1000, 3))
    for _ in range(10):
        e = random_expr(rng, NAMES, depth=4)
        s = simplify(e)
        assert simplify(s) == s
        f = compile_exprs([e, s], NAMES)(pts)
        assert np.all(np.abs(f[1] - f[0]) <= 1e-12 * (1 + np.abs(f[0])))


def test_linearity_product_and_chain_rules(rng):
    pts = rng.uniform(-1.5, 1.5, size=(500, 3))
    for _ in range(8):
        a = random_expr(rng, NAMES, depth=3)
        b = random_expr(rng, NAMES, depth=3)
        lin_l = partial(2 * a - 3 * b, "x")
        lin_r = 2 * partial(a, "x") - 3 * partial(b, "x")
        prod_l = partial(a * b, "x")
        prod_r = partial(a, "x") * b + a * partial(b, "x")
        chain_l = partial(sin(a), "y")
        chain_r = cos(a) * partial(a, "y")
        f = compile_exprs([lin_l, lin_r, prod_l, prod_r, chain_l, chain_r], NAMES)(pts)
        for k in (0, 2, 4):
            scale = 1 + np.abs(f[k])
            assert np.all(np.abs(f[k] - f[k + 1]) <= 1e-10 * scale)


def test_compiled_matches_interpreter(rng):
    pts = rng.uniform(-2, 2, size=(50, 3))
    exprs = [random_expr(rng, NAMES, depth=4) for _ in range(15)]
    vals = compile_exprs(exprs, NAMES)(pts)
    for j, e in enumerate(exprs):
        for k, p in enumerate(pts):
            ref = evaluate(e, env_of(p))
            assert abs(vals[j, k] - ref) <= 1e-12 * (1 + abs(ref))


def test_evaluation_is_reproducible(rng):
    e = random_expr(rng, NAMES, depth=5)
    p = env_of(rng.uniform(-1, 1, size=3))
    first = evaluate(e, p)
    again = evaluate(parse_expr(str(e)), p)
    assert first == evaluate(e, p)
    assert abs(first - again) <= 1e-12 * (1 + abs(first))


def test_domain_errors_name_subexpression():
    with pytest.raises(DomainError, match="x - 1"):
        evaluate(parse_expr("1/(x - 1)"), {"x": 1.0})
    with pytest.raises(DomainError, match="log"):
        evaluate(log(x), {"x": -1.0})
    f = compile_exprs([parse_expr("y/x")], ["x", "y"])
    with pytest.raises(DomainError):
        f([[1.0, 1.0], [0.0, 1.0]])


def test_log_of_exp_cancels():
    assert log(exp(x + y)) == x + y
    assert exp(x) * exp(-x) == 1


def test_parser_errors_are_located():
    with pytest.raises(UnknownIdentifier) as info:
        parse_expr("x + w", ["x", "y"])
    assert info.value.column == 5 and info.value.name == "w"
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr("x * (y + 1", ["x", "y"])
    assert info.value.column == 11
    with pytest.raises(ExprSyntaxError):
        parse_expr("x ^ 1.5", ["x"])
    with pytest.raises(ExprSyntaxError):
        parse_expr("", ["x"])
    with pytest.raises(ExprSyntaxError):
        parse_expr("sin x", ["x"])


def test_parser_grammar_cases():
    env = {"x": 0.7, "y": -0.3, "t": 0.2}
    cases = {
        "-x^2": -0.49,
        "2^-1*x": 0.35,
        "x/y/2": 0.7 / -0.3 / 2,
        "exp(t)*(x - y)": math.exp(0.2) * 1.0,
        "1.5e1*y": -4.5,
    }
    for text, expected in cases.items():
        assert abs(evaluate(parse_expr(text, env), env) - expected) < 1e-12, text


_leaf = st.one_of(
    st.integers(-5, 5).map(const),
    st.sampled_from(NAMES).map(var),
)


def _combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda ab: ab[0] + ab[1]),
        st.tuples(children, children).map(lambda ab: ab[0] - ab[1]),
        st.tuples(children, children).map(lambda ab: ab[0] * ab[1]),
        st.tuples(children, st.integers(2, 3)).map(lambda ak: ak[0] ** ak[1]),
        children.map(sin),
        children.map(lambda a: exp(sin(a))),
    )


exprs = st.recursive(_leaf, _combine, max_leaves=8)


@settings(max_examples=80, deadline=None)
@given(exprs)
def test_print_parse_round_trip(e):
    again = parse_expr(str(e), NAMES)
    assert again == e or abs(evaluate(again, env_of((0.3, -0.2, 0.1))) - evaluate(e, env_of((0.3, -0.2, 0.1)))) < 1e-12


@settings(max_examples=80, deadline=None)
@given(exprs, st.sampled_from(NAMES))
def test_derivative_is_an_expression(e, name):
    d = partial(e, name)
    p = env_of((0.3, -0.2, 0.1))
    assert math.isfinite(evaluate(d, p))
    # differentiating twice stays closed and consistent with simplify
    assert simplify(partial(d, name)) == simplify(simplify(partial(d, name)))
