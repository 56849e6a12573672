import math

import numpy as np
import pytest

from core.errors import ArityMismatchError, ExprSyntaxError, SystemDefinitionError, UnknownIdentifierError
from core.expr import (
    ZERO, Add, Const, Cos, Declaration, Div, Env, Expr, Mul, Neg, PowInt, Sin, Sqr, Sqrt, StateVar, Sub,
    differentiate, eval_interval, lie_derivative, substitute_params,
)
from core.interval import EMPTY, Box, Interval
from core.parser import parse_expr, parse_expr_tuple

DECL = Declaration(("x1", "x2"), ("p1", "p2", "p3"))


def parse(text: str) -> Expr:
    return parse_expr(text, DECL)


def same_function(e1: Expr, e2: Expr, rng, n=50) -> bool:
    for _ in range(n):
        x = rng.uniform(-2, 2, size=2)
        p = rng.uniform(-0.5, 0.5, size=3)
        if not math.isclose(e1.eval_point(x, p), e2.eval_point(x, p), rel_tol=1e-12, abs_tol=1e-12):
            return False
    return True


# --- Parsing ---

def test_parse_state_variable():
    e = parse_expr("x2", Declaration(("x1", "x2"), ("p1",)))
    assert isinstance(e, StateVar)
    assert e.index == 1


def test_parse_lie_derivative_text(rng):
    e = parse("2*x1*x2 + 2*x2*(p1 - sin(x1))")
    x1, x2 = StateVar(0, "x1"), StateVar(1, "x2")
    assert isinstance(e, Add)
    assert same_function(
        e,
        Add(Mul(Mul(Const(2), x1), x2), Mul(Mul(Const(2), x2), Sub(parse("p1"), Sin(x1)))),
        rng,
    )


def test_parse_precedence():
    x = ([0.5, 2.0], [0.0, 0.0, 0.0])
    assert parse("-x1^2").eval_point(*x) == -0.25
    assert parse("x2^-1").eval_point(*x) == 0.5
    assert parse("x2^(-2)").eval_point(*x) == 0.25
    assert parse("1 - x2 - 1").eval_point(*x) == -2.0
    assert parse("x2 / x2 * x2").eval_point(*x) == 2.0
    assert parse("sqr(x2) + sqrt(4)").eval_point(*x) == 6.0
    assert isinstance(parse("-x1^2"), Neg)
    assert isinstance(parse("(x1)^3"), PowInt)


def test_unknown_identifier_position():
    with pytest.raises(UnknownIdentifierError) as err:
        parse("x1 + q")
    assert err.value.name == "q"
    assert err.value.column == 6


@pytest.mark.parametrize("text", ["x1 +", "x1 ^ 1.5", "(x1", "x1 x2", "sin x1", "x1 $ 2", ""])
def test_syntax_errors(text):
    with pytest.raises(ExprSyntaxError):
        parse(text)


def test_syntax_error_reports_column():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("x1 * * x2", DECL, line=4, column=10)
    assert err.value.line == 4
    assert err.value.column == 15


def test_parse_tuple():
    field = parse_expr_tuple("( x2 , p1 - sin(x1) )", DECL)
    assert len(field) == 2
    assert str(field[1]) == "p1 - sin(x1)"


def test_duplicate_declaration():
    with pytest.raises(SystemDefinitionError):
        Declaration(("x1", "x1"))


# --- Evaluation ---

def test_eval_lie_expression_at_point_box():
    e = parse_expr("2*x1*x2 + 2*x2*(p1 - sin(x1))", Declaration(("x1", "x2"), ("p1",)))
    r = eval_interval(e, Env(Box.from_bounds([[0, 0], [1, 1]]), Box.from_bounds([[0, 0]])))
    assert r.contains(0.0)


def test_eval_swing_constraint():
    e = parse("(x1+p2)^2+(x2+p3)^2-1")
    state = Box.from_bounds([[-0.1, 0.1], [-0.1, 0.1]])
    params = Box.from_bounds([[-0.1, 0.1]] * 3)
    r = eval_interval(e, Env(state, params))
    assert r.lo >= -1 - 1e-12
    assert r.hi <= -0.92 + 1e-12


def test_eval_on_empty_box():
    e = parse("x1 + x2")
    state = Box((EMPTY, Interval(0, 1)))
    assert eval_interval(e, Env(state, Box.from_bounds([[0, 0]] * 3))).is_empty


def test_point_eval_outside_domain_is_nan():
    assert math.isnan(parse("sqrt(x1)").eval_point([-1.0, 0.0], [0, 0, 0]))
    assert math.isnan(parse("1/x1").eval_point([0.0, 0.0], [0, 0, 0]))


# --- Differentiation ---

def test_derivative_of_circle():
    assert str(differentiate(parse("x1^2+x2^2-1"), 0)) == "2*x1"


def test_derivative_of_sin():
    assert differentiate(parse("sin(x1)"), 0) == Cos(StateVar(0, "x1"))


def test_derivative_independent_of_variable():
    assert differentiate(parse("p1 - sin(x1)"), 1) == ZERO


def _random_expr(rng, depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.4:
            return StateVar(int(rng.integers(0, 2)), "")
        if r < 0.7:
            return Const(float(np.round(rng.uniform(-3, 3), 2)))
        return parse(f"p{int(rng.integers(1, 4))}")
    kind = rng.integers(0, 10)
    a = _random_expr(rng, depth - 1)
    if kind == 0:
        return Add(a, _random_expr(rng, depth - 1))
    if kind == 1:
        return Sub(a, _random_expr(rng, depth - 1))
    if kind == 2:
        return Mul(a, _random_expr(rng, depth - 1))
    if kind == 3:
        return Sin(a)
    if kind == 4:
        return Cos(a)
    if kind == 5:
        return Sqr(a)
    if kind == 6:
        return Neg(a)
    if kind == 7:
        # radicand and divisor stay >= 0.5
        return Sqrt(Add(Sqr(a), Const(0.5)))
    if kind == 8:
        return Div(a, Add(Sqr(_random_expr(rng, depth - 1)), Const(0.5)))
    return PowInt(a, int(rng.integers(2, 4)))


def test_derivatives_match_finite_differences(rng):
    h = 1e-6
    for _ in range(100):
        e = _random_expr(rng, 3)
        for v in (0, 1):
            d = differentiate(e, v)
            for _ in range(10):
                x = rng.uniform(-1, 1, size=2)
                p = rng.uniform(-0.1, 0.1, size=3)
                step = np.zeros(2)
                step[v] = h
                fd = (e.eval_point(x + step, p) - e.eval_point(x - step, p)) / (2 * h)
                exact = d.eval_point(x, p)
                assert abs(exact - fd) <= 1e-6 * max(1.0, abs(exact), abs(e.eval_point(x, p))), (str(e), v, x)


def test_quotient_and_root_derivatives(rng):
    e = parse("sqrt(x1^2 + 1) / (x2^2 + 2)")
    d1 = parse("x1 / sqrt(x1^2 + 1) / (x2^2 + 2)")
    d2 = parse("-2*x2*sqrt(x1^2 + 1) / (x2^2 + 2)^2")
    assert same_function(differentiate(e, 0), d1, rng)
    assert same_function(differentiate(e, 1), d2, rng)


def _random_env(rng) -> Env:
    lo = rng.uniform(-2, 2, size=5)
    width = rng.uniform(0, 1, size=5)
    return Env(
        Box.from_bounds(list(zip(lo[:2], lo[:2] + width[:2]))),
        Box.from_bounds(list(zip(lo[2:], lo[2:] + width[2:]))),
    )


def _sub_env(rng, env: Env) -> Env:
    def shrink(box: Box) -> Box:
        bounds = [np.sort(rng.uniform(c.lo, c.hi, size=2)) for c in box]
        return Box.from_bounds([(float(a), float(b)) for a, b in bounds])
    return Env(shrink(env.state_box), shrink(env.param_box))


def test_eval_interval_is_inclusion_monotone(rng):
    for _ in range(300):
        e = _random_expr(rng, 3)
        outer = _random_env(rng)
        outer_value = eval_interval(e, outer)
        for _ in range(5):
            inner = _sub_env(rng, outer)
            assert eval_interval(e, inner).subset_of(outer_value), str(e)
            x = rng.uniform(inner.state_box.lower, inner.state_box.upper)
            p = rng.uniform(inner.param_box.lower, inner.param_box.upper)
            value = e.eval_point(x, p)
            if math.isfinite(value):
                assert eval_interval(e, inner).contains(value), (str(e), x, p)


def test_power_overflow_gives_infinity():
    x = ([1e200, -1e200], [0.0, 0.0, 0.0])
    assert parse("x1^3").eval_point(*x) == math.inf
    assert parse("x2^3").eval_point(*x) == -math.inf
    assert parse("x2^2").eval_point(*x) == math.inf
    assert parse("x1^(-2)").eval_point([1e-200, 0.0], [0.0, 0.0, 0.0]) == math.inf


# --- Parameter substitution ---

def test_substitute_params_folds_zero_offsets():
    e = parse("(x1 + p2)^2 + (x2 + p3)^2 - 1")
    assert str(substitute_params(e, {1: 0.0, 2: 0.0})) == "x1^2 + x2^2 - 1"
    assert substitute_params(e, {}) == e


def test_substitute_params_keeps_other_parameters(rng):
    e = parse("p1*sin(x1) + p2/x2 - sqrt(p3 + 4)")
    fixed = substitute_params(e, {1: 0.5})
    assert fixed.params_used() == frozenset({0, 2})
    for _ in range(20):
        x = rng.uniform(0.5, 2, size=2)
        p = rng.uniform(-0.1, 0.1, size=3)
        assert fixed.eval_point(x, p) == pytest.approx(e.eval_point(x, [p[0], 0.5, p[2]]))




def test_printed_expressions_reparse(rng):
    for _ in range(200):
        e = _random_expr(rng, 4)
        back = parse(str(e))
        assert same_function(e, back, rng, n=5), str(e)


# --- Lie derivatives ---

SWING_A = ("x2", "p1 - sin(x1)")
SWING_B = ("x2", "p1 - sin(x1) - x2")


def test_lie_derivative_of_circle(rng):
    c = parse("x1^2+x2^2-1")
    la = lie_derivative(c, [parse(t) for t in SWING_A], 2)
    assert same_function(la, parse("2*x1*x2 + 2*x2*(p1 - sin(x1))"), rng)


def test_lie_derivative_of_half_plane():
    c = parse("x2+0.2")
    lb = lie_derivative(c, [parse(t) for t in SWING_B], 2)
    assert str(lb) == "p1 - sin(x1) - x2"


def test_lie_derivative_of_constant():
    assert lie_derivative(Const(3.0), [parse(t) for t in SWING_A]) == ZERO


def test_lie_derivative_arity():
    with pytest.raises(ArityMismatchError):
        lie_derivative(parse("x1 + x2"), [parse("x2")], 2)
    with pytest.raises(ArityMismatchError):
        lie_derivative(parse("x1 + x2"), [parse("x2")])
