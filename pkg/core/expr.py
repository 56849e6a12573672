"""
Expression trees over state variables x and parameters p.

Nodes are immutable. Each one knows how to evaluate itself over boxes
(natural inclusion function), at a point, and how to differentiate itself
with respect to a state variable. Printing yields text that ``parse_expr``
reads back.
"""
import math
from dataclasses import dataclass, replace
from typing import FrozenSet, List, Mapping, Optional, Sequence, Tuple

from core import interval as ia
from core.errors import ArityMismatchError, SystemDefinitionError
from core.interval import EMPTY, Box, Interval

# Printing precedence
_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class Declaration:
    """Ordered names of the state variables and parameters an Expr is built against."""
    states: Tuple[str, ...]
    params: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "params", tuple(self.params))
        names = self.states + self.params
        seen = set()
        for name in names:
            if name in seen:
                raise SystemDefinitionError(f"identifier '{name}' declared twice")
            seen.add(name)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_params(self) -> int:
        return len(self.params)

    def lookup(self, name: str) -> Optional["Expr"]:
        if name in self.states:
            return StateVar(self.states.index(name), name)
        if name in self.params:
            return ParamVar(self.params.index(name), name)
        return None


@dataclass(frozen=True)
class Env:
    state_box: Box
    param_box: Box


class Expr:
    """Base node. Subclasses are frozen dataclasses."""
    precedence = _P_ATOM

    def eval(self, env: Env) -> Interval:
        raise NotImplementedError

    def eval_point(self, x: Sequence[float], p: Sequence[float]) -> float:
        raise NotImplementedError

    def diff(self, v: int) -> "Expr":
        raise NotImplementedError

    def children(self) -> Tuple["Expr", ...]:
        return ()

    def params_used(self) -> FrozenSet[int]:
        found = set()
        stack: List[Expr] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, ParamVar):
                found.add(node.index)
            stack.extend(node.children())
        return frozenset(found)

    def states_used(self) -> FrozenSet[int]:
        found = set()
        stack: List[Expr] = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, StateVar):
                found.add(node.index)
            stack.extend(node.children())
        return frozenset(found)

    def _wrap(self, child: "Expr", min_prec: int) -> str:
        text = str(child)
        return f"({text})" if child.precedence < min_prec else text


# --- Leaves ---

@dataclass(frozen=True)
class Const(Expr):
    value: float

    @property
    def precedence(self) -> int:
        return _P_NEG if self.value < 0 else _P_ATOM

    def eval(self, env: Env) -> Interval:
        return Interval(self.value, self.value)

    def eval_point(self, x, p) -> float:
        return self.value

    def diff(self, v: int) -> Expr:
        return ZERO

    def __str__(self) -> str:
        if float(self.value).is_integer() and abs(self.value) < 1e15:
            return str(int(self.value))
        return repr(float(self.value))


@dataclass(frozen=True)
class StateVar(Expr):
    index: int
    name: str = ""

    def eval(self, env: Env) -> Interval:
        return env.state_box[self.index]

    def eval_point(self, x, p) -> float:
        return x[self.index]

    def diff(self, v: int) -> Expr:
        return ONE if v == self.index else ZERO

    def __str__(self) -> str:
        return self.name or f"x{self.index + 1}"


@dataclass(frozen=True)
class ParamVar(Expr):
    index: int
    name: str = ""

    def eval(self, env: Env) -> Interval:
        return env.param_box[self.index]

    def eval_point(self, x, p) -> float:
        return p[self.index]

    def diff(self, v: int) -> Expr:
        return ZERO

    def __str__(self) -> str:
        return self.name or f"p{self.index + 1}"


ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


# --- Constructors with zero/one folding ---

def make_add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return Add(a, b)


def make_sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return make_neg(b)
    return Sub(a, b)


def make_mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Mul(a, b)


def make_div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Div(a, b)


def make_neg(a: Expr) -> Expr:
    if _is_const(a, 0.0):
        return ZERO
    return Neg(a)


def make_pow(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    return PowInt(a, n)


# --- Binary nodes ---

@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr
    precedence = _P_ADD

    def children(self):
        return (self.left, self.right)

    def eval(self, env: Env) -> Interval:
        return ia.add(self.left.eval(env), self.right.eval(env))

    def eval_point(self, x, p) -> float:
        return self.left.eval_point(x, p) + self.right.eval_point(x, p)

    def diff(self, v: int) -> Expr:
        return make_add(self.left.diff(v), self.right.diff(v))

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _P_ADD)} + {self._wrap(self.right, _P_MUL)}"


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr
    precedence = _P_ADD

    def children(self):
        return (self.left, self.right)

    def eval(self, env: Env) -> Interval:
        return ia.sub(self.left.eval(env), self.right.eval(env))

    def eval_point(self, x, p) -> float:
        return self.left.eval_point(x, p) - self.right.eval_point(x, p)

    def diff(self, v: int) -> Expr:
        return make_sub(self.left.diff(v), self.right.diff(v))

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _P_ADD)} - {self._wrap(self.right, _P_MUL)}"


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr
    precedence = _P_MUL

    def children(self):
        return (self.left, self.right)

    def eval(self, env: Env) -> Interval:
        return ia.mul(self.left.eval(env), self.right.eval(env))

    def eval_point(self, x, p) -> float:
        return self.left.eval_point(x, p) * self.right.eval_point(x, p)

    def diff(self, v: int) -> Expr:
        return make_add(
            make_mul(self.left.diff(v), self.right),
            make_mul(self.left, self.right.diff(v)),
        )

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _P_MUL)}*{self._wrap(self.right, _P_NEG)}"


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr
    precedence = _P_MUL

    def children(self):
        return (self.left, self.right)

    def eval(self, env: Env) -> Interval:
        return ia.div(self.left.eval(env), self.right.eval(env))

    def eval_point(self, x, p) -> float:
        den = self.right.eval_point(x, p)
        if den == 0.0:
            return math.nan
        return self.left.eval_point(x, p) / den

    def diff(self, v: int) -> Expr:
        num = make_sub(
            make_mul(self.left.diff(v), self.right),
            make_mul(self.left, self.right.diff(v)),
        )
        return make_div(num, Sqr(self.right))

    def __str__(self) -> str:
        return f"{self._wrap(self.left, _P_MUL)}/{self._wrap(self.right, _P_POW)}"


# --- Unary nodes ---

@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    precedence = _P_NEG

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.neg(self.arg.eval(env))

    def eval_point(self, x, p) -> float:
        return -self.arg.eval_point(x, p)

    def diff(self, v: int) -> Expr:
        return make_neg(self.arg.diff(v))

    def __str__(self) -> str:
        return f"-{self._wrap(self.arg, _P_POW)}"


@dataclass(frozen=True)
class Sqr(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.sqr(self.arg.eval(env))

    def eval_point(self, x, p) -> float:
        a = self.arg.eval_point(x, p)
        return a * a

    def diff(self, v: int) -> Expr:
        return make_mul(make_mul(Const(2.0), self.arg), self.arg.diff(v))

    def __str__(self) -> str:
        return f"sqr({self.arg})"


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.sqrt(self.arg.eval(env))

    def eval_point(self, x, p) -> float:
        a = self.arg.eval_point(x, p)
        return math.sqrt(a) if a >= 0.0 else math.nan

    def diff(self, v: int) -> Expr:
        return make_div(self.arg.diff(v), make_mul(Const(2.0), self))

    def __str__(self) -> str:
        return f"sqrt({self.arg})"


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.sin(self.arg.eval(env))

    def eval_point(self, x, p) -> float:
        return math.sin(self.arg.eval_point(x, p))

    def diff(self, v: int) -> Expr:
        return make_mul(Cos(self.arg), self.arg.diff(v))

    def __str__(self) -> str:
        return f"sin({self.arg})"


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.cos(self.arg.eval(env))

    def eval_point(self, x, p) -> float:
        return math.cos(self.arg.eval_point(x, p))

    def diff(self, v: int) -> Expr:
        return make_neg(make_mul(Sin(self.arg), self.arg.diff(v)))

    def __str__(self) -> str:
        return f"cos({self.arg})"


@dataclass(frozen=True)
class PowInt(Expr):
    arg: Expr
    exponent: int
    precedence = _P_POW

    def children(self):
        return (self.arg,)

    def eval(self, env: Env) -> Interval:
        return ia.pow_int(self.arg.eval(env), self.exponent)

    def eval_point(self, x, p) -> float:
        a = self.arg.eval_point(x, p)
        if a == 0.0 and self.exponent < 0:
            return math.nan
        try:
            return a ** self.exponent
        except OverflowError:
            return math.inf if self.exponent % 2 == 0 or a > 0.0 else -math.inf

    def diff(self, v: int) -> Expr:
        n = self.exponent
        if n == 0:
            return ZERO
        return make_mul(make_mul(Const(float(n)), make_pow(self.arg, n - 1)), self.arg.diff(v))

    def __str__(self) -> str:
        exp = str(self.exponent) if self.exponent >= 0 else f"({self.exponent})"
        return f"{self._wrap(self.arg, _P_ATOM)}^{exp}"


# --- Operations ---

def eval_interval(e: Expr, env: Env) -> Interval:
    """Natural inclusion function of e over state_box x param_box."""
    if env.state_box.is_empty or env.param_box.is_empty:
        return EMPTY
    return e.eval(env)


def differentiate(e: Expr, v: int) -> Expr:
    """Symbolic partial derivative with respect to state variable v."""
    return e.diff(v)


def lie_derivative(c: Expr, field: Sequence[Expr], n_states: Optional[int] = None) -> Expr:
    """Sum over i of dc/dx_i * field_i."""
    n = len(field)
    if n_states is not None and n != n_states:
        raise ArityMismatchError(f"vector field has {n} components for {n_states} state variables")
    if any(i >= n for i in c.states_used()):
        raise ArityMismatchError(
            f"constraint uses state index {max(c.states_used())} but the field has {n} components"
        )
    result: Expr = ZERO
    for i, fi in enumerate(field):
        result = make_add(result, make_mul(differentiate(c, i), fi))
    return result


def substitute_params(e: Expr, values: Mapping[int, float]) -> Expr:
    """Replace the parameters indexed in values by constants, folding zeros and ones on the way."""
    if isinstance(e, ParamVar):
        return Const(float(values[e.index])) if e.index in values else e
    if not e.children():
        return e
    if isinstance(e, (Add, Sub, Mul, Div)):
        build = _REBUILD[type(e)]
        return build(substitute_params(e.left, values), substitute_params(e.right, values))
    if isinstance(e, Neg):
        return make_neg(substitute_params(e.arg, values))
    return replace(e, arg=substitute_params(e.arg, values))


_REBUILD = {Add: make_add, Sub: make_sub, Mul: make_mul, Div: make_div}
