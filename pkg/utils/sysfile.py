"""
Reader for system definition (.sys) files.

Line-oriented, `#` starts a comment:

    state x1 x2
    param p1 in [-0.1, 0.1]
    field a : ( x2 , p1 - sin(x1) )
    field b : ( x2 , p1 - sin(x1) - x2 )
    set A := (x1 + p2)^2 + (x2 + p3)^2 - 1 <= 0
    region := A | !B & (C | D)
    domain [-2, 2] x [-2, 2]
    epsilon 0.02

`&` binds tighter than `|`; `!` may only negate a named set and is
rewritten to the negated constraint.
"""
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from core.config import settings
from core.errors import (
    ArityMismatchError, EmptyIntervalError, SystemDefinitionError, SystemSyntaxError,
    UnknownIdentifierError,
)
from core.expr import Declaration, Expr, Neg
from core.interval import Box, Interval
from core.parser import TokenStream, parse_expr, parse_expr_tuple, tokenize
from core.sliding import RegionAnd, RegionLeaf, RegionOr, RegionTree
from models.system import ParamDecl, SystemDef

_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_NUM = r"[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?"
_INTERVAL = rf"\[\s*({_NUM})\s*,\s*({_NUM})\s*\]"

_STATE_RE = re.compile(rf"^state((?:\s+{_NAME})+)\s*$")
_PARAM_RE = re.compile(rf"^param\s+({_NAME})\s+in\s+{_INTERVAL}\s*$")
_FIELD_RE = re.compile(r"^field\s+([ab])\s*:\s*")
_SET_RE = re.compile(rf"^set\s+({_NAME})\s*:=\s*")
_REGION_RE = re.compile(r"^region\s*:=\s*")
_DOMAIN_RE = re.compile(rf"^domain\s+{_INTERVAL}(?:\s*x\s*{_INTERVAL})*\s*$")
_EPSILON_RE = re.compile(rf"^epsilon\s+({_NUM})\s*$")

KEYWORDS = ("state", "param", "field", "set", "region", "domain", "epsilon")


def _interval(lo: str, hi: str, what: str, line: int) -> Interval:
    a, b = float(lo), float(hi)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise SystemDefinitionError(f"bounds of {what} must be finite", line)
    if a > b:
        raise EmptyIntervalError(f"line {line}: empty interval [{lo}, {hi}] for {what}")
    return Interval(a, b)


class _RegionParser:
    """
    <OR>   -> <AND> { '|' <AND> }*
    <AND>  -> <NOT> { '&' <NOT> }*
    <NOT>  -> '!' NAME | NAME | '(' <OR> ')'
    """

    def __init__(self, stream: TokenStream, leaves: Dict[str, RegionLeaf]):
        self.stream = stream
        self.leaves = leaves

    def disjunction(self) -> RegionTree:
        parts = [self._conjunction()]
        while self.stream.accept("|"):
            parts.append(self._conjunction())
        return parts[0] if len(parts) == 1 else RegionOr(tuple(parts))

    def _conjunction(self) -> RegionTree:
        parts = [self._negation()]
        while self.stream.accept("&"):
            parts.append(self._negation())
        return parts[0] if len(parts) == 1 else RegionAnd(tuple(parts))

    def _negation(self) -> RegionTree:
        if self.stream.accept("!"):
            if not self.stream.peek("NAME"):
                raise self.stream.error("'!' applies to a named set only")
            leaf = self._leaf()
            # closed complement of {c <= 0} is {-c <= 0}
            return RegionLeaf(Neg(leaf.constraint), leaf.param_box, f"!{leaf.name}")
        if self.stream.peek("NAME"):
            return self._leaf()
        if self.stream.accept("("):
            node = self.disjunction()
            self.stream.expect(")")
            return node
        raise self.stream.error("expected a set name, '!' or '('")

    def _leaf(self) -> RegionLeaf:
        tok = self.stream.expect("NAME")
        if tok.text not in self.leaves:
            raise UnknownIdentifierError(tok.text, tok.line, tok.column)
        return self.leaves[tok.text]


def parse_system(text: str) -> SystemDef:
    states: Optional[Tuple[str, ...]] = None
    params: List[ParamDecl] = []
    statements: List[Tuple[int, str]] = []

    # declarations first, so statements may appear in any order
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        keyword = stripped.split()[0]
        if keyword not in KEYWORDS:
            raise SystemSyntaxError(f"unknown statement '{keyword}'", number, line.index(keyword) + 1)
        if keyword == "state":
            m = _STATE_RE.match(stripped)
            if not m:
                raise SystemSyntaxError("expected 'state <name> ...'", number, 1)
            if states is not None:
                raise SystemDefinitionError("state variables declared twice", number)
            states = tuple(m.group(1).split())
        elif keyword == "param":
            m = _PARAM_RE.match(stripped)
            if not m:
                raise SystemSyntaxError("expected 'param <name> in [<lo>, <hi>]'", number, 1)
            iv = _interval(m.group(2), m.group(3), f"parameter '{m.group(1)}'", number)
            params.append(ParamDecl(name=m.group(1), lo=iv.lo, hi=iv.hi))
        else:
            statements.append((number, line))

    if states is None:
        raise SystemDefinitionError("missing 'state' declaration")
    decl = Declaration(states, tuple(p.name for p in params))
    declared = Box(tuple(p.interval for p in params))

    fields: Dict[str, Tuple[Expr, ...]] = {}
    sets: Dict[str, Expr] = {}
    set_leaves: Dict[str, RegionLeaf] = {}
    region_line: Optional[Tuple[int, str, int]] = None
    domain: Optional[Box] = None
    epsilon: Optional[float] = None

    for number, line in statements:
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if m := _FIELD_RE.match(body):
            label = m.group(1)
            if label in fields:
                raise SystemDefinitionError(f"field {label} defined twice", number)
            fields[label] = parse_expr_tuple(body[m.end():], decl, number, indent + m.end() + 1)
            if len(fields[label]) != decl.n_states:
                raise ArityMismatchError(
                    f"line {number}: field {label} has {len(fields[label])} components "
                    f"for {decl.n_states} state variables"
                )
        elif m := _SET_RE.match(body):
            name = m.group(1)
            if name in sets or decl.lookup(name) is not None:
                raise SystemDefinitionError(f"identifier '{name}' declared twice", number)
            rest = body[m.end():]
            lhs, sep, rhs = rest.rpartition("<=")
            if not sep:
                raise SystemSyntaxError("expected '<expr> <= 0'", number, indent + len(body) + 1)
            try:
                zero = float(rhs)
            except ValueError:
                zero = None
            if zero != 0.0:
                raise SystemSyntaxError("right-hand side must be 0", number, indent + m.end() + len(lhs) + 3)
            c = parse_expr(lhs, decl, number, indent + m.end() + 1)
            sets[name] = c
            pbox = Box(tuple(declared[i] for i in sorted(c.params_used())))
            set_leaves[name] = RegionLeaf(c, pbox, name)
        elif m := _REGION_RE.match(body):
            if region_line is not None:
                raise SystemDefinitionError("region defined twice", number)
            region_line = (number, body[m.end():], indent + m.end() + 1)
        elif body.startswith("domain"):
            m = _DOMAIN_RE.match(body)
            if not m:
                raise SystemSyntaxError("expected 'domain [<lo>, <hi>] x ...'", number, indent + 1)
            bounds = re.findall(_INTERVAL, body)
            domain = Box(tuple(_interval(lo, hi, "domain", number) for lo, hi in bounds))
            if domain.dim != decl.n_states:
                raise ArityMismatchError(
                    f"line {number}: domain has {domain.dim} intervals for {decl.n_states} state variables"
                )
        elif body.startswith("epsilon"):
            m = _EPSILON_RE.match(body)
            if not m:
                raise SystemSyntaxError("expected 'epsilon <value>'", number, indent + 1)
            epsilon = float(m.group(1))
            if epsilon <= 0.0:
                raise SystemDefinitionError("epsilon must be positive", number)
        else:
            raise SystemSyntaxError(f"malformed '{body.split()[0]}' statement", number, indent + 1)

    for label in ("a", "b"):
        if label not in fields:
            raise SystemDefinitionError(f"missing 'field {label}' statement")
    if region_line is None:
        raise SystemDefinitionError("missing 'region' statement")

    number, region_text, column = region_line
    stream = TokenStream(tokenize(region_text, number, column))
    region = _RegionParser(stream, set_leaves).disjunction()
    if not stream.peek("EOF"):
        raise stream.error("unexpected trailing input in region")

    if domain is None:
        w = settings.DEFAULT_DOMAIN_HALF_WIDTH
        domain = Box(tuple(Interval(-w, w) for _ in states))

    return SystemDef(
        states=list(states),
        params=params,
        field_a=fields["a"],
        field_b=fields["b"],
        sets=sets,
        region=region,
        domain=domain,
        epsilon=epsilon if epsilon is not None else settings.DEFAULT_EPSILON,
    )


def load_system(path: Union[str, Path]) -> SystemDef:
    return parse_system(Path(path).read_text())
