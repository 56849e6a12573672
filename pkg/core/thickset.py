"""
Thick sets [[X_sub, X_sup]] and their algebra, realised as a four-valued
classification of boxes.

An atom sigma(f, [p]) has lower bound {x | for all p in [p], f(x,p) <= 0} and
upper bound {x | exists p in [p], f(x,p) <= 0}. Compound sets are built
with intersection, union, closed complement and boundary; a box verdict is
computed bottom-up with ``combine``.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence, Tuple

from core.config import settings
from core.errors import ArityMismatchError
from core.expr import Env, Expr, eval_interval
from core.interval import Box, Interval


class BoxClass(str, Enum):
    IN = "IN"            # box inside the lower bound
    PEN = "PEN"          # box inside the penumbra
    OUT = "OUT"          # box misses the upper bound
    UNKNOWN = "UNKNOWN"


class ThinClass(str, Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_CONSTRAINT = "on-constraint"


# --- Verdict lattice ---

def _intersect(c1: BoxClass, c2: BoxClass) -> BoxClass:
    if c1 is BoxClass.OUT or c2 is BoxClass.OUT:
        return BoxClass.OUT
    if c1 is BoxClass.IN and c2 is BoxClass.IN:
        return BoxClass.IN
    if BoxClass.UNKNOWN in (c1, c2):
        return BoxClass.UNKNOWN
    return BoxClass.PEN


def _union(c1: BoxClass, c2: BoxClass) -> BoxClass:
    if c1 is BoxClass.IN or c2 is BoxClass.IN:
        return BoxClass.IN
    if c1 is BoxClass.OUT and c2 is BoxClass.OUT:
        return BoxClass.OUT
    if BoxClass.UNKNOWN in (c1, c2):
        return BoxClass.UNKNOWN
    return BoxClass.PEN


_COMPLEMENT = {
    BoxClass.IN: BoxClass.OUT,
    BoxClass.OUT: BoxClass.IN,
    BoxClass.PEN: BoxClass.PEN,
    BoxClass.UNKNOWN: BoxClass.UNKNOWN,
}


def combine(op: str, c1: BoxClass, c2: Optional[BoxClass] = None) -> BoxClass:
    if op == "complement":
        if c2 is not None:
            raise ValueError("complement takes a single verdict")
        return _COMPLEMENT[c1]
    if c2 is None:
        raise ValueError(f"'{op}' takes two verdicts")
    if op == "intersect":
        return _intersect(c1, c2)
    if op == "union":
        return _union(c1, c2)
    raise ValueError(f"Unknown thick-set operation '{op}'")


def boundary_class(c: BoxClass) -> BoxClass:
    """Verdict of the thick boundary [[X]] ∩ complement([[X]]) from the verdict of [[X]]."""
    return _intersect(c, _COMPLEMENT[c])


# --- Set expressions ---

class SetExpr:
    def classify(self, box: Box) -> BoxClass:
        raise NotImplementedError

    def margin(self, x: Sequence[float], p: Sequence[float]) -> float:
        """Signed membership of the thin instantiation at p: >= 0 means member."""
        raise NotImplementedError

    def children(self) -> Tuple["SetExpr", ...]:
        return ()

    def atoms(self) -> Iterator["Atom"]:
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Atom):
                yield node
            stack.extend(reversed(node.children()))


@dataclass(frozen=True)
class Atom(SetExpr):
    """sigma(constraint, [p]); param_box holds one interval per entry of param_indices."""
    constraint: Expr
    param_box: Box
    param_indices: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "param_indices", tuple(self.param_indices))
        if len(self.param_indices) != self.param_box.dim:
            raise ArityMismatchError(
                f"atom has {self.param_box.dim} parameter intervals for {len(self.param_indices)} indices"
            )
        missing = self.constraint.params_used() - set(self.param_indices)
        if missing:
            raise ArityMismatchError(f"constraint uses parameters {sorted(missing)} without an interval")

    @classmethod
    def from_declared(cls, constraint: Expr, declared: Box) -> "Atom":
        """Atom whose parameter box is the sub-box of the declared parameters the constraint uses."""
        indices = tuple(sorted(constraint.params_used()))
        if any(i >= declared.dim for i in indices):
            raise ArityMismatchError("constraint uses an undeclared parameter index")
        return cls(constraint, Box(tuple(declared[i] for i in indices)), indices)

    def _embed(self, values: Sequence[Interval]) -> Box:
        # Expr parameter indices address the full declaration; unused slots are never read
        if not self.param_indices:
            return Box(())
        full = [Interval(0.0, 0.0)] * (max(self.param_indices) + 1)
        for i, v in zip(self.param_indices, values):
            full[i] = v
        return Box(tuple(full))

    def classify(self, box: Box) -> BoxClass:
        return atom_classify(self, box)

    def margin(self, x, p) -> float:
        value = self.constraint.eval_point(x, p)
        if math.isnan(value):
            return -math.inf
        return -value

    def __str__(self) -> str:
        return f"[[{self.constraint} <= 0]]"


@dataclass(frozen=True)
class Intersect(SetExpr):
    left: SetExpr
    right: SetExpr

    def children(self):
        return (self.left, self.right)

    def classify(self, box: Box) -> BoxClass:
        c1 = self.left.classify(box)
        if c1 is BoxClass.OUT:
            return c1
        return _intersect(c1, self.right.classify(box))

    def margin(self, x, p) -> float:
        return min(self.left.margin(x, p), self.right.margin(x, p))

    def __str__(self) -> str:
        return f"({self.left} ∩ {self.right})"


@dataclass(frozen=True)
class Union(SetExpr):
    left: SetExpr
    right: SetExpr

    def children(self):
        return (self.left, self.right)

    def classify(self, box: Box) -> BoxClass:
        c1 = self.left.classify(box)
        if c1 is BoxClass.IN:
            return c1
        return _union(c1, self.right.classify(box))

    def margin(self, x, p) -> float:
        return max(self.left.margin(x, p), self.right.margin(x, p))

    def __str__(self) -> str:
        return f"({self.left} ∪ {self.right})"


@dataclass(frozen=True)
class Complement(SetExpr):
    """Closed complement [[¬X_sup, ¬X_sub]]."""
    arg: SetExpr

    def children(self):
        return (self.arg,)

    def classify(self, box: Box) -> BoxClass:
        return _COMPLEMENT[self.arg.classify(box)]

    def margin(self, x, p) -> float:
        return -self.arg.margin(x, p)

    def __str__(self) -> str:
        return f"¬{self.arg}"


@dataclass(frozen=True)
class Boundary(SetExpr):
    arg: SetExpr

    def children(self):
        return (self.arg,)

    def classify(self, box: Box) -> BoxClass:
        return boundary_class(self.arg.classify(box))

    def margin(self, x, p) -> float:
        return -abs(self.arg.margin(x, p))

    def __str__(self) -> str:
        return f"∂{self.arg}"


def intersect(*sets: SetExpr) -> SetExpr:
    node = sets[0]
    for s in sets[1:]:
        node = Intersect(node, s)
    return node


def union(*sets: SetExpr) -> SetExpr:
    node = sets[0]
    for s in sets[1:]:
        node = Union(node, s)
    return node


def complement(s: SetExpr) -> SetExpr:
    return Complement(s)


def boundary(s: SetExpr) -> SetExpr:
    return Boundary(s)


# --- Classification ---

def atom_classify(a: Atom, box: Box) -> BoxClass:
    """
    IN if f <= 0 over box x [p], OUT if f > 0 there. Otherwise try to prove the
    box lies in the penumbra: some corner of [p] must give f <= 0 on the whole
    box and some corner must give f > 0 on the whole box.
    """
    enclosure = eval_interval(a.constraint, Env(box, a._embed(a.param_box.components)))
    if enclosure.is_empty:
        # f is undefined on the whole box, so no point satisfies the constraint
        return BoxClass.OUT
    if enclosure.hi <= 0.0:
        return BoxClass.IN
    if enclosure.lo > 0.0:
        return BoxClass.OUT
    if not a.param_indices:
        return BoxClass.UNKNOWN

    some_nonpositive = some_positive = False
    for corner in a.param_box.corners():
        thin = [Interval(v, v) for v in corner]
        enc = eval_interval(a.constraint, Env(box, a._embed(thin)))
        if enc.is_empty or enc.lo > 0.0:
            some_positive = True
        elif enc.hi <= 0.0:
            some_nonpositive = True
        if some_positive and some_nonpositive:
            return BoxClass.PEN
    return BoxClass.UNKNOWN


def classify(s: SetExpr, box: Box) -> BoxClass:
    return s.classify(box)


def margin(s: SetExpr, x: Sequence[float], p: Sequence[float]) -> float:
    return s.margin(x, p)


def point_classify_thin(
    s: SetExpr,
    x: Sequence[float],
    p: Sequence[float],
    tolerance: Optional[float] = None,
) -> ThinClass:
    """
    Membership of x in the thin set obtained by fixing the parameters at p.
    Monte-Carlo oracle only; it carries no guarantee.
    """
    tol = settings.THIN_TOLERANCE if tolerance is None else tolerance
    for atom in s.atoms():
        if atom.param_indices and max(atom.param_indices) >= len(p):
            raise ArityMismatchError(f"parameter point has {len(p)} values, atom needs index {max(atom.param_indices)}")
        states = atom.constraint.states_used()
        if states and max(states) >= len(x):
            raise ArityMismatchError(f"state point has {len(x)} values, atom needs index {max(states)}")
    m = s.margin(x, p)
    if m > tol:
        return ThinClass.INSIDE
    if m < -tol:
        return ThinClass.OUTSIDE
    return ThinClass.ON_CONSTRAINT
