"""
Thick enclosure of the sliding surface of  x' = f_a(x) if x in A else f_b(x).

For a leaf A = {c <= 0}:   S(A) = ∂A ∩ ¬L_a ∩ L_b,   L_i = {x | dc/dx . f_i <= 0}.
Compound regions use
    S(A1 ∩ A2) = (S(A1) ∩ A2) ∪ (S(A2) ∩ A1)
    S(A1 ∪ A2) = (S(A1) ∩ ¬A2) ∪ (S(A2) ∩ ¬A1)
folded left over n-ary nodes.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union as TypingUnion

import numpy as np

from core.config import settings
from core.errors import ArityMismatchError, SystemDefinitionError
from core.expr import Declaration, Expr, lie_derivative, substitute_params
from core.interval import Box
from core.thickset import (
    Atom, SetExpr, ThinClass, Complement, Intersect, Union,
    boundary, complement, intersect, point_classify_thin, union,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegionLeaf:
    """Closed set {x | constraint(x, p) <= 0}, p ranging over param_box."""
    constraint: Expr
    param_box: Box
    name: str = ""

    def atom(self) -> Atom:
        return Atom(self.constraint, self.param_box, tuple(sorted(self.constraint.params_used())))


@dataclass(frozen=True)
class RegionAnd:
    children: Tuple["RegionTree", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise SystemDefinitionError("empty conjunction in region")


@dataclass(frozen=True)
class RegionOr:
    children: Tuple["RegionTree", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise SystemDefinitionError("empty disjunction in region")


RegionTree = TypingUnion[RegionLeaf, RegionAnd, RegionOr]


@dataclass(frozen=True)
class SlidingSpec:
    region: RegionTree
    field_a: Tuple[Expr, ...]
    field_b: Tuple[Expr, ...]
    decl: Declaration
    param_box: Box  # one interval per declared parameter

    def __post_init__(self):
        object.__setattr__(self, "field_a", tuple(self.field_a))
        object.__setattr__(self, "field_b", tuple(self.field_b))
        n = self.decl.n_states
        for label, field in (("a", self.field_a), ("b", self.field_b)):
            if len(field) != n:
                raise ArityMismatchError(f"field {label} has {len(field)} components for {n} state variables")
        if self.param_box.dim != self.decl.n_params:
            raise ArityMismatchError(
                f"{self.param_box.dim} parameter intervals for {self.decl.n_params} declared parameters"
            )


def leaves(region: RegionTree) -> Iterator[RegionLeaf]:
    if isinstance(region, RegionLeaf):
        yield region
        return
    for child in region.children:
        yield from leaves(child)


def region_set(region: RegionTree) -> SetExpr:
    """The region as a thick atom-tree."""
    if isinstance(region, RegionLeaf):
        return region.atom()
    parts = [region_set(child) for child in region.children]
    if isinstance(region, RegionAnd):
        return intersect(*parts)
    return union(*parts)


def lie_derivatives(c: Expr, pbox: Box, spec: SlidingSpec) -> Tuple[Expr, Expr]:
    """
    Lie derivatives of c along field a and field b. The parameters of c itself
    (measurement errors on the switching surface) are fixed at the centre of
    pbox, so only the parameters of the fields remain.
    """
    n = spec.decl.n_states
    centre = {i: pbox[k].mid for k, i in enumerate(sorted(c.params_used()))}
    nominal = substitute_params(c, centre)
    return lie_derivative(nominal, spec.field_a, n), lie_derivative(nominal, spec.field_b, n)


def lie_atoms(c: Expr, pbox: Box, spec: SlidingSpec) -> Tuple[Atom, Atom]:
    """Thick Lie sets of c along field a and field b."""
    la, lb = lie_derivatives(c, pbox, spec)
    return Atom.from_declared(la, spec.param_box), Atom.from_declared(lb, spec.param_box)


def build_leaf_sliding(c: Expr, pbox: Box, spec: SlidingSpec) -> SetExpr:
    """∂[[A]] ∩ ¬[[L_a]] ∩ [[L_b]] for the leaf A = {c <= 0}."""
    region_atom = Atom(c, pbox, tuple(sorted(c.params_used())))
    atom_a, atom_b = lie_atoms(c, pbox, spec)
    return intersect(boundary(region_atom), complement(atom_a), atom_b)


def _build(region: RegionTree, spec: SlidingSpec) -> Tuple[SetExpr, SetExpr]:
    # returns (sliding set, region atom-tree)
    if isinstance(region, RegionLeaf):
        return build_leaf_sliding(region.constraint, region.param_box, spec), region.atom()

    sliding, covered = _build(region.children[0], spec)
    for child in region.children[1:]:
        child_sliding, child_region = _build(child, spec)
        if isinstance(region, RegionAnd):
            sliding = Union(Intersect(sliding, child_region), Intersect(child_sliding, covered))
            covered = Intersect(covered, child_region)
        else:
            sliding = Union(
                Intersect(sliding, Complement(child_region)),
                Intersect(child_sliding, Complement(covered)),
            )
            covered = Union(covered, child_region)
    return sliding, covered


def build_sliding(spec: SlidingSpec) -> SetExpr:
    sliding, _ = _build(spec.region, spec)
    logger.debug("sliding set: %s", sliding)
    return sliding


# --- Monte-Carlo sampling of sliding points ---

def _bisect_zero(c: Expr, a: np.ndarray, b: np.ndarray, p: Sequence[float], steps: int) -> np.ndarray:
    # c(a) <= 0 < c(b) on entry
    for _ in range(steps):
        m = (a + b) / 2.0
        if c.eval_point(m, p) <= 0.0:
            a = m
        else:
            b = m
    return (a + b) / 2.0


def sample_sliding_points(
    spec: SlidingSpec,
    sliding: SetExpr,
    domain: Box,
    n: int,
    p: Sequence[float],
    rng: np.random.Generator,
    max_attempts: Optional[int] = None,
) -> List[Tuple[float, ...]]:
    """
    Draw points of the thin sliding surface obtained by fixing the parameters
    at p: random segments across a leaf's zero set are bisected onto it, and the
    point is kept when the thin sliding set does not exclude it.
    """
    steps = settings.ROOT_BISECTIONS
    region_leaves = list(leaves(spec.region))
    lo = np.array(domain.lower)
    hi = np.array(domain.upper)
    attempts = max_attempts if max_attempts is not None else 200 * max(n, 1)
    points: List[Tuple[float, ...]] = []

    for k in range(attempts):
        if len(points) >= n:
            break
        c = region_leaves[k % len(region_leaves)].constraint
        a = rng.uniform(lo, hi)
        b = rng.uniform(lo, hi)
        fa, fb = c.eval_point(a, p), c.eval_point(b, p)
        if math.isnan(fa) or math.isnan(fb) or (fa <= 0.0) == (fb <= 0.0):
            continue
        if fa > 0.0:
            a, b = b, a
        x = _bisect_zero(c, a, b, p, steps)
        if point_classify_thin(sliding, x, p) is not ThinClass.OUTSIDE:
            points.append(tuple(float(v) for v in x))

    if len(points) < n:
        logger.info("sampled %d sliding points out of %d requested", len(points), n)
    return points
