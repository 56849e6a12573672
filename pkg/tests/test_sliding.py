import math

import pytest

from core.errors import ArityMismatchError, SystemDefinitionError
from core.expr import Const, Declaration
from core.interval import Box
from core.parser import parse_expr, parse_expr_tuple
from core.sliding import (
    RegionAnd, RegionLeaf, RegionOr, SlidingSpec, build_leaf_sliding, build_sliding,
    leaves, lie_atoms, lie_derivatives, region_set, sample_sliding_points,
)
from core.thickset import (
    Atom, BoxClass, ThinClass, boundary, classify, complement, intersect, margin,
    point_classify_thin, union,
)

DECL = Declaration(("x1", "x2"), ("p1", "p2", "p3"))
FIELD_A = parse_expr_tuple("(x2, p1 - sin(x1))", DECL)
FIELD_B = parse_expr_tuple("(x2, p1 - sin(x1) - x2)", DECL)
NOMINAL = (0.0, 0.0, 0.0)


def thin_spec(region) -> SlidingSpec:
    return SlidingSpec(region, FIELD_A, FIELD_B, DECL, Box.from_bounds([[0, 0]] * 3))


def leaf(text: str, name: str = "") -> RegionLeaf:
    return RegionLeaf(parse_expr(text, DECL), Box(()), name)


def lie_values(x):
    # Lie derivatives of x1^2 + x2^2 - 1 along both swing fields, p = 0
    la = 2 * x[0] * x[1] + 2 * x[1] * (-math.sin(x[0]))
    lb = la - 2 * x[1] * x[1]
    return la, lb


# --- Leaf construction ---

def test_leaf_sliding_structure(swing1):
    spec = swing1.to_spec()
    (a,) = list(leaves(spec.region))
    s = build_sliding(spec)
    atom_a, atom_b = lie_atoms(a.constraint, a.param_box, spec)
    assert s == intersect(boundary(a.atom()), complement(atom_a), atom_b)
    assert s == build_leaf_sliding(a.constraint, a.param_box, spec)


def test_swing1_sliding_set_is_written_out_by_hand(swing1):
    p1_box = Box.from_bounds([[-0.1, 0.1]])
    disk = Atom(
        parse_expr("(x1 + p2)^2 + (x2 + p3)^2 - 1", DECL),
        Box.from_bounds([[-0.1, 0.1]] * 2),
        (1, 2),
    )
    lie_a = Atom(parse_expr("2*x1*x2 + 2*x2*(p1 - sin(x1))", DECL), p1_box, (0,))
    lie_b = Atom(parse_expr("2*x1*x2 + 2*x2*(p1 - sin(x1) - x2)", DECL), p1_box, (0,))
    assert build_sliding(swing1.to_spec()) == intersect(boundary(disk), complement(lie_a), lie_b)


def test_lie_atoms_drop_region_parameters(swing1):
    spec = swing1.to_spec()
    (a,) = list(leaves(spec.region))
    assert a.atom().param_indices == (1, 2)
    atom_a, atom_b = lie_atoms(a.constraint, a.param_box, spec)
    assert atom_a.param_indices == (0,)
    assert atom_b.param_box == Box.from_bounds([[-0.1, 0.1]])


def test_region_parameters_fixed_at_their_centre():
    decl = Declaration(("x1", "x2"), ("p1", "q"))
    field = parse_expr_tuple("(1, 0)", decl)
    c = parse_expr("x1^2 - q*x1", decl)
    spec = SlidingSpec(RegionLeaf(c, Box.from_bounds([[1, 3]])), field, field, decl, Box.from_bounds([[0, 0], [1, 3]]))
    lie_a, lie_b = lie_derivatives(c, Box.from_bounds([[1, 3]]), spec)
    assert lie_a == lie_b
    assert lie_a.params_used() == frozenset()
    for x1 in (-1.0, 0.0, 0.5, 2.0):
        assert lie_a.eval_point((x1, 0.0), (0.0, 99.0)) == pytest.approx(2 * x1 - 2.0)


def test_half_plane_lie_atoms(swing2):
    spec = swing2.to_spec()
    a2 = [l for l in leaves(spec.region) if l.name == "A2"][0]
    atom_a, atom_b = lie_atoms(a2.constraint, a2.param_box, spec)
    assert str(atom_a.constraint) == "p1 - sin(x1)"
    assert str(atom_b.constraint) == "p1 - sin(x1) - x2"


def test_constant_region_has_no_sliding_surface():
    spec = thin_spec(RegionLeaf(Const(-1.0), Box(()), "everywhere"))
    s = build_sliding(spec)
    for box in (Box.from_bounds([[-2, 2], [-2, 2]]), Box.from_bounds([[0, 0.1], [0, 0.1]])):
        assert classify(s, box) is BoxClass.OUT


def test_spec_arity_checks():
    with pytest.raises(ArityMismatchError):
        SlidingSpec(leaf("x1"), FIELD_A[:1], FIELD_B, DECL, Box.from_bounds([[0, 0]] * 3))
    with pytest.raises(ArityMismatchError):
        SlidingSpec(leaf("x1"), FIELD_A, FIELD_B, DECL, Box.from_bounds([[0, 0]]))


def test_empty_region_nodes():
    with pytest.raises(SystemDefinitionError):
        RegionAnd(())
    with pytest.raises(SystemDefinitionError):
        RegionOr(())


# --- Compound regions ---

def test_union_region_matches_hand_assembled_expression(swing2, rng):
    spec = swing2.to_spec()
    a1, a2 = list(leaves(spec.region))
    s1 = build_leaf_sliding(a1.constraint, a1.param_box, spec)
    s2 = build_leaf_sliding(a2.constraint, a2.param_box, spec)
    expected = union(
        intersect(s1, complement(a2.atom())),
        intersect(s2, complement(a1.atom())),
    )
    built = build_sliding(spec)
    assert built == expected

    box = swing2.param_box
    for _ in range(10_000):
        x = rng.uniform(-2, 2, size=2)
        p = [rng.uniform(c.lo, c.hi) for c in box]
        assert point_classify_thin(built, x, p) is point_classify_thin(expected, x, p)


def test_single_leaf_region_is_leaf_sliding():
    a = leaf("x1^2 + x2^2 - 1", "A")
    spec = thin_spec(a)
    assert build_sliding(spec) == build_leaf_sliding(a.constraint, a.param_box, spec)


def test_duplicate_leaf_conjunction(rng):
    a = leaf("x1^2 + x2^2 - 1", "A")
    spec = thin_spec(RegionAnd((a, a)))
    built = build_sliding(spec)
    reference = intersect(build_leaf_sliding(a.constraint, a.param_box, spec), a.atom())
    for _ in range(1000):
        lo = rng.uniform(-2, 1.8, size=2)
        box = Box.from_bounds([[lo[0], lo[0] + 0.2], [lo[1], lo[1] + 0.2]])
        assert classify(built, box) is classify(reference, box)
        x = rng.uniform(-2, 2, size=2)
        assert margin(built, x, NOMINAL) == margin(reference, x, NOMINAL)


def _random_leaf(rng, name: str) -> RegionLeaf:
    if rng.random() < 0.5:
        cx, cy = rng.uniform(-1, 1, size=2)
        r = rng.uniform(0.3, 1.2)
        return leaf(f"(x1 - ({cx:.6f}))^2 + (x2 - ({cy:.6f}))^2 - {r * r:.6f}", name)
    a, b = rng.uniform(-1, 1, size=2)
    c = rng.uniform(-0.5, 0.5)
    return leaf(f"{a:.6f}*x1 + ({b:.6f})*x2 + ({c:.6f})", name)


def test_two_leaf_composition_rules(rng):
    for trial in range(50):
        a1, a2 = _random_leaf(rng, "A1"), _random_leaf(rng, "A2")
        s1 = build_leaf_sliding(a1.constraint, a1.param_box, thin_spec(a1))
        s2 = build_leaf_sliding(a2.constraint, a2.param_box, thin_spec(a2))
        t1, t2 = a1.atom(), a2.atom()
        rules = {
            RegionAnd: union(intersect(s1, t2), intersect(s2, t1)),
            RegionOr: union(intersect(s1, complement(t2)), intersect(s2, complement(t1))),
        }
        for node, expected in rules.items():
            built = build_sliding(thin_spec(node((a1, a2))))
            for x in rng.uniform(-2, 2, size=(500, 2)):
                if min(abs(t1.margin(x, NOMINAL)), abs(t2.margin(x, NOMINAL))) < 1e-6:
                    continue
                assert point_classify_thin(built, x, NOMINAL) is point_classify_thin(expected, x, NOMINAL), trial


def test_region_set():
    a, b = leaf("x1", "A"), leaf("x2", "B")
    s = region_set(RegionOr((a, RegionAnd((a, b)))))
    assert s == union(a.atom(), intersect(a.atom(), b.atom()))


# --- Nominal analytic oracle ---

def test_nominal_sliding_points_are_never_excluded(swing1, rng):
    s = build_sliding(swing1.to_spec())
    checked = 0
    for theta in rng.uniform(0, 2 * math.pi, size=2_000):
        x = (math.cos(theta), math.sin(theta))
        la, lb = lie_values(x)
        if not (la >= 0 and lb <= 0):
            continue
        box = Box.from_bounds([[v - 1e-9, v + 1e-9] for v in x])
        assert classify(s, box) is not BoxClass.OUT, theta
        checked += 1
    assert checked > 100


def test_sampled_points_lie_on_the_nominal_sliding_surface(swing1, rng):
    spec = swing1.to_spec()
    s = build_sliding(spec)
    points = sample_sliding_points(spec, s, swing1.domain, 200, NOMINAL, rng)
    assert len(points) == 200
    for x in points:
        assert abs(math.hypot(*x) - 1.0) < 1e-9
        la, lb = lie_values(x)
        assert la >= -1e-8 and lb <= 1e-8
        assert point_classify_thin(s, x, NOMINAL) is not ThinClass.OUTSIDE
