"""Glue shared by the command line and the HTTP routes."""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ArityMismatchError
from core.paver import pave, paving_query
from core.sliding import build_sliding, leaves, lie_derivatives, sample_sliding_points
from core.thickset import BoxClass
from models.paving import Paving
from models.system import SystemDef

logger = logging.getLogger(__name__)


def pave_system(
    system: SystemDef,
    epsilon: Optional[float] = None,
    workers: Optional[int] = None,
    box_budget: Optional[int] = None,
) -> Paving:
    sliding = build_sliding(system.to_spec())
    return pave(sliding, system.domain, epsilon or system.epsilon, workers, box_budget)


def leaf_lie_derivatives(system: SystemDef) -> List[Dict[str, str]]:
    """For each region leaf, its constraint and Lie derivatives along field a and field b."""
    spec = system.to_spec()
    rows = []
    for leaf in leaves(spec.region):
        lie_a, lie_b = lie_derivatives(leaf.constraint, leaf.param_box, spec)
        rows.append({
            "leaf": leaf.name,
            "constraint": str(leaf.constraint),
            "lie_a": str(lie_a),
            "lie_b": str(lie_b),
        })
    return rows


def oracle_parameters(system: SystemDef, param_samples: int, rng: np.random.Generator) -> List[List[float]]:
    """The centre of [p] followed by param_samples uniform draws inside [p]."""
    vectors = [system.param_center]
    box = system.param_box
    for _ in range(param_samples):
        vectors.append([float(rng.uniform(c.lo, c.hi)) if c.width > 0 else c.lo for c in box])
    return vectors


def check_paving(
    system: SystemDef,
    paving: Paving,
    samples: int,
    param_samples: int = 0,
    seed: int = 0,
) -> Tuple[int, List[Tuple[float, ...]]]:
    """
    Sample sliding points of thin instantiations of the system and look them up
    in the paving. Returns the number of points checked and those landing in OUT boxes.
    """
    spec = system.to_spec()
    if paving.dim != spec.decl.n_states:
        raise ArityMismatchError(
            f"paving has dimension {paving.dim} but the system has {spec.decl.n_states} state variables"
        )
    sliding = build_sliding(spec)
    rng = np.random.default_rng(seed)
    vectors = oracle_parameters(system, param_samples, rng)
    share = [samples // len(vectors) + (1 if i < samples % len(vectors) else 0) for i in range(len(vectors))]

    checked = 0
    violations: List[Tuple[float, ...]] = []
    for p, n in zip(vectors, share):
        if n == 0:
            continue
        for x in sample_sliding_points(spec, sliding, paving.domain, n, p, rng):
            checked += 1
            if paving_query(paving, x) is BoxClass.OUT:
                logger.warning("sliding point %s (p=%s) lies in an OUT box", x, p)
                violations.append(x)
    return checked, violations
