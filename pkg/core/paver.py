"""
Branch-and-classify paver.

Boxes are processed one bisection level at a time. Definite verdicts and
UNKNOWN boxes no wider than epsilon are emitted; other UNKNOWN boxes are
bisected and queued for the next level. Verdicts do not depend on how the
work is split, and the output is sorted by lower corner, so the paving is
identical for any number of workers.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from core.config import settings
from core.errors import ArityMismatchError, DomainError, PavingBudgetError, UnsplittableBoxError
from core.interval import Box, bisect
from core.thickset import BoxClass, SetExpr
from models.paving import Paving, PavingEntry, PavingMeta

logger = logging.getLogger(__name__)

_worker_set: Optional[SetExpr] = None


def _init_worker(s: SetExpr) -> None:
    global _worker_set
    _worker_set = s


def _classify_chunk(boxes: List[Box]) -> List[BoxClass]:
    return [_worker_set.classify(b) for b in boxes]


def _classify_level(s: SetExpr, boxes: List[Box], executor: Optional[ProcessPoolExecutor], workers: int) -> List[BoxClass]:
    if executor is None or len(boxes) < 2 * workers:
        return [s.classify(b) for b in boxes]
    size = max(1, math.ceil(len(boxes) / (4 * workers)))
    chunks = [boxes[i:i + size] for i in range(0, len(boxes), size)]
    classes: List[BoxClass] = []
    for part in executor.map(_classify_chunk, chunks):
        classes.extend(part)
    return classes


def canonical_key(entry: PavingEntry):
    return (entry.box.lower, entry.box.upper)


def pave(
    s: SetExpr,
    domain: Box,
    epsilon: float,
    workers: Optional[int] = None,
    box_budget: Optional[int] = None,
) -> Paving:
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if domain.is_empty:
        raise ValueError("domain box is empty")
    workers = workers or settings.WORKERS
    budget = box_budget or settings.BOX_BUDGET

    start = time.perf_counter()
    entries: List[PavingEntry] = []
    counts = {c.value: 0 for c in BoxClass}
    bisections = 0
    level = [domain]
    depth = 0

    executor = None
    if workers > 1:
        executor = ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(s,))
    try:
        while level:
            classes = _classify_level(s, level, executor, workers)
            next_level: List[Box] = []
            for box, box_class in zip(level, classes):
                if box_class is BoxClass.UNKNOWN and box.width > epsilon:
                    try:
                        left, right = bisect(box)
                    except UnsplittableBoxError:
                        logger.warning("box %s cannot be split further, emitted as UNKNOWN", box)
                    else:
                        next_level.extend((left, right))
                        bisections += 1
                        continue
                entries.append(PavingEntry(box, box_class))
                counts[box_class.value] += 1

            if len(entries) + len(next_level) > budget:
                raise PavingBudgetError(budget, dict(counts), len(next_level))
            logger.debug("level %d: %d boxes classified, %d queued, %d emitted", depth, len(level), len(next_level), len(entries))
            level = next_level
            depth += 1
    finally:
        if executor is not None:
            executor.shutdown()

    entries.sort(key=canonical_key)
    elapsed = time.perf_counter() - start
    logger.info("paving done: %d boxes, %d bisections, %.2fs, counts=%s", len(entries), bisections, elapsed, counts)
    return Paving(
        domain=domain,
        epsilon=epsilon,
        entries=entries,
        meta=PavingMeta(boxes=len(entries), bisections=bisections, counts=counts, elapsed=elapsed),
    )


def paving_query(p: Paving, x: Sequence[float]) -> BoxClass:
    """Class of the first entry, in canonical order, whose box contains x."""
    if len(x) != p.dim:
        raise ArityMismatchError(f"point has {len(x)} coordinates, paving has {p.dim}")
    if not p.domain.contains_point(x):
        raise DomainError(f"point {tuple(x)} lies outside the paving domain {p.domain}")
    lower, upper = p.bound_arrays()
    point = np.asarray(x, dtype=float)
    hits = np.all((lower <= point) & (point <= upper), axis=1)
    idx = int(np.argmax(hits))
    if not hits[idx]:
        raise DomainError(f"no paving entry contains {tuple(x)}")
    return p.entries[idx].box_class
