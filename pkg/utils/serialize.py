import json
import math
from typing import Union

from core.interval import Box
from models.paving import Paving, PavingDocument, PavingEntry, PavingMeta


def _num(x: float) -> Union[int, float]:
    # integral values print as integers; everything else uses the shortest round-trip repr
    if math.isfinite(x) and x.is_integer() and abs(x) < 2 ** 53:
        return int(x)
    return x


def _bounds(box: Box):
    return [[_num(c.lo), _num(c.hi)] for c in box.components]


def paving_document(p: Paving, include_timing: bool = False) -> dict:
    counts = p.counts()
    meta = {"boxes": len(p.entries), "bisections": p.meta.bisections}
    if include_timing:
        meta["elapsed"] = p.meta.elapsed
    return {
        "domain": _bounds(p.domain),
        "epsilon": _num(p.epsilon),
        "entries": [{"box": _bounds(e.box), "class": e.box_class.value} for e in p.entries],
        "counts": counts,
        "meta": meta,
    }


def write_paving(p: Paving, include_timing: bool = False) -> str:
    """
    JSON text of the paving. Entries keep their canonical order and elapsed
    time is left out unless asked for, so equal pavings give equal bytes.
    """
    return json.dumps(paving_document(p, include_timing), separators=(",", ":"), allow_nan=False)


def read_paving(text: str) -> Paving:
    doc = PavingDocument.model_validate_json(text)
    entries = [PavingEntry(Box.from_bounds(e.box), e.box_class) for e in doc.entries]
    paving = Paving(
        domain=Box.from_bounds(doc.domain),
        epsilon=doc.epsilon,
        entries=entries,
        meta=PavingMeta(
            boxes=len(entries),
            bisections=int(doc.meta.get("bisections", 0)),
            elapsed=float(doc.meta.get("elapsed", 0.0)),
        ),
    )
    counts = paving.counts()
    if counts != {k: doc.counts.get(k, 0) for k in counts}:
        raise ValueError(f"paving counts {doc.counts} do not match its entries {counts}")
    paving.meta.counts = counts
    return paving
