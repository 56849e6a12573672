from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from core.interval import Box
from core.thickset import BoxClass


@dataclass(frozen=True)
class PavingEntry:
    box: Box
    box_class: BoxClass


class PavingMeta(BaseModel):
    boxes: int = 0
    bisections: int = 0
    counts: Dict[str, int] = Field(default_factory=lambda: {c.value: 0 for c in BoxClass})
    elapsed: float = 0.0  # seconds; not part of the JSON document


class Paving(BaseModel):
    """
    Epsilon-resolved partition of the domain into classified boxes.

    - S_sub is the union of IN boxes.
    - S_sup is the union of IN, PEN and UNKNOWN boxes.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    domain: Box
    epsilon: float = Field(..., gt=0)
    entries: List[PavingEntry] = []
    meta: PavingMeta = Field(default_factory=PavingMeta)

    _lower: Optional[np.ndarray] = PrivateAttr(default=None)
    _upper: Optional[np.ndarray] = PrivateAttr(default=None)

    @property
    def dim(self) -> int:
        return self.domain.dim

    def counts(self) -> Dict[str, int]:
        counts = {c.value: 0 for c in BoxClass}
        for entry in self.entries:
            counts[entry.box_class.value] += 1
        return counts

    def areas(self) -> Dict[str, float]:
        areas = {c.value: 0.0 for c in BoxClass}
        for entry in self.entries:
            areas[entry.box_class.value] += entry.box.volume
        return areas

    @property
    def inner_is_empty(self) -> bool:
        return all(entry.box_class is not BoxClass.IN for entry in self.entries)

    def outer_entries(self) -> List[PavingEntry]:
        """Entries forming the outer approximation (UNKNOWN counts as outer)."""
        return [e for e in self.entries if e.box_class is not BoxClass.OUT]

    def bound_arrays(self):
        if self._lower is None:
            self._lower = np.array([e.box.lower for e in self.entries], dtype=float).reshape(-1, self.dim)
            self._upper = np.array([e.box.upper for e in self.entries], dtype=float).reshape(-1, self.dim)
        return self._lower, self._upper


# --- JSON document schema ---

class EntryDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    box: List[List[float]]
    box_class: BoxClass = Field(..., alias="class")


class PavingDocument(BaseModel):
    domain: List[List[float]]
    epsilon: float = Field(..., gt=0)
    entries: List[EntryDocument]
    counts: Dict[str, int]
    meta: Dict[str, float] = {}
