from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field

from core.config import settings


class CliInvocation(BaseModel):
    subcommand: Literal["pave", "lie", "check"]
    input_path: Path
    out_path: Optional[Path] = None
    svg_path: Optional[Path] = None
    paving_path: Optional[Path] = None
    epsilon: Optional[float] = Field(default=None, gt=0)
    samples: int = Field(default_factory=lambda: settings.ORACLE_SAMPLES, gt=0)
    param_samples: int = Field(default=0, ge=0)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    box_budget: int = Field(default_factory=lambda: settings.BOX_BUDGET, gt=0)
    seed: int = Field(default_factory=lambda: settings.ORACLE_SEED)
    merge_out: bool = False
