from typing import Dict

from pydantic import BaseModel, Field, field_validator

from core.config import settings
from core.thickset import BoxClass


class StyleMap(BaseModel):
    colors: Dict[BoxClass, str] = Field(
        default_factory=lambda: {BoxClass(k): v for k, v in settings.SVG_COLORS.items()}
    )
    stroke_width: float = Field(default_factory=lambda: settings.SVG_STROKE_WIDTH, ge=0)
    stroke_color: str = "#000000"
    image_size: int = Field(default_factory=lambda: settings.SVG_IMAGE_SIZE, gt=0)

    @field_validator("colors")
    @classmethod
    def all_classes_mapped(cls, v):
        missing = [c.value for c in BoxClass if c not in v]
        if missing:
            raise ValueError(f"no color for classes {missing}")
        return v
