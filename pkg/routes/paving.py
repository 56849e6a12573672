from typing import Dict, List, Optional

from fastapi import APIRouter, HTTPException, Response, status
from pydantic import BaseModel, Field

from core.config import settings
from core.errors import PavingBudgetError, ThickslideError
from models.style import StyleMap
from models.system import SystemDef
from utils.pipeline import leaf_lie_derivatives, pave_system
from utils.serialize import paving_document
from utils.svg import render_svg
from utils.sysfile import parse_system

router = APIRouter(prefix="", tags=["Paving"])


class SystemRequest(BaseModel):
    system: str  # text of a .sys file


class PaveRequest(SystemRequest):
    epsilon: Optional[float] = Field(default=None, gt=0)
    box_budget: Optional[int] = Field(default=None, gt=0)


class SvgRequest(PaveRequest):
    merge_out: bool = False


def _load(text: str) -> SystemDef:
    try:
        return parse_system(text)
    except ThickslideError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


def _pave(req: PaveRequest):
    system = _load(req.system)
    try:
        # requests are paved in-process, whatever WORKERS says
        return pave_system(system, req.epsilon, workers=1, box_budget=req.box_budget or settings.BOX_BUDGET)
    except PavingBudgetError as e:
        raise HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(e))
    except ThickslideError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/pave")
def pave_route(req: PaveRequest):
    paving = _pave(req)
    doc = paving_document(paving)
    doc["inner_is_empty"] = paving.inner_is_empty
    return doc


@router.post("/lie", response_model=List[Dict[str, str]])
def lie_route(req: SystemRequest):
    return leaf_lie_derivatives(_load(req.system))


@router.post("/svg")
def svg_route(req: SvgRequest):
    paving = _pave(req)
    try:
        body = render_svg(paving, StyleMap(), merge_out=req.merge_out)
    except ThickslideError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    return Response(content=body, media_type="image/svg+xml")
