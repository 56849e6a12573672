from typing import Optional

from core.errors import UnsupportedDimensionError
from core.thickset import BoxClass
from models.paving import Paving
from models.style import StyleMap


def _f(v: float) -> str:
    return f"{v:.12g}"


class SVG:
    """Accumulates SVG 1.1 text; coordinates are in domain units, y pointing down."""

    def __init__(self):
        self.svg = ""

    def header(self, width: int, height: int, x: float, y: float, w: float, h: float):
        self.svg += (
            '<?xml version="1.0" standalone="no"?>\n'
            f'<svg version="1.1" width="{width}" height="{height}" '
            f'viewBox="{_f(x)} {_f(y)} {_f(w)} {_f(h)}" xmlns="http://www.w3.org/2000/svg">\n'
        )

    def filled_rectangle(self, x: float, y: float, w: float, h: float, fill: str, extra: str = ""):
        self.svg += f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{fill}"{extra}/>\n'

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str, width: float):
        self.svg += (
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>\n'
        )

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"


def render_svg(p: Paving, style: Optional[StyleMap] = None, merge_out: bool = False) -> str:
    """
    One rect per entry, in canonical order, plus a frame. The second state
    variable points up. With merge_out, OUT entries are replaced by a single
    background rect covering the domain.
    """
    if p.dim != 2:
        raise UnsupportedDimensionError(f"SVG rendering needs a 2-D paving, got {p.dim}-D")
    style = style or StyleMap()

    x0, x1 = p.domain[0].lo, p.domain[0].hi
    y0, y1 = p.domain[1].lo, p.domain[1].hi
    w, h = x1 - x0, y1 - y0
    width = style.image_size
    height = max(1, round(width * h / w)) if w > 0 else width

    extra = ""
    if style.stroke_width > 0:
        extra = f' stroke="{style.stroke_color}" stroke-width="{_f(style.stroke_width)}"'

    svg = SVG()
    # flipping y: a box [lo, hi] in x2 is drawn from -hi to -lo
    svg.header(width, height, x0, -y1, w, h)
    if merge_out:
        svg.filled_rectangle(x0, -y1, w, h, style.colors[BoxClass.OUT])
    for entry in p.entries:
        if merge_out and entry.box_class is BoxClass.OUT:
            continue
        bx, by = entry.box[0], entry.box[1]
        svg.filled_rectangle(bx.lo, -by.hi, bx.width, by.width, style.colors[entry.box_class], extra)

    frame = max(w, h) / 500.0
    corners = [(x0, -y1), (x1, -y1), (x1, -y0), (x0, -y0)]
    for (ax, ay), (bx_, by_) in zip(corners, corners[1:] + corners[:1]):
        svg.line(ax, ay, bx_, by_, style.stroke_color, frame)
    return svg.get_svg()
