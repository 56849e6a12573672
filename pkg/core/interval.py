"""
Interval and box arithmetic with outward rounding.

Every computed endpoint is pushed one unit in the last place away from the
true value with ``math.nextafter``, so results always enclose the exact
real-arithmetic image. Tightness is not a goal.
"""
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Sequence, Tuple

from core.errors import UnsplittableBoxError

INF = math.inf
TWO_PI = 2.0 * math.pi


def _down(x: float) -> float:
    if math.isinf(x):
        return x
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    if math.isinf(x):
        return x
    return math.nextafter(x, INF)


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi] with extended bounds, or the canonical EMPTY."""
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError(f"Invalid interval bound: [{self.lo}, {self.hi}]")
        if lo > hi and not (lo == INF and hi == -INF):
            raise ValueError(f"Invalid interval: [{self.lo}, {self.hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        if self.is_empty:
            return 0.0
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return self.lo + (self.hi - self.lo) / 2.0

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def subset_of(self, other: "Interval") -> bool:
        if self.is_empty:
            return True
        return other.lo <= self.lo and self.hi <= other.hi

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersection(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return EMPTY
        return Interval(lo, hi)

    def __add__(self, other: "Interval") -> "Interval":
        return add(self, other)

    def __sub__(self, other: "Interval") -> "Interval":
        return sub(self, other)

    def __mul__(self, other: "Interval") -> "Interval":
        return mul(self, other)

    def __truediv__(self, other: "Interval") -> "Interval":
        return div(self, other)

    def __neg__(self) -> "Interval":
        return neg(self)

    def __str__(self) -> str:
        if self.is_empty:
            return "EMPTY"
        return f"[{self.lo!r}, {self.hi!r}]"


EMPTY = Interval(INF, -INF)
ENTIRE = Interval(-INF, INF)


# --- Binary operations ---

def add(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(_down(a.lo + b.lo), _up(a.hi + b.hi))


def sub(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    return Interval(_down(a.lo - b.hi), _up(a.hi - b.lo))


def _prod(x: float, y: float) -> float:
    # 0 * inf counts as 0 for interval bounds
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def mul(a: Interval, b: Interval) -> Interval:
    if a.is_empty or b.is_empty:
        return EMPTY
    p = [_prod(a.lo, b.lo), _prod(a.lo, b.hi), _prod(a.hi, b.lo), _prod(a.hi, b.hi)]
    return Interval(_down(min(p)), _up(max(p)))


def div(a: Interval, b: Interval) -> Interval:
    """
    Interval division. A divisor containing zero yields the hull of the
    extended two-branch result, which is a single (possibly unbounded)
    interval; dividing by exactly [0, 0] yields EMPTY.
    """
    if a.is_empty or b.is_empty:
        return EMPTY
    if b.lo > 0.0 or b.hi < 0.0:
        q = []
        for x in (a.lo, a.hi):
            for y in (b.lo, b.hi):
                if x == 0.0:
                    q.append(0.0)
                elif math.isinf(x) and math.isinf(y):
                    continue
                else:
                    q.append(x / y)
        return Interval(_down(min(q)), _up(max(q)))

    if b.lo == 0.0 and b.hi == 0.0:
        return EMPTY
    if a.lo == 0.0 and a.hi == 0.0:
        return Interval(0.0, 0.0)
    if b.lo == 0.0:
        if a.lo >= 0.0:
            return Interval(_down(a.lo / b.hi), INF)
        if a.hi <= 0.0:
            return Interval(-INF, _up(a.hi / b.hi))
    elif b.hi == 0.0:
        if a.lo >= 0.0:
            return Interval(-INF, _up(a.lo / b.lo))
        if a.hi <= 0.0:
            return Interval(_down(a.hi / b.lo), INF)
    return ENTIRE


_BINARY_OPS = {"add": add, "sub": sub, "mul": mul, "div": div}


def binary_op(op: str, a: Interval, b: Interval) -> Interval:
    try:
        fn = _BINARY_OPS[op]
    except KeyError:
        raise ValueError(f"Unknown binary interval operation '{op}'")
    return fn(a, b)


# --- Unary operations ---

def neg(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    return Interval(-a.hi, -a.lo)


def sqr(a: Interval) -> Interval:
    if a.is_empty:
        return EMPTY
    lo2, hi2 = a.lo * a.lo, a.hi * a.hi
    if a.lo >= 0.0:
        return Interval(max(0.0, _down(lo2)), _up(hi2))
    if a.hi <= 0.0:
        return Interval(max(0.0, _down(hi2)), _up(lo2))
    return Interval(0.0, _up(max(lo2, hi2)))


def sqrt(a: Interval) -> Interval:
    if a.is_empty or a.hi < 0.0:
        return EMPTY
    lo = max(a.lo, 0.0)
    return Interval(max(0.0, _down(math.sqrt(lo))), _up(math.sqrt(a.hi)))


def _pow_down(x: float, n: int) -> float:
    # lower bound of x**n for x >= 0, by repeated squaring
    result, base = 1.0, x
    while n:
        if n & 1:
            result = _down(result * base)
        n >>= 1
        if n:
            base = _down(base * base)
    return max(result, 0.0)


def _pow_up(x: float, n: int) -> float:
    result, base = 1.0, x
    while n:
        if n & 1:
            result = _up(result * base)
        n >>= 1
        if n:
            base = _up(base * base)
    return result


def pow_int(a: Interval, n: int) -> Interval:
    """Integer power with parity-aware sign handling."""
    if a.is_empty:
        return EMPTY
    if n < 0:
        return div(Interval(1.0, 1.0), pow_int(a, -n))
    if n == 0:
        return Interval(1.0, 1.0)
    if n == 1:
        return a
    if n == 2:
        return sqr(a)

    if n % 2 == 1:
        # odd powers are increasing
        lo = _pow_down(a.lo, n) if a.lo >= 0.0 else -_pow_up(-a.lo, n)
        hi = _pow_up(a.hi, n) if a.hi >= 0.0 else -_pow_down(-a.hi, n)
        return Interval(lo, hi)

    if a.lo >= 0.0:
        return Interval(_pow_down(a.lo, n), _pow_up(a.hi, n))
    if a.hi <= 0.0:
        return Interval(_pow_down(-a.hi, n), _pow_up(-a.lo, n))
    return Interval(0.0, _pow_up(max(-a.lo, a.hi), n))


def _hits(a: Interval, phase: float) -> bool:
    """True when a may contain phase + 2*k*pi for some integer k."""
    slack = 1e-12 * max(1.0, abs(a.lo), abs(a.hi))
    k = math.floor((a.lo - phase) / TWO_PI)
    for j in (k - 1, k, k + 1, k + 2):
        t = phase + j * TWO_PI
        if a.lo - slack <= t <= a.hi + slack:
            return True
    return False


def _periodic(a: Interval, fn, max_phase: float, min_phase: float) -> Interval:
    if a.is_empty:
        return EMPTY
    if math.isinf(a.lo) or math.isinf(a.hi) or a.hi - a.lo >= TWO_PI:
        return Interval(-1.0, 1.0)
    v1, v2 = fn(a.lo), fn(a.hi)
    lo = -1.0 if _hits(a, min_phase) else max(-1.0, _down(min(v1, v2)))
    hi = 1.0 if _hits(a, max_phase) else min(1.0, _up(max(v1, v2)))
    return Interval(lo, hi)


def sin(a: Interval) -> Interval:
    return _periodic(a, math.sin, math.pi / 2.0, -math.pi / 2.0)


def cos(a: Interval) -> Interval:
    return _periodic(a, math.cos, 0.0, math.pi)


_UNARY_OPS = {"neg": neg, "sqr": sqr, "sqrt": sqrt, "sin": sin, "cos": cos}


def unary_op(op: str, a: Interval, exponent: int = 2) -> Interval:
    if op == "pow_int":
        return pow_int(a, exponent)
    try:
        fn = _UNARY_OPS[op]
    except KeyError:
        raise ValueError(f"Unknown unary interval operation '{op}'")
    return fn(a)


# --- Boxes ---

@dataclass(frozen=True)
class Box:
    """Axis-aligned box, one interval per state dimension."""
    components: Tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def from_bounds(cls, bounds: Sequence[Sequence[float]]) -> "Box":
        return cls(tuple(Interval(lo, hi) for lo, hi in bounds))

    @classmethod
    def point(cls, x: Sequence[float]) -> "Box":
        return cls(tuple(Interval(v, v) for v in x))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.components)

    def __getitem__(self, i: int) -> Interval:
        return self.components[i]

    @property
    def dim(self) -> int:
        return len(self.components)

    @property
    def is_empty(self) -> bool:
        return any(c.is_empty for c in self.components)

    @property
    def width(self) -> float:
        if self.is_empty or not self.components:
            return 0.0
        return max(c.width for c in self.components)

    @property
    def volume(self) -> float:
        if self.is_empty:
            return 0.0
        return math.prod(c.width for c in self.components)

    @property
    def lower(self) -> Tuple[float, ...]:
        return tuple(c.lo for c in self.components)

    @property
    def upper(self) -> Tuple[float, ...]:
        return tuple(c.hi for c in self.components)

    def midpoint(self) -> Tuple[float, ...]:
        return tuple(c.mid for c in self.components)

    def bounds(self) -> List[List[float]]:
        return [[c.lo, c.hi] for c in self.components]

    def contains_point(self, x: Sequence[float]) -> bool:
        return len(x) == self.dim and all(c.contains(v) for c, v in zip(self.components, x))

    def subset_of(self, other: "Box") -> bool:
        return all(a.subset_of(b) for a, b in zip(self.components, other.components))

    def corners(self) -> Iterator[Tuple[float, ...]]:
        """All 2^n vertices, in lexicographic (lo before hi) order."""
        return product(*((c.lo, c.hi) for c in self.components))

    def __str__(self) -> str:
        return " x ".join(str(c) for c in self.components)


def bisect(b: Box) -> Tuple[Box, Box]:
    """
    Split along the widest component at its midpoint. Ties go to the lowest
    index; the halves share the split hyperplane.
    """
    if b.is_empty:
        raise UnsplittableBoxError("cannot bisect an empty box")
    widths = [c.width for c in b.components]
    w = max(widths) if widths else 0.0
    if w <= 0.0:
        raise UnsplittableBoxError(f"box {b} is unsplittable (zero width)")
    i = widths.index(w)
    c = b.components[i]
    m = c.mid
    if not (c.lo < m < c.hi) or math.isinf(m):
        raise UnsplittableBoxError(f"box {b} is unsplittable along dimension {i}")
    left = b.components[:i] + (Interval(c.lo, m),) + b.components[i + 1:]
    right = b.components[:i] + (Interval(m, c.hi),) + b.components[i + 1:]
    return Box(left), Box(right)
