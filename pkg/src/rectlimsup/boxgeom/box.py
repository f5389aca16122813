"""Axis-aligned boxes in the unit cube and centered rectangles that may wrap."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from ..exceptions import ValidationError


def is_exact(x) -> bool:
    return isinstance(x, (Rational, np.integer)) and not isinstance(x, bool)


def _num(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


@dataclass(frozen=True)
class Box:
    """Closed box prod_j [lo_j, hi_j] inside [0,1]^dim.

    Coordinates are kept as given, so integer/Fraction inputs stay exact.
    """

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(_num(x) for x in self.lo)
        hi = tuple(_num(x) for x in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        problems = []
        if len(lo) != len(hi) or not lo:
            problems.append(("box", f"lo and hi need the same positive length, got {len(lo)} and {len(hi)}"))
        else:
            for j, (a, b) in enumerate(zip(lo, hi)):
                if not 0 <= a <= b <= 1:
                    problems.append((f"axis {j}", f"need 0 <= lo <= hi <= 1, got [{a}, {b}]"))
        if problems:
            raise ValidationError(problems)

    @classmethod
    def from_intervals(cls, intervals) -> "Box":
        intervals = list(intervals)
        return cls(tuple(a for a, _ in intervals), tuple(b for _, b in intervals))

    @classmethod
    def unit(cls, dim: int) -> "Box":
        return cls((0,) * dim, (1,) * dim)

    @classmethod
    def ball(cls, center, radius) -> "Box":
        """Sup-metric ball clipped to the cube (no wrap)."""
        return cls(tuple(max(0, c - radius) for c in center), tuple(min(1, c + radius) for c in center))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.lo + self.hi)

    @property
    def widths(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    def volume(self):
        v = 1
        for w in self.widths:
            v *= w
        return v

    def intersect(self, other: "Box") -> "Box | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(a > b for a, b in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def contains(self, other: "Box") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def contains_points(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        return np.all((x >= lo) & (x <= hi), axis=1)


def _axis_pieces(c, h, torus: bool):
    """Intervals making up c +- h on one axis, wrapped or clipped."""
    if torus:
        if 2 * h >= 1:
            return [(0, 1)]
        a, b = c - h, c + h
        if a < 0:
            return [(0, b), (a + 1, 1)]
        if b > 1:
            return [(0, b - 1), (a, 1)]
        return [(a, b)]
    a, b = max(0, c - h), min(1, c + h)
    if a > b:
        return []
    return [(a, b)]


@dataclass(frozen=True)
class Rect:
    """Rectangle given by center and per-axis half-widths; may stick out of the cube."""

    center: tuple
    half: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(_num(x) for x in self.center))
        object.__setattr__(self, "half", tuple(_num(x) for x in self.half))
        if len(self.center) != len(self.half):
            raise ValidationError(("rect", "center and half-widths differ in length"))
        if any(h < 0 for h in self.half):
            raise ValidationError(("half", f"half-widths must be nonnegative, got {self.half}"))

    @property
    def dim(self) -> int:
        return len(self.center)

    def enlarged(self, k) -> "Rect":
        return Rect(self.center, tuple(k * h for h in self.half))

    def pieces(self, torus=True) -> list[Box]:
        """Boxes whose union is the rectangle read on the cube.

        ``torus`` is a bool or per-axis sequence; torus axes wrap around, the rest clip.
        """
        if isinstance(torus, bool):
            torus = (torus,) * self.dim
        per_axis = [_axis_pieces(c, h, t) for c, h, t in zip(self.center, self.half, torus)]
        if any(not p for p in per_axis):
            return []
        return [Box.from_intervals(combo) for combo in itertools.product(*per_axis)]


def boxes_to_arrays(boxes) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([[float(x) for x in b.lo] for b in boxes], dtype=float)
    hi = np.array([[float(x) for x in b.hi] for b in boxes], dtype=float)
    return lo, hi


def union_membership(boxes, chunk: int = 4096):
    """Vectorized predicate: which rows of a point array lie in some box."""
    boxes = list(boxes)
    if not boxes:
        return lambda x: np.zeros(len(np.atleast_2d(x)), dtype=bool)
    lo, hi = boxes_to_arrays(boxes)

    def member(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(len(x), dtype=bool)
        if len(lo) <= 256:
            # few boxes: one pass per box over the columns is cheaper than broadcasting
            cols = [x[:, j] for j in range(x.shape[1])]
            for a, b in zip(lo, hi):
                inside = (cols[0] >= a[0]) & (cols[0] <= b[0])
                for j in range(1, len(cols)):
                    inside &= (cols[j] >= a[j]) & (cols[j] <= b[j])
                out |= inside
            return out
        step = max(1, chunk // max(1, len(lo)) * 64)
        for s in range(0, len(x), step):
            xs = x[s:s + step, None, :]
            inside = np.all((xs >= lo) & (xs <= hi), axis=2)
            out[s:s + step] = inside.any(axis=1)
        return out

    return member


def as_fraction_box(box: Box) -> Box:
    return Box(tuple(Fraction(x) for x in box.lo), tuple(Fraction(x) for x in box.hi))
