"""Resonant-set geometries and their r-neighborhoods under the sup metric."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exceptions import ValidationError
from .box import Box, Rect, is_exact
from .spaces import FactorSpace


@dataclass(frozen=True)
class Point:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))


@dataclass(frozen=True)
class Affine:
    """The hyperplane {A in [0,1]^h : A . q = p}."""

    q: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(int(x) for x in self.q))
        if not any(self.q):
            raise ValidationError(("q", "affine geometry needs a nonzero integer vector q"))


@dataclass(frozen=True)
class CantorPreimage:
    """Point x(w) of a Cantor factor reached by the digit word ``word``."""

    word: tuple
    center: Fraction

    @property
    def coords(self):
        return (self.center,)


@dataclass(frozen=True)
class Slab:
    """Sup-metric r-neighborhood of a hyperplane inside the unit cube.

    The set of A with sup-distance < r to {A . q = p} is exactly |A . q - p| < r * |q|_1.
    """

    q: tuple
    p: int
    r: object

    @property
    def tol(self):
        return self.r * sum(abs(x) for x in self.q)

    @property
    def dim(self) -> int:
        return len(self.q)

    @property
    def axis_aligned(self) -> bool:
        return sum(1 for x in self.q if x) == 1

    def contains_points(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.abs(x @ np.asarray(self.q, dtype=float) - self.p) < float(self.tol)

    def to_boxes(self) -> list[Box]:
        """Box form of an axis-aligned slab; other slabs have none."""
        if not self.axis_aligned:
            raise ValidationError(("slab", "only axis-aligned slabs convert to boxes"))
        k = next(i for i, x in enumerate(self.q) if x)
        qk = self.q[k]
        c = Fraction(self.p, qk) if is_exact(self.r) else self.p / qk
        a, b = max(0, c - self.r), min(1, c + self.r)
        if a >= b:
            return []
        lo = [0] * self.dim
        hi = [1] * self.dim
        lo[k], hi[k] = a, b
        return [Box(tuple(lo), tuple(hi))]


def _clip(poly, a, c, keep_le):
    """Clip a polygon against a . x <= c (or >= c)."""
    out = []
    n = len(poly)
    for i in range(n):
        P, Q = poly[i], poly[(i + 1) % n]
        fp = a[0] * P[0] + a[1] * P[1] - c
        fq = a[0] * Q[0] + a[1] * Q[1] - c
        if not keep_le:
            fp, fq = -fp, -fq
        if fp <= 0:
            out.append(P)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    return out


def _area(poly):
    s = 0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def slab_box_measure(slab: Slab, box: Box):
    """Lebesgue measure of slab intersected with a box, for slabs in dimension 1 or 2.

    Exact (Fraction) when all inputs are rational.
    """
    if slab.dim == 1:
        c = Fraction(slab.p, slab.q[0]) if is_exact(slab.r) else slab.p / slab.q[0]
        a, b = max(box.lo[0], c - slab.r), min(box.hi[0], c + slab.r)
        return max(b - a, 0)
    if slab.dim != 2:
        raise ValidationError(("slab", f"exact slab measure needs dimension <= 2, got {slab.dim}"))
    (x0, y0), (x1, y1) = box.lo, box.hi
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    poly = _clip(poly, slab.q, slab.p + slab.tol, True)
    if poly:
        poly = _clip(poly, slab.q, slab.p - slab.tol, False)
    return _area(poly) if len(poly) >= 3 else 0


def neighborhood(geometry, radius, factor: FactorSpace):
    """Boxes (or a Slab) forming the open ``radius``-neighborhood of a resonant geometry.

    ``radius`` is a scalar or per-axis sequence.  Point neighborhoods wrap on torus
    factors and clip otherwise; affine geometries give a Slab in the factor's cube.
    """
    if isinstance(geometry, Affine):
        if np.ndim(radius):
            radius = radius[0]
        if not radius > 0:
            raise ValidationError(("radius", f"must be positive, got {radius}"))
        if len(geometry.q) != factor.dim:
            raise ValidationError(("q", f"length {len(geometry.q)} does not match factor dimension {factor.dim}"))
        return Slab(geometry.q, geometry.p, radius)
    coords = geometry.coords
    if len(coords) != factor.dim:
        raise ValidationError(("coords", f"length {len(coords)} does not match factor dimension {factor.dim}"))
    half = tuple(radius) if np.ndim(radius) else (radius,) * factor.dim
    if any(not h > 0 for h in half):
        raise ValidationError(("radius", f"must be positive, got {radius}"))
    return Rect(coords, half).pieces(factor.torus)
