"""Greedy disjoint subfamily of same-size rectangles (the 5r covering selector)."""
from __future__ import annotations

import itertools
import math

from ..exceptions import ValidationError
from .box import Rect
from .spaces import AmbientSpace
from .sweep import difference_measure


def _torus_flags(torus, dim):
    if isinstance(torus, bool):
        return (torus,) * dim
    torus = tuple(torus)
    if len(torus) != dim:
        raise ValidationError(("torus", f"need {dim} flags, got {len(torus)}"))
    return torus


def _axis_gap(a, b, torus):
    g = abs(a - b)
    if torus:
        g = g % 1
        g = min(g, 1 - g)
    return g


def scale_disjoint(r: Rect, s: Rect, scale=5, torus=True) -> bool:
    """Whether the ``scale``-enlargements of two same-size rectangles overlap in measure zero at most."""
    torus = _torus_flags(torus, r.dim)
    return any(_axis_gap(a, b, t) >= 2 * scale * h
               for a, b, h, t in zip(r.center, s.center, r.half, torus))


def five_r_cover(rects, scale=5, torus=True) -> list[Rect]:
    """Keep a rectangle iff its ``scale``-enlargement misses those of every rectangle kept so far.

    Rectangles are visited in lexicographic order of their centers.  Every input then
    lies in the ``5 * scale``-enlargement of some kept rectangle (for scale >= 1/3 the
    enlargement by 2*scale + 1 already suffices).  All rectangles must share the same
    half-widths.
    """
    rects = list(rects)
    if not rects:
        return []
    half = rects[0].half
    for k, r in enumerate(rects):
        if r.half != half:
            raise ValidationError(("rects", f"rectangle {k} has half-widths {r.half}, expected {half}"))
    if scale <= 0:
        raise ValidationError(("scale", f"must be positive, got {scale}"))
    dim = len(half)
    torus = _torus_flags(torus, dim)

    # hash centers into cells at least as wide as the conflict distance
    ncell = []
    for h, t in zip(half, torus):
        thr = 2 * scale * h
        m = math.floor(1 / thr) if thr > 0 else 1 << 20
        ncell.append(m if m >= 3 else 1)

    def cell(c):
        out = []
        for x, m, t in zip(c, ncell, torus):
            k = math.floor(x * m)
            out.append(k % m if t else min(max(k, 0), m - 1))
        return tuple(out)

    kept: list[Rect] = []
    grid: dict[tuple, list[Rect]] = {}
    for r in sorted(rects, key=lambda r: r.center):
        home = cell(r.center)
        clash = False
        for off in itertools.product((-1, 0, 1), repeat=dim):
            key = []
            for i, o, m, t in zip(home, off, ncell, torus):
                if m == 1:
                    if o:
                        break
                    key.append(0)
                    continue
                j = i + o
                if t:
                    j %= m
                elif not 0 <= j < m:
                    break
                key.append(j)
            else:
                for s in grid.get(tuple(key), ()):
                    if not scale_disjoint(r, s, scale, torus):
                        clash = True
                        break
            if clash:
                break
        if not clash:
            kept.append(r)
            grid.setdefault(home, []).append(r)
    return kept


def cover_residual(rects, kept, scale=5, torus=True, space: AmbientSpace | None = None, factor=None):
    """Measure of the inputs' union not covered by the ``factor``-enlarged kept rectangles.

    ``factor`` defaults to ``5 * scale``.
    """
    rects = list(rects)
    if not rects:
        return difference_measure([], [], space)
    factor = 5 * scale if factor is None else factor
    torus = _torus_flags(torus, rects[0].dim)
    a = [b for r in rects for b in r.pieces(torus)]
    b = [p for r in kept for p in r.enlarged(factor).pieces(torus)]
    return difference_measure(a, b, space)
