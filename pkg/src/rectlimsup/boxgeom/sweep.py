"""Exact measure of boolean combinations of box unions by coordinate compression.

Every box endpoint on every axis becomes a grid line.  Each group of boxes is painted
onto the resulting cell grid with an N-dimensional difference array, the requested
boolean combination of the painted masks is taken, and the covered cells are summed
with per-axis cell weights (lengths for Lebesgue axes, Cantor masses otherwise).
When every coordinate is an integer or Fraction the sum is carried out in integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exceptions import SizeError, UseStatisticalError, ValidationError
from .box import Box, is_exact
from .cantor import cantor_box_measure
from .spaces import AmbientSpace

EXACT_DIM_CUTOFF = 4
CELL_CAP = 20_000_000


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    error: float = 0.0
    method: str = "exact-sweep"
    seed: int | None = None
    samples: int | None = None
    exact: Fraction | None = None

    def __post_init__(self):
        if self.error < 0:
            raise ValidationError(("error", f"must be nonnegative, got {self.error}"))
        if not -1e-12 <= self.value <= 1 + 1e-12:
            raise ValidationError(("value", f"measure {self.value} outside [0, 1]"))

    def __float__(self):
        return float(self.value)


def _check(groups, space):
    dims = {b.dim for g in groups for b in g}
    for g in groups:
        for b in g:
            if not isinstance(b, Box):
                raise ValidationError(("boxes", f"expected Box, got {type(b).__name__}"))
    if space is None:
        if len(dims) > 1:
            raise ValidationError(("boxes", f"mixed box dimensions {sorted(dims)}"))
        dim = dims.pop() if dims else 1
        space = AmbientSpace.lebesgue(dim)
    elif dims and dims != {space.dim}:
        raise ValidationError(("boxes", f"box dimensions {sorted(dims)} do not match space dimension {space.dim}"))
    return space


def _cell_weights(coords, cantor, exact, depth):
    """Per-cell weights along one axis plus a per-cell truncation error."""
    n = len(coords) - 1
    if cantor is None:
        if exact:
            return [coords[k + 1] - coords[k] for k in range(n)], None
        c = np.asarray(coords, dtype=float)
        return np.diff(c), None
    vals, errs = [], []
    for k in range(n):
        v, e = cantor_box_measure((coords[k], coords[k + 1]), cantor, depth=depth, exact=exact)
        vals.append(v)
        errs.append(e)
    if exact:
        return vals, errs if any(errs) else None
    errs = np.asarray(errs)
    return np.asarray(vals), errs if errs.any() else None


def _contract(mask, weights):
    """Sum of mask * prod_j w_j[i_j] over all cells, contracting the last axis first."""
    acc = mask
    for w in reversed(weights):
        acc = acc @ w
    return acc


def _exact_contract(mask, weights):
    scales = []
    ints = []
    for w in weights:
        L = 1
        for x in w:
            L = math.lcm(L, Fraction(x).denominator)
        scales.append(L)
        ints.append([int(Fraction(x) * L) for x in w])
    bound = 1
    for L in scales:
        bound *= L
    if bound < 2 ** 62:
        total = int(_contract(mask.astype(np.int64), [np.asarray(w, dtype=np.int64) for w in ints]))
    else:
        total = _contract(mask.astype(object), [np.asarray(w, dtype=object) for w in ints])
        total = int(total)
    return Fraction(total, bound)


def _paint(group, index, shape):
    D = len(shape)
    diff = np.zeros(tuple(s + 1 for s in shape), dtype=np.int32)
    if group:
        lo = np.array([[index[j][b.lo[j]] for j in range(D)] for b in group], dtype=np.intp)
        hi = np.array([[index[j][b.hi[j]] for j in range(D)] for b in group], dtype=np.intp)
        for corner in itertools.product((0, 1), repeat=D):
            idx = tuple(np.where(corner[j], hi[:, j], lo[:, j]) for j in range(D))
            np.add.at(diff, idx, -1 if sum(corner) % 2 else 1)
    for j in range(D):
        np.cumsum(diff, axis=j, out=diff)
    return diff[tuple(slice(0, s) for s in shape)] > 0


def combine_measure(groups, combine, space: AmbientSpace | None = None, *, cutoff: int = EXACT_DIM_CUTOFF,
                    cap: int = CELL_CAP, cantor_depth: int = 48) -> MeasureEstimate:
    """Measure of ``combine(*masks)`` where mask g marks cells covered by ``groups[g]``."""
    groups = [list(g) for g in groups]
    space = _check(groups, space)
    D = space.dim
    if D > cutoff:
        raise UseStatisticalError(f"dimension {D} exceeds the exact-sweep cutoff {cutoff}; use mc_measure")
    everything = [b for g in groups for b in g]
    if not everything:
        return MeasureEstimate(0.0, 0.0, exact=Fraction(0))
    exact = all(b.exact for b in everything)

    coords, index = [], []
    for j in range(D):
        vals = {b.lo[j] for b in everything} | {b.hi[j] for b in everything}
        if exact:
            c = sorted(vals)
        else:
            c = sorted(set(float(v) for v in vals))
        coords.append(c)
        if exact:
            index.append({v: k for k, v in enumerate(c)})
        else:
            pos = {v: k for k, v in enumerate(c)}
            index.append(_FloatIndex(pos))
    shape = tuple(len(c) - 1 for c in coords)
    ncells = math.prod(shape)
    if ncells > cap:
        raise SizeError(ncells, cap, what="sweep cell grid")
    if ncells == 0:
        return MeasureEstimate(0.0, 0.0, exact=Fraction(0) if exact else None)

    masks = [_paint(g, index, shape) for g in groups]
    mask = combine(*masks)

    weights, errs = [], []
    for j, cantor in enumerate(space.axis_cantor):
        w, e = _cell_weights(coords[j], cantor, exact, cantor_depth)
        weights.append(w)
        errs.append(e)

    if exact:
        lower = _exact_contract(mask, weights)
        if all(e is None for e in errs):
            return MeasureEstimate(float(lower), 0.0, exact=lower)
        upper = _exact_contract(mask, [w if e is None else [a + b for a, b in zip(w, e)]
                                       for w, e in zip(weights, errs)])
        return MeasureEstimate(float(lower), float(upper - lower))

    lower = float(_contract(mask.astype(float), weights))
    if all(e is None for e in errs):
        return MeasureEstimate(min(max(lower, 0.0), 1.0), 0.0)
    upper = float(_contract(mask.astype(float), [w if e is None else w + e for w, e in zip(weights, errs)]))
    return MeasureEstimate(min(max(lower, 0.0), 1.0), max(upper - lower, 0.0))


class _FloatIndex:
    """Maps a coordinate (any numeric type) to its grid index through its float value."""

    def __init__(self, pos):
        self.pos = pos

    def __getitem__(self, v):
        return self.pos[float(v)]


def union_measure(boxes, space: AmbientSpace | None = None, **kw) -> MeasureEstimate:
    """Measure of the union of ``boxes``; exact (error 0) on Lebesgue axes."""
    return combine_measure([boxes], lambda m: m, space, **kw)


def intersection_measure(a, b, space: AmbientSpace | None = None, **kw) -> MeasureEstimate:
    """Measure of (union of a) intersected with (union of b)."""
    return combine_measure([a, b], lambda x, y: x & y, space, **kw)


def difference_measure(a, b, space: AmbientSpace | None = None, **kw) -> MeasureEstimate:
    """Measure of (union of a) minus (union of b)."""
    return combine_measure([a, b], lambda x, y: x & ~y, space, **kw)


def grid_measure(boxes, dim: int, bits: int = 8) -> MeasureEstimate:
    """Lebesgue measure of a box union by counting cells of the dyadic grid of side 2^-bits.

    Cells fully inside the union give a lower bound, cells meeting it an upper bound;
    the midpoint is returned with half the gap as error.
    """
    m = 2 ** bits
    if m ** dim > CELL_CAP:
        raise SizeError(m ** dim, CELL_CAP, what="grid oracle")
    inner = np.zeros((m,) * dim, dtype=bool)
    outer = np.zeros((m,) * dim, dtype=bool)
    for b in boxes:
        lo = np.asarray([float(x) for x in b.lo]) * m
        hi = np.asarray([float(x) for x in b.hi]) * m
        if np.any(hi <= lo):
            continue
        i_in = tuple(slice(int(np.ceil(a)), int(np.floor(c))) for a, c in zip(lo, hi))
        i_out = tuple(slice(int(np.floor(a)), int(np.ceil(c))) for a, c in zip(lo, hi))
        inner[i_in] = True
        outer[i_out] = True
    lo_v = inner.sum() / m ** dim
    hi_v = outer.sum() / m ** dim
    return MeasureEstimate((lo_v + hi_v) / 2, (hi_v - lo_v) / 2, method="grid-oracle")
