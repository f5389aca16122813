"""The sets E_n: packed big rectangles at scale rho, and inside each one packed rectangles at scale psi.

Candidate centers are points of the resonant sets lying in the half ball (the ball
with the same center and half the side lengths).  For point geometries those are the
points themselves; for hyperplanes a lattice on the hyperplane with spacing rho/2 (or
psi/2 for the inner step).  Both packings are the greedy 5r selector.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..boxgeom.box import Box, Rect, is_exact
from ..boxgeom.cover import five_r_cover
from ..boxgeom.neighborhood import Affine
from ..boxgeom.sweep import MeasureEstimate, union_measure
from ..exceptions import SizeError, ValidationError
from ..systems.families import ENUM_CAP, ResonantFamily, _check_level
from ..systems.sanitize import RatePair


@dataclass
class LevelSet:
    n: int
    ball: Box
    big: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    shrunk: list = field(default_factory=list)
    boxes: list = field(default_factory=list)
    candidates: int = 0

    @property
    def centers(self) -> list:
        return [r.center for r in self.big]

    def measure(self, space=None) -> MeasureEstimate:
        return union_measure(self.boxes, space)


def half_ball(ball: Box) -> Box:
    lo, hi = [], []
    for a, b in zip(ball.lo, ball.hi):
        c, w = (a + b) / 2, (b - a) / 4
        lo.append(c - w)
        hi.append(c + w)
    return Box(tuple(lo), tuple(hi))


def _grid(lo, hi, step):
    """Points lo, lo + step, ... up to hi (inclusive)."""
    if step <= 0:
        raise ValidationError(("step", f"lattice spacing must be positive, got {step}"))
    count = int(math.floor((hi - lo) / step)) + 1
    return [lo + k * step for k in range(max(count, 0))]


def hyperplane_points(q, p, lo, hi, step, cap: int = ENUM_CAP) -> list[tuple]:
    """Lattice points of {x : q . x = p} inside the box [lo, hi], spacing ``step`` on the free axes.

    The axis with the largest |q_k| is solved for; the other axes run over a grid.
    """
    h = len(q)
    k = max(range(h), key=lambda j: abs(q[j]))
    free = [j for j in range(h) if j != k]
    grids = [_grid(lo[j], hi[j], step) for j in free]
    if math.prod(len(g) for g in grids) > cap:
        raise SizeError(math.prod(len(g) for g in grids), cap, what="hyperplane lattice")
    exact = all(is_exact(x) for x in list(lo) + list(hi) + [step])
    out = []
    for vals in itertools.product(*grids):
        rest = sum(q[j] * v for j, v in zip(free, vals))
        xk = Fraction(p - rest, q[k]) if exact else (p - rest) / q[k]
        if lo[k] <= xk <= hi[k]:
            x = [None] * h
            x[k] = xk
            for j, v in zip(free, vals):
                x[j] = v
            out.append(tuple(x))
    return out


def _geometry_points(item, region: Box, space, steps, cap):
    """Points of the item's resonant set inside ``region``, as full-space coordinate tuples."""
    per = []
    for i, g in enumerate(item.geometry):
        ax = list(space.axes(i))
        lo = [region.lo[j] for j in ax]
        hi = [region.hi[j] for j in ax]
        if isinstance(g, Affine):
            pts = hyperplane_points(g.q, g.p, lo, hi, steps[i] / 2, cap)
        else:
            c = tuple(g.coords)
            pts = [c] if all(a <= x <= b for a, x, b in zip(lo, c, hi)) else []
        if not pts:
            return []
        per.append(pts)
    return [tuple(x for part in combo for x in part) for combo in itertools.product(*per)]


def _half_widths(space, radii):
    return tuple(radii[space.axis_factor[j]] for j in range(space.dim))


def _clip_rect(rect: Rect, ball: Box, torus) -> list[Box]:
    out = []
    for piece in rect.pieces(torus):
        cut = piece.intersect(ball)
        if cut is not None and all(a < b for a, b in zip(cut.lo, cut.hi)):
            out.append(cut)
    return out


def build_level_set(family: ResonantFamily, rates: RatePair, ball: Box, n: int, cap: int = ENUM_CAP) -> LevelSet:
    """E_n inside ``ball``: big rho-rectangles packed by the 5r selector, then psi-rectangles inside each.

    Each kept big center x is tied to the lexicographically smallest alpha in J_n whose
    resonant set contains x.
    """
    n = _check_level(n)
    space = family.space
    if ball.dim != space.dim:
        raise ValidationError(("ball", f"dimension {ball.dim} does not match space dimension {space.dim}"))
    rho, psi = rates.rho_at(n), rates.psi_at(n)
    for i, (a, b) in enumerate(zip(psi, rho)):
        if a > b * (1 + 1e-12):
            raise ValidationError((f"psi[{i}]", f"psi exceeds rho at level {n}: {float(a)} > {float(b)}"))
    torus = space.axis_torus
    hb = half_ball(ball)

    owner: dict[tuple, tuple] = {}
    count = 0
    for item in family.iter_near(n, hb, [0] * space.d):
        count += 1
        if count > cap:
            raise SizeError(count, cap, level=n, what=f"{family.kind} candidates")
        for x in _geometry_points(item, hb, space, rho, cap):
            if x not in owner or item.alpha < owner[x][0]:
                owner[x] = (item.alpha, item)
    big_half = _half_widths(space, rho)
    small_half = _half_widths(space, psi)
    rects = [Rect(x, big_half) for x in owner]
    kept = five_r_cover(rects, 5, torus)

    out = LevelSet(n, ball, candidates=len(rects))
    for r in kept:
        alpha, item = owner[r.center]
        region = Box(tuple(max(0, c - h) for c, h in zip(r.center, r.half)),
                     tuple(min(1, c + h) for c, h in zip(r.center, r.half)))
        pts = _geometry_points(item, region, space, psi, cap)
        if r.center not in pts:
            pts.append(r.center)
        inner = five_r_cover([Rect(x, small_half) for x in pts], 5, torus)
        out.big.append(r)
        out.alphas.append(alpha)
        out.shrunk.append(inner)
        for s in inner:
            out.boxes.extend(_clip_rect(s, ball, torus))
    return out
