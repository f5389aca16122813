"""Which sample points fall into the level-n target sets, level by level.

A point is hit at level n when it lies in the union over alpha in J_n of the
psi(u_n)-neighborhoods.  Membership is decided directly: rounding x q for rational
points, the base-b digits of x for shrinking targets, rounding A q for linear forms.
"Hit in at least k levels of a window [N, 2N]" stands in for "hit infinitely often".
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..boxgeom.montecarlo import sample_points
from ..exceptions import SizeError, ValidationError
from ..systems.families import ENUM_CAP, LinearFormsSystem, RationalSystem, ShrinkingSystem, _check_level
from ..systems.sanitize import RatePair


@dataclass
class HitHistogram:
    points: np.ndarray
    levels: list
    hits: np.ndarray  # points x levels
    seed: int | None = None

    def hit_levels(self, i: int) -> list:
        return [n for n, h in zip(self.levels, self.hits[i]) if h]

    def fraction(self, lo: int, hi: int, k: int = 1) -> float:
        """Fraction of points hit in at least k of the levels lo..hi."""
        cols = [j for j, n in enumerate(self.levels) if lo <= n <= hi]
        if not cols:
            raise ValidationError(("window", f"no tested level lies in [{lo}, {hi}]"))
        return float(np.mean(self.hits[:, cols].sum(axis=1) >= k))

    def window_fraction(self, N: int, k: int = 1) -> float:
        return self.fraction(N, 2 * N, k)

    def rows(self, windows, k: int = 1):
        return [(N, 2 * N, k, self.window_fraction(N, k)) for N in windows]


def _rational_hits(family: RationalSystem, x, n, psi, cap):
    lo, hi = family.ell(n), family.u(n)
    if (hi - lo + 1) * len(x) > cap:
        raise SizeError((hi - lo + 1) * len(x), cap, level=n, what="rational hit tests")
    out = np.zeros(len(x), dtype=bool)
    psi = np.asarray([float(p) for p in psi])
    for q in range(lo, hi + 1):
        dist = np.abs(x - np.rint(x * q) / q)
        out |= np.all(dist < psi, axis=1)
    return out


def _shrinking_hits(family: ShrinkingSystem, x, n, psi):
    out = np.ones(len(x), dtype=bool)
    for i, spec in enumerate(family.specs):
        b = spec.base
        if n * math.log2(b) > 52:
            raise ValidationError(("n", f"level {n} needs more digits than a double carries for base {b}"))
        scale = b ** n
        c = np.floor(x[:, i] * scale).astype(np.int64)
        allowed = np.zeros(b, dtype=bool)
        allowed[list(spec.digits)] = True
        hit = np.zeros(len(x), dtype=bool)
        for m in (c - 1, c, c + 1):
            ok = (m >= 0) & (m < scale)
            mm = np.where(ok, m, 0)
            for _ in range(n):
                ok &= allowed[mm % b]
                mm //= b
            center = (np.where(ok, m, 0) + float(family.x_o[i])) / scale
            hit |= ok & (np.abs(x[:, i] - center) < float(psi[i]))
        out &= hit
    return out


def _linear_hits(family: LinearFormsSystem, x, n, psi, cap):
    win = family.window(n)
    qs = list(family.iter_q(n))
    if len(qs) * len(x) > cap:
        raise SizeError(len(qs) * len(x), cap, level=n, what="linear-form hit tests")
    out = np.zeros(len(x), dtype=bool)
    h = family.h
    for q in qs:
        qa = np.asarray(q, dtype=float)
        P = family._p_bound(q, win)
        hit = np.ones(len(x), dtype=bool)
        for i in range(family.d):
            v = x[:, i * h:(i + 1) * h] @ qa
            p = np.rint(v)
            hit &= (np.abs(p) <= P) & (np.abs(v - p) < float(psi[i]) * np.abs(qa).sum())
        out |= hit
    return out


def level_hits(family, rates: RatePair, x, n, cap: int = ENUM_CAP) -> np.ndarray:
    n = _check_level(n)
    psi = rates.psi_at(n)
    if isinstance(family, RationalSystem):
        return _rational_hits(family, x, n, psi, cap)
    if isinstance(family, ShrinkingSystem):
        return _shrinking_hits(family, x, n, psi)
    if isinstance(family, LinearFormsSystem):
        return _linear_hits(family, x, n, psi, cap)
    raise ValidationError(("family", f"no hit test for {type(family).__name__}"))


def hit_statistics(family, rates: RatePair, n_range, points=None, *, samples: int = 10 ** 4, seed: int = 0,
                   cap: int = 10 ** 9) -> HitHistogram:
    """Per point and level, whether the point is hit.  Points default to ``samples`` seeded draws."""
    levels = [_check_level(n) for n in n_range]
    if points is None:
        x = sample_points(family.space, samples, seed)
        used_seed = seed
    else:
        x = np.asarray(points, dtype=float)
        if x.ndim == 1:
            # a flat list is a list of 1-D points, or a single point in higher dimension
            x = x.reshape(-1, 1) if family.space.dim == 1 else x.reshape(1, -1)
        used_seed = None
    if x.shape[1] != family.space.dim:
        raise ValidationError(("points", f"points have {x.shape[1]} coordinates, space has {family.space.dim}"))
    hits = np.zeros((len(x), len(levels)), dtype=bool)
    for j, n in enumerate(levels):
        hits[:, j] = level_hits(family, rates, x, n, cap)
    return HitHistogram(x, levels, hits, used_seed)
