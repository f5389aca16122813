"""Empirical ubiquity ratios and kappa-scaling probes for the concrete families.

The ubiquity ratio at level n and ball B is

    mu(B & union over alpha in J_n of prod_i Delta(r_alpha_i, rho_i(u_n))) / mu(B)

with a radius rho_i(u_n) that is fixed across the level.  Nothing here claims a lower
bound holds; the reports are raw measurements.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._farey import farey_cover, farey_hits
from .boxgeom.box import Box, Rect, union_membership
from .boxgeom.montecarlo import mc_measure, sample_points
from .boxgeom.neighborhood import Affine, Point, Slab, neighborhood, slab_box_measure
from .boxgeom.spaces import AmbientSpace, FactorSpace
from .boxgeom.sweep import MeasureEstimate, intersection_measure, union_measure
from .exceptions import SizeError, ValidationError
from .systems.families import (ENUM_CAP, RationalSystem, ResonantFamily, ShrinkingSystem, _check_level,
                               item_boxes)
from .systems.sanitize import RatePair

MC_SAMPLES = 200_000


def _ratio(num: MeasureEstimate, den: MeasureEstimate) -> MeasureEstimate:
    if not den.value > 0:
        raise ValidationError(("ball", "ball has zero measure"))
    value = min(max(num.value / den.value, 0.0), 1.0)
    # num <= true <= num + err, likewise for den
    err = (num.error + value * den.error) / den.value
    exact = num.exact / den.exact if num.exact is not None and den.exact is not None and den.exact else None
    return MeasureEstimate(value, err, method=num.method, seed=num.seed, samples=num.samples, exact=exact)


def _farey_applies(family, n) -> bool:
    # every reduced p/q with q <= u_n has a multiple of q inside [ell_n, u_n] once u_n >= 2 ell_n
    return (isinstance(family, RationalSystem) and family.d == 1
            and family.u(n) >= 2 * family.ell(n) and family.space.is_lebesgue)


def _farey_ratio(family, rad, ball: Box, n, method, samples, seed, cap):
    U = family.u(n)
    lo, hi = Fraction(ball.lo[0]), Fraction(ball.hi[0])
    width = hi - lo
    steps = 3 * U * U / math.pi ** 2 * float(width) + 2
    if method == "exact" or (method == "auto" and steps <= cap):
        if method == "exact" and steps > 100 * cap:
            raise SizeError(int(steps), 100 * cap, level=n, what="Farey walk")
        covered, _ = farey_cover(lo.numerator, lo.denominator, hi.numerator, hi.denominator, U, float(rad))
        value = min(max(covered / float(width), 0.0), 1.0)
        return MeasureEstimate(value, 1e-12, method="exact-farey")
    x = sample_points(family.space, samples, seed, region=ball)[:, 0]
    p = float(np.count_nonzero(farey_hits(x, U, float(rad)))) / samples
    return MeasureEstimate(p, 4.0 * math.sqrt(p * (1 - p) / samples), method="monte-carlo", seed=seed,
                           samples=samples)


def _product_ratio(family: ShrinkingSystem, rad, ball: Box, n, cap):
    """Shrinking targets: J_n is a product of per-factor word sets, so the union is a product."""
    total = sum(len(s.digits) ** n for s in family.specs)
    if total > cap:
        raise SizeError(total, cap, level=n, what="shrinking level words")
    value = Fraction(1)
    fvalue, err = 1.0, 0.0
    exact = True
    for i, (spec, f) in enumerate(zip(family.specs, family.space.factors)):
        sub = AmbientSpace((f,))
        bi = Box((ball.lo[i],), (ball.hi[i],))
        boxes = []
        for w in itertools.product(spec.digits, repeat=n):
            boxes.extend(neighborhood(Point((family.center(i, w),)), rad[i], f))
        num = intersection_measure(boxes, [bi], sub)
        den = union_measure([bi], sub)
        r = _ratio(num, den)
        if r.exact is None:
            exact = False
        else:
            value *= r.exact
        err = err + r.error
        fvalue *= r.value
    return MeasureEstimate(float(value) if exact else fvalue, err, method="exact-sweep",
                           exact=value if exact else None)


def _generic_ratio(family, rad, ball: Box, n, method, samples, seed, cap):
    space = family.space
    boxes, slabs = [], []
    count = 0
    for item in family.iter_near(n, ball, rad):
        count += 1
        if count > cap:
            raise SizeError(count, cap, level=n, what=f"{family.kind} items near the ball")
        pieces = family.factor_pieces(item, rad)
        bx = item_boxes(pieces)
        if bx is None:
            slabs.append(pieces)
        else:
            boxes.extend(bx)
    if not slabs and method != "monte-carlo":
        try:
            return _ratio(intersection_measure(boxes, [ball], space), union_measure([ball], space))
        except SizeError:
            if method == "exact":
                raise
    # Monte Carlo: membership in any product of per-factor pieces
    box_member = union_membership(boxes) if boxes else None

    def slab_member(x):
        out = np.zeros(len(x), dtype=bool)
        for pieces in slabs:
            hit = np.ones(len(x), dtype=bool)
            for i, p in enumerate(pieces):
                cols = x[:, list(space.axes(i))]
                if isinstance(p, Slab):
                    hit &= p.contains_points(cols)
                else:
                    hit &= union_membership(p)(cols) if p else False
            out |= hit
        return out

    x = sample_points(space, samples, seed, region=ball)
    inside = ball.contains_points(x)
    hit = np.zeros(len(x), dtype=bool)
    if box_member is not None:
        hit |= box_member(x)
    if slabs:
        hit |= slab_member(x)
    m = int(np.count_nonzero(inside))
    if m == 0:
        raise ValidationError(("ball", "no sample fell in the ball; it may carry no measure"))
    p = int(np.count_nonzero(hit & inside)) / m
    return MeasureEstimate(p, 4.0 * math.sqrt(p * (1 - p) / m), method="monte-carlo", seed=seed, samples=m)


def ubiquity_ratio(family: ResonantFamily, rates: RatePair, ball: Box, n: int, *, method: str = "auto",
                   samples: int = MC_SAMPLES, seed: int = 0, cap: int = ENUM_CAP) -> MeasureEstimate:
    """Fraction of ``ball`` covered by the rho(u_n)-neighborhoods of the level-n resonant sets.

    ``method`` is "auto", "exact" or "monte-carlo".  For the one-dimensional rational
    system the level's centers form a Farey sequence and the union is measured by
    walking its gaps; when that walk would exceed ``cap`` steps a Monte Carlo estimate
    is used instead.  Other families enumerate the items near the ball (at most ``cap``)
    and measure the union exactly, falling back to Monte Carlo for slanted slabs.
    """
    n = _check_level(n)
    if method not in ("auto", "exact", "monte-carlo"):
        raise ValidationError(("method", f"must be auto, exact or monte-carlo, got {method!r}"))
    if ball.dim != family.space.dim:
        raise ValidationError(("ball", f"dimension {ball.dim} does not match space dimension {family.space.dim}"))
    rad = rates.rho_at(n)
    if len(rad) != family.space.d:
        raise ValidationError(("rates", f"{len(rad)} radii for {family.space.d} factors"))
    if _farey_applies(family, n):
        return _farey_ratio(family, rad[0], ball, n, method, samples, seed, cap)
    if isinstance(family, ShrinkingSystem) and method != "monte-carlo":
        return _product_ratio(family, rad, ball, n, cap)
    return _generic_ratio(family, rad, ball, n, method, samples, seed, cap)


def default_balls(space: AmbientSpace, count: int = 20, level: int = 8, seed: int = 0,
                  include_full: bool = True) -> list[Box]:
    """Fixed pseudo-random dyadic cubes of side 2^-level, sorted, optionally followed by the full cube.

    Cantor axes use a random cylinder of the Cantor set instead (so the ball carries mass).
    """
    dim = space.dim
    if level * dim > 62:
        raise ValidationError(("level", f"level * dim = {level * dim} exceeds 62"))
    rng = np.random.default_rng(seed)
    side = 2 ** level
    picks = sorted(int(k) for k in rng.choice(side ** dim, count, replace=False))
    balls = []
    for k in picks:
        digits = []
        for _ in range(dim):
            digits.append(k % side)
            k //= side
        digits = digits[::-1]
        lo, hi = [], []
        for j, cantor in enumerate(space.axis_cantor):
            if cantor is None:
                lo.append(Fraction(digits[j], side))
                hi.append(Fraction(digits[j] + 1, side))
            else:
                depth = max(1, round(level * math.log(2) / math.log(cantor.base)) // 2)
                word = [cantor.digits[int(rng.integers(len(cantor.digits)))] for _ in range(depth)]
                a = sum(Fraction(w, cantor.base ** (i + 1)) for i, w in enumerate(word))
                lo.append(a)
                hi.append(a + Fraction(1, cantor.base ** depth))
        balls.append(Box(tuple(lo), tuple(hi)))
    if include_full:
        balls.append(Box.unit(dim))
    return balls


@dataclass(frozen=True)
class UbiquityRecord:
    ball_id: int
    n: int
    ratio: float
    method: str
    error: float


@dataclass
class UbiquityReport:
    records: list = field(default_factory=list)
    balls: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    tail_min: dict = field(default_factory=dict)
    flagged: list = field(default_factory=list)

    @property
    def min_ratio(self) -> float:
        return min((r.ratio for r in self.records), default=float("nan"))

    @property
    def methods(self) -> set:
        return {r.method for r in self.records}

    def ratios(self, ball_id: int) -> dict:
        return {r.n: r.ratio for r in self.records if r.ball_id == ball_id}

    def rows(self):
        return [(r.ball_id, r.n, r.ratio, r.method, r.error) for r in self.records]


def verify_ubiquity(family: ResonantFamily, rates: RatePair, balls, n_range, *, floor: float = 1e-3,
                    workers: int = 1, **kw) -> UbiquityReport:
    """Ratios for every (ball, level); per ball the minimum over n >= n0 for each candidate n0.

    A ball is flagged when its minimum over the upper half of the levels is below ``floor``
    (a diagnostic: ratios there are not visibly bounded away from 0).
    """
    balls = list(balls)
    levels = [_check_level(n) for n in n_range]
    jobs = [(b, n) for b in range(len(balls)) for n in levels]

    def run(job):
        b, n = job
        est = ubiquity_ratio(family, rates, balls[b], n, **kw)
        return UbiquityRecord(b, n, float(est.value), est.method, float(est.error))

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as ex:
            records = list(ex.map(run, jobs))
    else:
        records = [run(j) for j in jobs]
    report = UbiquityReport(records, balls, levels)
    for b in range(len(balls)):
        by_n = report.ratios(b)
        report.tail_min[b] = {n0: min(v for n, v in by_n.items() if n >= n0) for n0 in levels}
        upper = levels[len(levels) // 2:]
        if upper and report.tail_min[b][upper[0]] < floor:
            report.flagged.append(b)
    return report


@dataclass
class ScalingProbeReport:
    pairs: list
    values: list
    errors: list
    eps_slope: float
    r_slope: float
    method: str
    monotone: bool

    @property
    def delta(self) -> float:
        return self.eps_slope + self.r_slope if not math.isnan(self.r_slope) else float("nan")

    @property
    def kappa(self) -> float:
        d = self.delta
        return self.r_slope / d if d and not math.isnan(d) else float("nan")

    @property
    def implied(self) -> tuple:
        """(delta * kappa, delta * (1 - kappa))."""
        return self.r_slope, self.eps_slope


def _on_geometry(geometry, x) -> bool:
    if isinstance(geometry, Affine):
        return abs(sum(float(a) * q for a, q in zip(x, geometry.q)) - geometry.p) <= 1e-12
    return all(abs(float(a) - float(c)) <= 1e-12 for a, c in zip(x, geometry.coords))


def kappa_scaling_probe(factor: FactorSpace, geometry, x, r_list, eps_list, samples: int = 10 ** 6,
                        seed: int = 0, method: str = "auto") -> ScalingProbeReport:
    """Measure mu(B(x, r) & Delta(geometry, eps)) on a grid and fit log-log slopes.

    Points and Cantor points are measured exactly; slabs by Monte Carlo inside the ball
    (or exactly in dimension <= 2 with ``method="exact"``).  The fit is least squares of
    log mu on (1, log eps, log r); with a single r the r-slope is NaN.
    """
    x = tuple(x) if np.ndim(x) else (x,)
    problems = []
    if len(x) != factor.dim:
        problems.append(("x", f"length {len(x)} does not match factor dimension {factor.dim}"))
    elif not _on_geometry(geometry, x):
        problems.append(("x", "x does not lie on the resonant set"))
    bad = [(r, e) for r in r_list for e in eps_list if not e < r]
    if bad:
        problems.append(("eps", f"need eps < r for every pair, violated at {bad}"))
    if len(set(eps_list)) < 2:
        problems.append(("eps_list", "need at least two distinct eps values to fit a slope"))
    if problems:
        raise ValidationError(problems)
    space = AmbientSpace((factor,))
    pairs, values, errors = [], [], []
    tag = "exact-sweep"
    for r in r_list:
        ball = Rect(x, (r,) * factor.dim).pieces(factor.torus)
        for e in eps_list:
            nb = neighborhood(geometry, e, factor)
            if isinstance(nb, Slab):
                if method == "exact":
                    val, err = float(sum(slab_box_measure(nb, b) for b in ball)), 0.0
                else:
                    if len(ball) != 1:
                        raise ValidationError(("r", "Monte Carlo slab probe needs a ball inside the cube"))
                    est = mc_measure(nb.contains_points, space, samples, seed, region=ball[0])
                    val, err = est.value, est.error
                    tag = "monte-carlo"
            else:
                est = intersection_measure(nb, ball, space)
                val, err = est.value + est.error / 2, est.error / 2
            pairs.append((r, e))
            values.append(val)
            errors.append(err)
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0):
        raise ValidationError(("values", "a probed measure is zero; cannot fit in log space"))
    le = np.log([float(e) for _, e in pairs])
    lr = np.log([float(r) for r, _ in pairs])
    single_r = len(set(r_list)) < 2
    cols = [np.ones_like(le), le] + ([] if single_r else [lr])
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), np.log(v), rcond=None)
    eps_slope = float(coef[1])
    r_slope = float("nan") if single_r else float(coef[2])
    grid = v.reshape(len(r_list), len(eps_list))
    order_e = np.argsort([float(e) for e in eps_list])
    order_r = np.argsort([float(r) for r in r_list])
    g = grid[order_r][:, order_e]
    monotone = bool(np.all(np.diff(g, axis=1) >= 0) and np.all(np.diff(g, axis=0) >= 0))
    return ScalingProbeReport(pairs, values, errors, eps_slope, r_slope, tag, monotone)
