"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Fixture constants marked "pinned" were fixed from independent oracle runs before the
library was built (see tests/oracles and tests/fixtures); they are not tuned to the
library's output.
"""
import itertools
import json
import math
import random
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest
from scipy.special import polygamma

from rectlimsup.boxgeom import (AmbientSpace, Box, CantorSpec, FactorSpace, Rect, cover_residual, five_r_cover,
                                mc_measure, union_measure, union_membership)
from rectlimsup.boxgeom.neighborhood import Affine, CantorPreimage, Point
from rectlimsup.dichotomy import (application_series, build_level_set, chung_erdos_bound, hit_statistics,
                                  theorem_series)
from rectlimsup.systems import (LevelScheme, RationalSystem, ShrinkingSystem, item_boxes, make_rates,
                                minkowski_witness, sanitize_rates, verify_witness, volume_condition)
from rectlimsup.ubiquity import default_balls, kappa_scaling_probe, ubiquity_ratio, verify_ubiquity

from .conftest import random_box
from .oracles.grid import grid_bracket
from .oracles.lattice import has_solution

FIXTURES = Path(__file__).parent / "fixtures"

# pinned from the exact interval-sweep oracle over the 20 default balls, levels 2..5:
# smallest ratio observed 0.50650 (ball [42/256, 43/256], level 2)
UBIQUITY_FLOOR = 0.50
# pinned from the exact Fraction oracle for the second-moment ratio, 20 levels, ball [0, 1]
CHUNG_ERDOS_RATIO = F(3129817395653411443382020869912601, 4946987472748984799552253335097600)
# pinned from the window-measure oracle: d=2 fractions 0.5326 (N=4) and 0.1253 (N=16), a
# factor 4.25; d=1 fractions between 0.832 and 0.906 for N = 4..64
HIT_DECAY_FACTOR = 3.5
HIT_FLOOR = 0.80


def verdict(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def test_criterion_01_union_measure_against_grid_and_monte_carlo(capsys):
    bits = {1: 14, 2: 8, 3: 6}
    rng = random.Random(2024)
    start = time.perf_counter()
    bad_grid, worst_sigma = [], 0.0
    for k in range(200):
        dim = 1 + k % 3
        bs = [random_box(rng, dim, 60) for _ in range(rng.randint(1, 50))]
        exact = union_measure(bs).exact
        lo, hi = grid_bracket([(b.lo, b.hi) for b in bs], dim, bits[dim])
        if not lo <= exact <= hi:
            bad_grid.append(k)
        mc = mc_measure(union_membership(bs), AmbientSpace.lebesgue(dim), 10 ** 5, seed=k)
        v = float(exact)
        sigma = math.sqrt(v * (1 - v) / 10 ** 5)
        dev = abs(mc.value - v)
        worst_sigma = max(worst_sigma, dev / sigma if sigma > 0 else (0.0 if dev == 0 else math.inf))
    elapsed = time.perf_counter() - start
    ok = not bad_grid and worst_sigma <= 4 and elapsed < 10
    verdict(capsys, 1, ok, f"200 cases, grid misses {bad_grid}, worst MC deviation {worst_sigma:.2f} sigma, "
                           f"{elapsed:.1f} s")


def test_criterion_02_five_r_cover_invariants(capsys):
    rng = random.Random(7)
    failures = []
    for k in range(1000):
        dim = 1 + k % 2
        torus = bool(k % 3)
        half = tuple(F(1, rng.randint(20, 400)) for _ in range(dim))
        rects = [Rect(tuple(F(rng.randint(0, 997), 997) for _ in range(dim)), half)
                 for _ in range(rng.randint(1, 30))]
        kept = five_r_cover(rects, 5, torus)
        for r, s in itertools.combinations(kept, 2):
            # independent check: some axis separates the 5x enlargements
            sep = False
            for a, b, h in zip(r.center, s.center, half):
                g = abs(a - b)
                if torus:
                    g = min(g % 1, 1 - g % 1)
                sep |= g >= 10 * h
            if not sep:
                failures.append((k, "overlap"))
        if cover_residual(rects, kept, 5, torus).exact != 0:
            failures.append((k, "residual"))
    verdict(capsys, 2, not failures, f"1000 families, failures {failures[:5]}")


def test_criterion_03_shrinking_ratio_is_one(capsys):
    worst = 0.0
    cases = 0
    for b, d in itertools.product((2, 3), (1, 2)):
        for digits in ([(0, 1)] if b == 2 else [(0, 2), (0, 1, 2)]):
            fam = ShrinkingSystem([b] * d, [digits] * d)
            san = sanitize_rates("shrinking", "u^-1", d=d, bases=[b] * d)
            rates = make_rates(san, levels=range(1, 7))
            for n in range(1, 7):
                est = ubiquity_ratio(fam, rates, Box.unit(d), n)
                worst = max(worst, abs(est.value - 1))
                cases += 1
                if len(digits) ** (n * d) <= 4096:
                    # second route: sweep of the union of all item boxes
                    rad = rates.rho_at(n)
                    boxes = [bx for it in fam.iter_level(n) for bx in item_boxes(fam.factor_pieces(it, rad))]
                    worst = max(worst, abs(float(union_measure(boxes, fam.space).value) - 1))
    verdict(capsys, 3, worst <= 1e-12, f"{cases} (b, d, digits, n) cases, max |ratio - 1| = {worst:.1e}")


def test_criterion_04_rational_ubiquity_floor(capsys):
    fam = RationalSystem(1, LevelScheme("geometric", 16))
    san = sanitize_rates("simultaneous", "u^-1", d=1)
    rates = make_rates(san, M=16, levels=range(2, 6), scheme=fam.scheme)
    balls = default_balls(fam.space, 20, 8, seed=0, include_full=False)
    rep = verify_ubiquity(fam, rates, balls, range(2, 6), seed=0)
    oracle = {F(r["k"], 2 ** r["j"]): r["ratios"] for r in map(json.loads, open(FIXTURES / "ubiquity_fixture.jsonl"))}
    mismatch = []
    for rec in rep.records:
        want = oracle[balls[rec.ball_id].lo[0]][rec.n - 2]
        if abs(rec.ratio - want) > max(rec.error, 1e-9):
            mismatch.append((rec.ball_id, rec.n, rec.ratio, want))
    ok = rep.min_ratio >= UBIQUITY_FLOOR and not mismatch and len(oracle) == 20
    verdict(capsys, 4, ok, f"min ratio {rep.min_ratio:.4f} >= {UBIQUITY_FLOOR} over {len(rep.records)} records, "
                           f"methods {sorted(rep.methods)}, oracle mismatches {mismatch[:3]}")


def test_criterion_05_kappa_scaling(capsys):
    point = kappa_scaling_probe(FactorSpace(1, torus=True), Point((F(1, 2),)), (F(1, 2),), [F(1, 10), F(1, 5)],
                                [F(1, 1000), F(1, 100), F(1, 50)])
    slab = kappa_scaling_probe(FactorSpace(2, kappa=0.5, torus=False), Affine((1, 1), 1), (0.5, 0.5), [0.1, 0.2],
                               [0.001, 0.01], samples=10 ** 6, seed=0)
    spec = CantorSpec(3, (0, 2))
    cantor = kappa_scaling_probe(FactorSpace(1, cantor=spec, torus=False), CantorPreimage((0,), F(0)), (F(0),),
                                 [F(1, 3)], [F(1, 3 ** k) for k in range(2, 8)])
    want = math.log(2) / math.log(3)
    ok = (abs(point.eps_slope - 1) <= 0.05 and point.method == "exact-sweep"
          and abs(slab.kappa - 0.5) <= 0.1 and slab.method == "monte-carlo"
          and abs(cantor.eps_slope - want) <= 0.05)
    verdict(capsys, 5, ok, f"point eps-slope {point.eps_slope:.4f}; slab kappa {slab.kappa:.4f} "
                           f"(delta {slab.delta:.4f}); Cantor eps-slope {cantor.eps_slope:.4f} vs {want:.4f}")


def _rel(a, b):
    return float(np.max(np.abs(np.asarray(a) / np.asarray(b) - 1)))


def test_criterion_06_rate_identities_and_sanitizer(capsys):
    us = np.arange(2, 10 ** 4 + 1, dtype=float)
    errs = {}
    M = 16
    # simultaneous: psi = phi/q, rho = (phi/q)(q prod phi)^(-1/d)
    p = make_rates(sanitize_rates("simultaneous", "u^-1", d=2), M=M, levels=[1, 2])
    errs["simultaneous d=2"] = max(_rel(p.psi[0](us), us ** -2), _rel(p.rho[0](us), us ** -1.5))
    p = make_rates(sanitize_rates("simultaneous", "u^-3", d=1), M=M, levels=[1, 2])
    errs["simultaneous floor d=1"] = max(_rel(p.psi[0](us), us ** -2.5), _rel(p.rho[0](us), us ** -2))
    # linear forms: psi = phi/(h max Phi), rho = M phi/max Phi (prod phi prod Phi)^(-1/d)
    p = make_rates(sanitize_rates("linear_forms", "u^-1", Phi="u", d=1, h=1, M=M, u_max=10 ** 4), M=M, levels=[1, 2])
    errs["linear h=d=1"] = max(_rel(p.psi[0](us), us ** -2), _rel(p.rho[0](us), M * us ** -2))
    p = make_rates(sanitize_rates("linear_forms", "u^-2", Phi="u", d=1, h=2, M=M, u_max=10 ** 4), M=M, levels=[1, 2])
    errs["linear h=2 d=1"] = max(_rel(p.psi[0](us), us ** -3 / 2), _rel(p.rho[0](us), M * us ** -3))
    p = make_rates(sanitize_rates("shrinking", "u^-1", d=1, bases=[3]), levels=[1, 2])
    ns = np.arange(1, 30, dtype=float)
    errs["shrinking"] = max(_rel(p.rho[0](ns), 3.0 ** -ns), _rel(p.psi[0](ns), 3.0 ** -ns / ns))
    identities_ok = all(e <= 1e-12 for e in errs.values())

    san = sanitize_rates("linear_forms", "u^-5", Phi="u", d=1, h=1, u_max=10 ** 4)
    worked = _rel(san.sanitized[0](us), us ** -1.9)

    rng = random.Random(3)
    invariant_fail = []
    for k in range(24):
        d, h = rng.choice([(1, 1), (1, 2), (2, 1), (2, 2)])
        phi = [f"{rng.choice([1, 2, 5])}*u^{-rng.choice([1, 1.5, 2, 3, 5])}" for _ in range(d)]
        Phi = [f"{rng.choice([1, 2])}*u^{rng.choice([1, 1.5, 2])}" for _ in range(h)]
        s = sanitize_rates("linear_forms", phi, Phi=Phi, d=d, h=h, u_max=2000)
        grid = np.arange(1, 2001, dtype=float)
        for i in range(d):
            new, old = s.sanitized[i](grid), s.original[i](grid)
            if np.any(new < old * (1 - 1e-12)):
                invariant_fail.append((k, i, "below phi"))
            if np.any(np.diff(new) > 1e-15 * new[:-1]):
                invariant_fail.append((k, i, "increasing"))
            if not np.array_equal(new[s.in_N1], old[s.in_N1]):
                invariant_fail.append((k, i, "changed on N1"))
    ok = identities_ok and worked <= 1e-6 and not invariant_fail
    worst = max(errs.values())
    verdict(capsys, 6, ok, f"closed forms max rel err {worst:.1e}; worked example rel err {worked:.1e}; "
                           f"invariant failures {invariant_fail[:3]}")


def test_criterion_07_series(capsys):
    errs = []
    for M in (4, 16):
        fam = RationalSystem(2, LevelScheme("geometric", M))
        rates = make_rates(sanitize_rates("simultaneous", "u^-1", d=2), M=M, levels=[1, 2], scheme=fam.scheme)
        errs.append(abs(theorem_series(rates, fam.space, 10 ** 4).total - 1 / (M - 1)))
    Q = 10 ** 4
    sq = application_series("simultaneous", "u^-1", Q=Q, d=2)
    zeta_trunc = math.pi ** 2 / 6 - float(polygamma(1, Q + 1))
    errs.append(abs(sq.total - zeta_trunc))
    harmonic = application_series("linear_forms", "u^-1", "u", Q=Q, d=1, h=1)
    ok = max(errs) <= 1e-6 and harmonic.label == "diverging" and sq.label == "converging"
    verdict(capsys, 7, ok, f"max closed-form error {max(errs):.1e}; harmonic -> {harmonic.label}, "
                           f"q^-2 -> {sq.label} (S = {sq.total:.8f})")


def test_criterion_08_chung_erdos(capsys):
    E = [Box((F(1, 8),), (F(3, 8),)), Box((F(1, 2),), (F(9, 16),))]
    m = union_measure(E).exact
    identical = all(chung_erdos_bound([E] * N).exact_ratios[-1] == m * N / (N - 1) for N in (2, 3, 10, 20))
    fam = RationalSystem(1, LevelScheme("linear"))
    rates = make_rates(sanitize_rates("simultaneous", "u^-1", d=1), levels=range(1, 21), scheme=fam.scheme)
    ball = Box.unit(1)
    rep = chung_erdos_bound([build_level_set(fam, rates, ball, n) for n in range(1, 21)], fam.space)
    value = rep.exact_ratios[-1]
    ok = identical and value == CHUNG_ERDOS_RATIO and value >= F(1, 10) * ball.volume()
    verdict(capsys, 8, ok, f"identical-sets closed form {'holds' if identical else 'fails'}; "
                           f"20-level ratio {float(value):.6f} (pinned {float(CHUNG_ERDOS_RATIO):.6f})")


def test_criterion_09_hit_trend(capsys):
    fracs = {}
    for d, windows in ((2, (4, 8, 16)), (1, (4, 8, 16, 32, 64))):
        fam = RationalSystem(d, LevelScheme("linear"))
        levels = sorted({n for N in windows for n in range(N, 2 * N + 1)})
        rates = make_rates(sanitize_rates("simultaneous", "u^-1", d=d), levels=levels, scheme=fam.scheme)
        H = hit_statistics(fam, rates, levels, samples=10 ** 4, seed=0)
        fracs[d] = [H.window_fraction(N) for N in windows]
    factor = fracs[2][0] / fracs[2][-1]
    ok = factor >= HIT_DECAY_FACTOR and min(fracs[1]) >= HIT_FLOOR
    verdict(capsys, 9, ok, f"d=2 fractions {[round(x, 4) for x in fracs[2]]}, factor {factor:.2f} >= "
                           f"{HIT_DECAY_FACTOR}; d=1 fractions {[round(x, 4) for x in fracs[1]]} >= {HIT_FLOOR}")


def test_criterion_10_minkowski_witness(capsys):
    rng = random.Random(10)
    failures = []
    for k in range(100):
        d, h = rng.choice([(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)])
        A = [[F(rng.randint(0, 9999), 9999) for _ in range(h)] for _ in range(d)]
        Phi = [rng.randint(1, 6) for _ in range(h)]
        vol = math.prod(P + 1 for P in Phi)
        # smallest radii on a 1/1000 grid with prod rho * prod (Phi + 1) > 1
        base = F(math.ceil(1000 * (1 / vol) ** (1 / d)) + 1, 1000)
        rho = [base] * d
        if not volume_condition(Phi, rho):
            failures.append((k, "parameters"))
            continue
        it = minkowski_witness(A, Phi, rho)
        q, p = it.alpha[:h], it.alpha[h:]
        if not verify_witness(A, q, p, Phi, rho) or not has_solution(A, Phi, rho):
            failures.append((k, "witness"))
    verdict(capsys, 10, not failures, f"100 random matrices, failures {failures[:5]}")
