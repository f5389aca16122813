"""Randomized invariants checked with hypothesis."""
from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from rectlimsup._farey import farey_cover_py, farey_hits
from rectlimsup.boxgeom import Box, Rect, cover_residual, five_r_cover, scale_disjoint, union_measure
from rectlimsup.systems import minkowski_witness, parse_rate, verify_witness, volume_condition

from .oracles.intervals import clip, length
from .oracles.lattice import has_solution

DEN = 32


@st.composite
def boxes(draw, dim):
    lo, hi = [], []
    for _ in range(dim):
        a = draw(st.integers(0, DEN - 1))
        b = draw(st.integers(a + 1, DEN))
        lo.append(F(a, DEN))
        hi.append(F(b, DEN))
    return Box(tuple(lo), tuple(hi))


@st.composite
def box_lists(draw):
    dim = draw(st.integers(1, 3))
    return draw(st.lists(boxes(dim), min_size=1, max_size=8))


@given(box_lists())
@settings(max_examples=150, deadline=None)
def test_union_bounded_by_volumes(bs):
    m = union_measure(bs).exact
    assert max(b.volume() for b in bs) <= m <= min(1, sum(b.volume() for b in bs))


@given(box_lists(), st.randoms())
@settings(max_examples=100, deadline=None)
def test_union_order_invariant_and_monotone(bs, rnd):
    m = union_measure(bs).exact
    shuffled = list(bs)
    rnd.shuffle(shuffled)
    assert union_measure(shuffled).exact == m
    assert union_measure(bs[:-1]).exact <= m if len(bs) > 1 else True


@given(boxes(2), boxes(2))
@settings(max_examples=100, deadline=None)
def test_two_box_inclusion_exclusion(a, b):
    inter = a.intersect(b)
    overlap = inter.volume() if inter is not None else 0
    assert union_measure([a, b]).exact == a.volume() + b.volume() - overlap


@st.composite
def same_size_rects(draw):
    dim = draw(st.integers(1, 2))
    half = tuple(F(1, draw(st.integers(20, 200))) for _ in range(dim))
    n = draw(st.integers(1, 25))
    centers = [tuple(F(draw(st.integers(0, 500)), 500) for _ in range(dim)) for _ in range(n)]
    return [Rect(c, half) for c in centers]


@given(same_size_rects(), st.booleans())
@settings(max_examples=150, deadline=None)
def test_five_r_cover_invariants(rects, torus):
    kept = five_r_cover(rects, 5, torus)
    assert kept and set(kept) <= set(rects)
    for i, r in enumerate(kept):
        for s in kept[i + 1:]:
            assert scale_disjoint(r, s, 5, torus)
    assert cover_residual(rects, kept, 5, torus).exact == 0


@given(st.integers(1, 12), st.integers(0, 40), st.integers(1, 40), st.integers(2, 400))
@settings(max_examples=150, deadline=None)
def test_farey_walk_matches_direct_enumeration(U, a, w, rden):
    lo = F(a, 41)
    hi = min(F(1), lo + F(w, 41))
    if hi <= lo:
        return
    r = F(1, rden)
    covered, _ = farey_cover_py(lo, hi, U, float(r))
    ivs = [(F(p, q) - r, F(p, q) + r) for q in range(1, U + 1) for p in range(q + 1)]
    assert abs(covered - float(length(clip(ivs, lo, hi)))) < 1e-12


@given(st.integers(1, 30), st.integers(2, 500), st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=20))
@settings(max_examples=100, deadline=None)
def test_farey_hits_match_direct_distance(U, rden, xs):
    r = 1 / rden
    got = farey_hits(np.asarray(xs), U, r)
    for x, g in zip(xs, got):
        dist = min(min(abs(x - p / q), 1 - abs(x - p / q)) for q in range(1, U + 1) for p in range(q + 1))
        if abs(dist - r) > 1e-12:
            assert bool(g) == (dist < r)


@given(st.integers(-4, -1), st.integers(1, 5), st.integers(1, 50))
@settings(max_examples=50, deadline=None)
def test_rate_exact_matches_float(a, c, u):
    r = parse_rate(f"{c}*u^{a}")
    assert float(r.exact(u)) == float(np.float64(r(u))) or abs(float(r.exact(u)) - r(u)) <= 1e-15 * r(u)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=2), st.integers(1, 3), st.integers(1, 3),
       st.integers(2, 12))
@settings(max_examples=60, deadline=None)
def test_witness_agrees_with_enumeration(nums, P1, P2, rden):
    A = [[F(nums[0], 21), F(nums[1], 21)]]
    Phi, rho = [P1, P2], [F(1, rden)]
    found = minkowski_witness(A, Phi, rho, require_volume=False)
    assert (found is not None) == has_solution(A, Phi, rho)
    if found is not None:
        q, p = found.alpha[:2], found.alpha[2:]
        assert verify_witness(A, q, p, Phi, rho)
    if volume_condition(Phi, rho):
        assert found is not None
