import math
from fractions import Fraction as F

import numpy as np
import pytest

from rectlimsup.boxgeom import AmbientSpace, Box, Rect, scale_disjoint, union_measure
from rectlimsup.dichotomy import (application_series, build_level_set, chung_erdos_bound, classify, hit_statistics,
                                  report_from_terms, theorem_series)
from rectlimsup.dichotomy.levelset import half_ball, hyperplane_points
from rectlimsup.exceptions import ValidationError
from rectlimsup.systems import LevelScheme, LinearFormsSystem, RationalSystem, ShrinkingSystem, make_rates, sanitize_rates

from .oracles.rational import chung_erdos_level, chung_erdos_ratio
from .oracles.intervals import length


# series

def test_constant_ratio_gives_linear_partial_sums():
    rep = report_from_terms(np.ones(1000))
    assert rep.total == 1000
    assert rep.label == "diverging"
    assert rep.rows()[0] == (1, 1.0, 1.0)


def test_checkpoints_end_at_N():
    rep = report_from_terms(np.ones(300))
    assert rep.checkpoints[-1] == 300
    assert 256 in rep.checkpoints and 100 in rep.checkpoints


def test_theorem_series_geometric_case():
    fam = RationalSystem(2, LevelScheme("geometric", 16))
    san = sanitize_rates("simultaneous", "u^-1", d=2)
    rates = make_rates(san, M=16, levels=[1, 2], scheme=fam.scheme)
    rep = theorem_series(rates, fam.space, 10 ** 4)
    assert rep.total == pytest.approx(1 / 15, abs=1e-12)
    assert rep.label == "converging"


def test_application_series_inverse_squares():
    rep = application_series("simultaneous", "u^-1", Q=10 ** 4, d=2)
    assert rep.total == pytest.approx(math.fsum(1 / q ** 2 for q in range(1, 10 ** 4 + 1)), abs=1e-12)
    assert rep.label == "converging"
    assert rep.comparison is not None


def test_harmonic_and_log_boundary_cases():
    assert application_series("linear_forms", "u^-1", "u", Q=10 ** 4, d=1, h=1).label == "diverging"
    assert application_series("shrinking", "u^-1", Q=10 ** 4, d=1).label == "diverging"
    assert application_series("simultaneous", "u^-1*log(u)^-2", Q=10 ** 5, d=1).label == "converging"
    rep = application_series("simultaneous", "u^-1*log(u)^-1", Q=10 ** 5, d=1)
    assert rep.label == "inconclusive"
    assert "index 1" in rep.note


def test_classify_short_series_is_inconclusive():
    assert classify([1.0, 1.0])[0] == "inconclusive"


def test_negative_terms_rejected():
    with pytest.raises(ValidationError):
        report_from_terms([1.0, -1.0])


# level sets

def shrinking_rates(b=2, levels=range(1, 5)):
    fam = ShrinkingSystem([b], [tuple(range(b))])
    san = sanitize_rates("shrinking", "u^-1", d=1, bases=[b])
    return fam, make_rates(san, levels=levels)


def test_half_ball():
    assert half_ball(Box((F(0),), (F(1),))) == Box((F(1, 4),), (F(3, 4),))


def test_shrinking_level_set_keeps_one_center():
    fam, rates = shrinking_rates()
    E = build_level_set(fam, rates, Box.unit(1), 3)
    assert E.centers == [(F(1, 4),)]
    assert len(E.shrunk[0]) == 1
    assert E.measure().exact == 2 * F(1, 24)


def test_rational_level_set_matches_interval_oracle():
    fam = RationalSystem(1, LevelScheme("linear"))
    san = sanitize_rates("simultaneous", "u^-1", d=1)
    rates = make_rates(san, levels=range(1, 13), scheme=fam.scheme)
    for n in range(1, 13):
        E = build_level_set(fam, rates, Box.unit(1), n)
        assert E.measure().exact == length(chung_erdos_level(n))


def test_level_set_big_rectangles_are_five_disjoint():
    fam = RationalSystem(2, LevelScheme("linear"))
    san = sanitize_rates("simultaneous", "u^-1", d=2)
    rates = make_rates(san, levels=[40], scheme=fam.scheme)
    E = build_level_set(fam, rates, Box.unit(2), 40)
    assert len(E.big) > 1
    for i, r in enumerate(E.big):
        for s in E.big[i + 1:]:
            assert scale_disjoint(r, s)
    assert all(Box.unit(2).contains(b) for b in E.boxes)


def test_hyperplane_points_lie_on_the_line():
    pts = hyperplane_points((1, 2), 1, (F(0), F(0)), (F(1), F(1)), F(1, 8))
    assert pts
    for x, y in pts:
        assert x + 2 * y == 1


def test_linear_forms_level_set_is_nonempty():
    fam = LinearFormsSystem(1, 2, "u", M=2)
    san = sanitize_rates("linear_forms", "u^-2", Phi="u", d=1, h=2, M=2, u_max=64)
    rates = make_rates(san, M=2, levels=[2], scheme=fam.scheme)
    E = build_level_set(fam, rates, Box.unit(2), 2)
    assert E.boxes
    assert 0 < E.measure().value < 1


# second moment bound

def test_identical_sets_give_closed_form():
    E = [Box((F(0),), (F(1, 4),))]
    for N in (2, 5, 9):
        rep = chung_erdos_bound([E] * N)
        assert rep.exact_ratios[-1] == F(1, 4) * N / (N - 1)


def test_disjoint_sets_report_infinity():
    sets = [[Box((F(k, 4),), (F(k + 1, 4),))] for k in range(4)]
    rep = chung_erdos_bound(sets)
    assert rep.ratio == math.inf
    assert "min(1, sum mu(E_n)) = 1.0" in rep.notes[0]


def test_bound_needs_two_sets():
    with pytest.raises(ValidationError):
        chung_erdos_bound([[Box.unit(1)]])


def test_rational_bound_matches_interval_oracle():
    fam = RationalSystem(1, LevelScheme("linear"))
    san = sanitize_rates("simultaneous", "u^-1", d=1)
    rates = make_rates(san, levels=range(1, 11), scheme=fam.scheme)
    sets = [build_level_set(fam, rates, Box.unit(1), n) for n in range(1, 11)]
    rep = chung_erdos_bound(sets, fam.space)
    want, m = chung_erdos_ratio(10)
    assert rep.exact_ratios[-1] == want
    assert rep.measures == m


# hit statistics

def linear_rational(d):
    fam = RationalSystem(d, LevelScheme("linear"))
    san = sanitize_rates("simultaneous", "u^-1", d=d)
    return fam, make_rates(san, levels=range(1, 100), scheme=fam.scheme)


def test_zero_is_hit_at_every_level():
    fam, rates = linear_rational(1)
    H = hit_statistics(fam, rates, range(1, 30), points=[0.0])
    assert H.hit_levels(0) == list(range(1, 30))
    assert H.seed is None


def test_golden_ratio_hits_at_fibonacci_denominators():
    fam, rates = linear_rational(1)
    x = (math.sqrt(5) - 1) / 2
    H = hit_statistics(fam, rates, range(1, 100), points=[x])
    assert H.hit_levels(0) == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_shrinking_hits_follow_digits():
    fam = ShrinkingSystem([2], [(0, 1)])
    san = sanitize_rates("shrinking", "u^-1", d=1, bases=[2])
    rates = make_rates(san, levels=range(1, 5))
    # psi(n) = 1/(n 2^n) around the points k/2^n; 0.7 is 0.05 from 3/4, beyond psi(3) = 1/24
    H = hit_statistics(fam, rates, [1, 2, 3], points=[0.26, 0.7])
    assert H.hits.tolist() == [[True, True, True], [True, True, False]]


def test_window_fraction_needs_a_tested_level():
    fam, rates = linear_rational(1)
    H = hit_statistics(fam, rates, [2, 3], samples=100, seed=0)
    with pytest.raises(ValidationError):
        H.window_fraction(10)


def test_hit_statistics_reproducible():
    fam, rates = linear_rational(2)
    a = hit_statistics(fam, rates, [4, 5, 6], samples=500, seed=11)
    b = hit_statistics(fam, rates, [4, 5, 6], samples=500, seed=11)
    np.testing.assert_array_equal(a.hits, b.hits)
