import random
from fractions import Fraction as F

import pytest

from rectlimsup.boxgeom import Box, Rect, cover_residual, five_r_cover, scale_disjoint, union_measure
from rectlimsup.exceptions import ValidationError


def test_single_rectangle_is_kept():
    r = Rect((F(1, 2),), (F(1, 10),))
    assert five_r_cover([r]) == [r]


def test_duplicates_collapse_to_one():
    r = Rect((F(1, 3), F(1, 3)), (F(1, 50), F(1, 50)))
    assert five_r_cover([r, r]) == [r]


def test_mixed_sizes_rejected():
    with pytest.raises(ValidationError):
        five_r_cover([Rect((F(0),), (F(1, 10),)), Rect((F(1, 2),), (F(1, 20),))])


def test_selection_is_greedy_in_lexicographic_order():
    h = F(1, 100)
    rects = [Rect((F(k, 20),), (h,)) for k in range(20)]
    kept = five_r_cover(rects, torus=False)
    # conflict distance 2 * 5 * h = 1/10 = two grid steps
    assert [r.center[0] for r in kept] == [F(k, 10) for k in range(10)]


def test_torus_wrap_counts_as_close():
    h = F(1, 100)
    a, b = Rect((F(0),), (h,)), Rect((F(99, 100),), (h,))
    assert not scale_disjoint(a, b, 5, True)
    assert scale_disjoint(a, b, 5, False) == (F(99, 100) >= F(1, 10))


def test_jittered_family_disjoint_and_covered():
    rng = random.Random(0)
    h = F(1, 64)
    rects = [Rect((F(rng.randint(0, 1000), 1000), F(rng.randint(0, 1000), 1000)), (h, h)) for _ in range(100)]
    kept = five_r_cover(rects)
    for i, r in enumerate(kept):
        for s in kept[i + 1:]:
            assert scale_disjoint(r, s)
    assert cover_residual(rects, kept).exact == 0


def test_residual_positive_when_enlargement_too_small():
    h = F(1, 100)
    rects = [Rect((F(k, 20),), (h,)) for k in range(20)]
    kept = five_r_cover(rects, torus=False)
    # kept centers are 1/10 apart; a factor-1 enlargement cannot cover the odd ones
    assert cover_residual(rects, kept, torus=False, factor=1).exact > 0


def test_per_axis_torus_flags():
    h = F(1, 40)
    a = Rect((F(0), F(1, 2)), (h, h))
    b = Rect((F(39, 40), F(1, 2)), (h, h))
    assert len(five_r_cover([a, b], torus=(True, False))) == 1
    assert len(five_r_cover([a, b], torus=(False, False))) == 2
