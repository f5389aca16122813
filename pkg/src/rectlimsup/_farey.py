"""Farey-sequence kernels for the one-dimensional rational system.

When u_n / ell_n >= 2 every reduced fraction with denominator <= u_n has a multiple of
its denominator in [ell_n, u_n], so the centers at level n are exactly the Farey
sequence F_U of order U = u_n.  With a common radius r the union of the intervals
meets each Farey gap [x, y] in [x, x + r] U [y - r, y] and nothing else: an interval
centered left of x reaches into the gap no further than x + r, and symmetrically on
the right.  Walking the gaps therefore gives the union measure exactly.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def farey_left_neighbor(num, den, U):
    """Consecutive terms a/b <= num/den < c/d of F_U (num/den in [0, 1))."""
    a, b, c, d = 0, 1, 1, 1
    while True:
        # move the right end towards the target as far as possible at once
        # mediants (a + k c)/(b + k d) stay right of num/den while (a + k c) den > num (b + k d)
        if (a + c) * den <= num * (b + d):
            # mediant is on the left: advance left end k times along c/d
            # largest k with (a + k c) den <= num (b + k d) and b + k d <= U
            lhs = c * den - num * d
            if lhs <= 0:
                k = (U - b) // d
            else:
                k = (num * b - a * den) // lhs
                k = min(k, (U - b) // d)
            if k < 1:
                break
            a, b = a + k * c, b + k * d
        else:
            lhs = num * b - a * den
            if lhs <= 0:
                k = (U - d) // b
            else:
                k = (c * den - num * d - 1) // lhs
                k = min(k, (U - d) // b)
            if k < 1:
                break
            c, d = c + k * a, d + k * b
        if b + d > U:
            break
    return a, b, c, d


@njit(cache=True)
def farey_cover(lo_num, lo_den, hi_num, hi_den, U, r):
    """Measure of [lo, hi] covered by intervals of radius r around the terms of F_U.

    lo and hi are given as integer fractions; returns (covered, number of gaps walked).
    """
    lo = lo_num / lo_den
    hi = hi_num / hi_den
    if lo_num * hi_den >= hi_num * lo_den:
        return 0.0, 0
    if lo_num >= lo_den:
        return 0.0, 0
    a, b, c, d = farey_left_neighbor(lo_num, lo_den, U)
    total = 0.0
    steps = 0
    while True:
        x = a / b
        y = c / d
        # covered part of the gap [x, y]: [x, x + r] and [y - r, y]
        if y - x <= 2.0 * r:
            s0, s1 = max(x, lo), min(y, hi)
            if s1 > s0:
                total += s1 - s0
        else:
            s0, s1 = max(x, lo), min(x + r, hi)
            if s1 > s0:
                total += s1 - s0
            s0, s1 = max(y - r, lo), min(y, hi)
            if s1 > s0:
                total += s1 - s0
        steps += 1
        if c * hi_den >= hi_num * d or (c == 1 and d == 1):
            break
        k = (U + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return total, steps


def farey_cover_py(lo, hi, U, r):
    """Plain-Python reference of the same walk (slow, for tests)."""
    return farey_cover.py_func(lo.numerator, lo.denominator, hi.numerator, hi.denominator, U, r)


@njit(cache=True)
def _neighbors_float(x, U):
    """F_U neighbors a/b <= x < c/d of a float x in [0, 1), by batched Stern-Brocot descent."""
    a, b, c, d = 0, 1, 1, 1
    while b + d <= U:
        if (a + c) <= x * (b + d):
            # advance the left end: largest k with a + k c <= x (b + k d), b + k d <= U
            den = c - x * d
            k = (U - b) // d
            if den > 0:
                kk = int((x * b - a) / den)
                if kk < k:
                    k = kk
            while k > 1 and a + k * c > x * (b + k * d):
                k -= 1
            if k < 1:
                k = 1
            a, b = a + k * c, b + k * d
        else:
            den = x * b - a
            k = (U - d) // b
            if den > 0:
                kk = int((c - x * d) / den)
                if kk < k:
                    k = kk
            while k > 1 and c + k * a <= x * (d + k * b):
                k -= 1
            if k < 1:
                k = 1
            c, d = c + k * a, d + k * b
    return a, b, c, d


@njit(cache=True)
def farey_hits(xs, U, r):
    """For each x, whether it lies within r of some term of F_U (circle distance)."""
    out = np.zeros(xs.shape[0], dtype=np.bool_)
    for i in range(xs.shape[0]):
        x = xs[i] - np.floor(xs[i])
        a, b, c, d = _neighbors_float(x, U)
        out[i] = (x - a / b < r) or (c / d - x < r)
    return out
