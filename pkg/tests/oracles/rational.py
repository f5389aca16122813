"""Brute-force references for the one-dimensional rational system.

Every p/q with l <= q <= u is generated directly, without Farey structure.
"""
from fractions import Fraction

from .intervals import clip, intersect, length


def neighborhood_ratio(a, b, lo_q, hi_q, r):
    """|[a,b] & union of (p/q - r, p/q + r)| / (b - a), exactly."""
    a, b, r = Fraction(a), Fraction(b), Fraction(r)
    ivs = []
    for q in range(lo_q, hi_q + 1):
        for p in range(q + 1):
            c = Fraction(p, q)
            if c + r > a and c - r < b:
                ivs.append((c - r, c + r))
    return length(clip(ivs, a, b)) / (b - a)


def _tdist(x, y):
    g = abs(x - y) % 1
    return min(g, 1 - g)


def chung_erdos_level(n):
    """E_n for the linear scheme with phi(q) = 1/q on the full circle.

    Candidates p/n in the half ball [1/4, 3/4], greedy in increasing order, kept when
    the torus distance to every kept center is at least 10 n^-2; E_n is the union of
    (c - n^-2, c + n^-2) over kept centers.
    """
    rho = Fraction(1, n * n)
    kept = []
    for p in range(n + 1):
        c = Fraction(p, n)
        if Fraction(1, 4) <= c <= Fraction(3, 4) and all(_tdist(c, k) >= 10 * rho for k in kept):
            kept.append(c)
    return clip([(c - rho, c + rho) for c in kept], 0, 1)


def chung_erdos_ratio(N):
    E = [chung_erdos_level(n) for n in range(1, N + 1)]
    m = [length(e) for e in E]
    num = sum(m) ** 2
    den = sum(length(intersect(E[i], E[j])) for i in range(N) for j in range(N) if i != j)
    return (num / den if den else None), m


def window_measure_1d(N):
    """|union over N <= q <= 2N, 0 <= p <= q of (p/q - q^-2, p/q + q^-2) & [0,1]|."""
    ivs = []
    for q in range(N, 2 * N + 1):
        r = Fraction(1, q * q)
        ivs.extend((Fraction(p, q) - r, Fraction(p, q) + r) for p in range(q + 1))
    return length(clip(ivs, 0, 1))
