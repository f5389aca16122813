"""Shrinking targets on the middle-thirds Cantor set.

The level-n targets are the preimages of 0 under x -> 3x mod 1 that stay in the Cantor
set, i.e. the points with n ternary digits from {0, 2}.  Balls of radius 3^-n around
them tile the Cantor set, so the covering ratio is exactly 1 at every level.  Shrinking
the radius to psi(n) = 3^-n / n gives sets E_n whose measures sum like
sum n^(-log 2/log 3), a divergent series.

Run: python3 demos/shrinking_targets.py
"""
from rectlimsup.boxgeom import Box
from rectlimsup.dichotomy import application_series, build_level_set, chung_erdos_bound
from rectlimsup.systems import ShrinkingSystem, make_rates, sanitize_rates
from rectlimsup.ubiquity import ubiquity_ratio

fam = ShrinkingSystem([3], [(0, 2)])
san = sanitize_rates("shrinking", "u^-1", d=1, bases=[3])
rates = make_rates(san, levels=range(1, 9))
delta = fam.space.factors[0].delta
print(f"Cantor dimension {delta:.4f}")

for n in range(1, 7):
    est = ubiquity_ratio(fam, rates, Box.unit(1), n)
    print(f"n={n}: {2 ** n:3d} targets, covered fraction {est.exact}")

rep = application_series("shrinking", "u^-1", Q=10 ** 5, d=1, deltas=[delta])
print(f"\nsum of psi(n)^delta to 1e5: {rep.total:.3f} ({rep.label})")

sets = [build_level_set(fam, rates, Box.unit(1), n) for n in range(1, 9)]
ce = chung_erdos_bound(sets, fam.space)
for N, s, r in ce.rows():
    print(f"N={N}: sum mu(E_n) = {s:.4f}, second-moment ratio = {r:.4f}")
print(*ce.notes)
