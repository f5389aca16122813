"""Convergent versus divergent: what the series say and what random points do.

For phi(q) = 1/q the simultaneous series sum_q phi(q)^d is the harmonic series when d = 1
and sum q^-2 when d = 2.  Accordingly a typical point of [0,1] keeps being approximated
within 1/q^2 in every window of denominators [N, 2N], while in the plane the hit rate
dies off.

Run: python3 demos/dichotomy_trend.py
"""
from rectlimsup.dichotomy import application_series, hit_statistics
from rectlimsup.systems import LevelScheme, RationalSystem, make_rates, sanitize_rates

for d in (1, 2):
    rep = application_series("simultaneous", "u^-1", Q=10 ** 5, d=d)
    print(f"d={d}: partial sum up to 1e5 = {rep.total:.5f}, label {rep.label} (slope {rep.slope:.3f})")

windows = (4, 8, 16, 32)
print(f"\nfraction of 10^4 random points hit in [N, 2N]")
print("   " + "".join(f"{'N=' + str(N):>9}" for N in windows))
for d in (1, 2):
    fam = RationalSystem(d, LevelScheme("linear"))
    levels = sorted({n for N in windows for n in range(N, 2 * N + 1)})
    rates = make_rates(sanitize_rates("simultaneous", "u^-1", d=d), levels=levels, scheme=fam.scheme)
    H = hit_statistics(fam, rates, levels, samples=10 ** 4, seed=0)
    print(f"d={d}" + "".join(f"{H.window_fraction(N):9.4f}" for N in windows))

# one point in detail: the golden ratio is hit exactly at Fibonacci denominators
fam = RationalSystem(1, LevelScheme("linear"))
rates = make_rates(sanitize_rates("simultaneous", "u^-1", d=1), levels=range(1, 200), scheme=fam.scheme)
H = hit_statistics(fam, rates, range(1, 200), points=[(5 ** 0.5 - 1) / 2])
print("\ngolden ratio hit at q =", H.hit_levels(0))
