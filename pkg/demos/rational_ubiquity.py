"""How much of a ball do the rho-neighborhoods of rational points cover?

Level n of the one-dimensional rational system holds every p/q with 16^(n-1) <= q <= 16^n.
Around each we put an interval of radius rho(16^n) = 16^(-2n), and ask which fraction of
a small dyadic ball the union covers.  Once n is large enough for the ball, the answer
settles near 0.567 on every ball.  That uniform lower bound is what ubiquity asks for.

Run: python3 demos/rational_ubiquity.py
"""
import time

from rectlimsup.systems import LevelScheme, RationalSystem, make_rates, sanitize_rates
from rectlimsup.ubiquity import default_balls, verify_ubiquity

fam = RationalSystem(1, LevelScheme("geometric", 16))
san = sanitize_rates("simultaneous", "u^-1", d=1)
rates = make_rates(san, M=16, levels=range(2, 6), scheme=fam.scheme)
print("notes:", fam.notes)

balls = default_balls(fam.space, count=8, level=8, seed=0)
t0 = time.perf_counter()
rep = verify_ubiquity(fam, rates, balls, range(2, 6), seed=0)
print(f"{len(rep.records)} ratios in {time.perf_counter() - t0:.1f} s\n")

print(f"{'ball':>22} " + " ".join(f"{'n=' + str(n):>9}" for n in range(2, 6)))
for i, b in enumerate(balls):
    r = rep.ratios(i)
    print(f"[{str(b.lo[0]):>9}, {str(b.hi[0]):>9}] " + " ".join(f"{r[n]:9.4f}" for n in range(2, 6)))

print("\nmethods used:", sorted(rep.methods))
print(f"smallest ratio: {rep.min_ratio:.4f}")
# small n on a small ball is the hard case: [1/2, 129/256] sits in the wide gap to the
# right of 1/2 (its nearest neighbors have denominators near 256), so at n=2 only 0.42
# of it is covered; from n=3 on every ball is back near 0.567
