"""The three concrete resonant families: rational points, linear forms, shrinking targets.

An item carries its index alpha, its weight beta and per-factor geometry.  Levels
follow a LevelScheme; level n collects the items with ell_n <= beta <= u_n.
Enumeration is lexicographic in alpha.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..boxgeom.box import Box
from ..boxgeom.neighborhood import Affine, CantorPreimage, Point, Slab, neighborhood
from ..boxgeom.spaces import AmbientSpace, CantorSpec, FactorSpace
from ..exceptions import SizeError, ValidationError
from .rates import Rate, as_rate, generalized_inverse

ENUM_CAP = 10 ** 7


@dataclass(frozen=True)
class ResonantItem:
    alpha: tuple
    beta: object
    geometry: tuple


@dataclass(frozen=True)
class LevelScheme:
    """Level sequence: "geometric" (ell=M^(n-1), u=M^n), "linear" (ell=u=n) or
    "linear_forms" (u=M^n, ell set by the family's q-window)."""

    kind: str = "geometric"
    M: int = 16

    def __post_init__(self):
        if self.kind not in ("geometric", "linear", "linear_forms"):
            raise ValidationError(("kind", f"unknown level scheme {self.kind!r}"))
        if int(self.M) != self.M or self.M < 2:
            raise ValidationError(("M", f"must be an integer >= 2, got {self.M}"))

    def u(self, n: int) -> int:
        return n if self.kind == "linear" else self.M ** n

    def log_u(self, n):
        """log u_n, computed without forming u_n (works for arrays of levels)."""
        n = np.asarray(n, dtype=float)
        return np.log(n) if self.kind == "linear" else n * math.log(self.M)

    def ell(self, n: int) -> int:
        if self.kind == "linear":
            return n
        return self.M ** (n - 1)


def _check_level(n):
    if int(n) != n or n < 1:
        raise ValidationError(("n", f"level must be a positive integer, got {n}"))
    return int(n)


class ResonantFamily:
    kind = ""
    space: AmbientSpace
    scheme: LevelScheme

    def u(self, n):
        return self.scheme.u(n)

    def ell(self, n):
        return self.scheme.ell(n)

    def count_level(self, n) -> int:
        raise NotImplementedError

    def iter_level(self, n):
        raise NotImplementedError

    def enumerate_level(self, n, cap: int = ENUM_CAP) -> list[ResonantItem]:
        n = _check_level(n)
        count = self.count_level(n)
        if count > cap:
            raise SizeError(count, cap, level=n, what=f"{self.kind} level")
        return list(self.iter_level(n))

    def beta(self, item) -> object:
        alpha = item.alpha if isinstance(item, ResonantItem) else item
        return self._beta(alpha)

    def factor_pieces(self, item: ResonantItem, radii) -> list:
        """Per factor, the neighborhood of the item's geometry (list of boxes, or a Slab)."""
        return [neighborhood(g, r, f) for g, r, f in zip(item.geometry, radii, self.space.factors)]


def item_boxes(pieces) -> list[Box] | None:
    """Product boxes of per-factor pieces, or None when some factor is a slanted slab."""
    parts = []
    for p in pieces:
        if isinstance(p, Slab):
            if not p.axis_aligned:
                return None
            p = p.to_boxes()
        parts.append(p)
    out = []
    for combo in itertools.product(*parts):
        out.append(Box(tuple(x for b in combo for x in b.lo), tuple(x for b in combo for x in b.hi)))
    return out


class RationalSystem(ResonantFamily):
    """Rational points (p_1/q, ..., p_d/q) on the d-torus, weight q."""

    kind = "rational"

    def __init__(self, d: int = 1, scheme: LevelScheme | None = None):
        if int(d) != d or d < 1:
            raise ValidationError(("d", f"must be a positive integer, got {d}"))
        self.d = int(d)
        self.scheme = scheme or LevelScheme("geometric", 16)
        self.notes = []
        if self.scheme.kind == "geometric" and self.scheme.M < 2 ** (2 * self.d + 3):
            self.notes.append(f"M={self.scheme.M} is below 2^(2d+3)={2 ** (2 * self.d + 3)}")
        self.space = AmbientSpace(tuple(FactorSpace(1, kappa=0.0, torus=True) for _ in range(self.d)))

    def count_level(self, n):
        n = _check_level(n)
        q = np.arange(self.ell(n), self.u(n) + 1, dtype=object)
        return int(sum((q + 1) ** self.d)) if len(q) else 0

    def _item(self, q, ps):
        return ResonantItem((q,) + tuple(ps), q, tuple(Point((Fraction(p, q),)) for p in ps))

    def iter_level(self, n):
        for q in range(self.ell(n), self.u(n) + 1):
            for ps in itertools.product(range(q + 1), repeat=self.d):
                yield self._item(q, ps)

    def _beta(self, alpha):
        return alpha[0]

    def iter_near(self, n, box: Box, radii):
        """Items at level n whose (wrapped) radii-neighborhoods can meet ``box``."""
        for q in range(self.ell(n), self.u(n) + 1):
            ranges = []
            for i in range(self.d):
                r = radii[i]
                lo, hi = box.lo[i] - r, box.hi[i] + r
                ps = set()
                for shift in (-1, 0, 1):
                    a = max(0, math.ceil((lo + shift) * q))
                    b = min(q, math.floor((hi + shift) * q))
                    ps.update(range(a, b + 1))
                ranges.append(sorted(ps))
            for ps in itertools.product(*ranges):
                yield self._item(q, ps)


class LinearFormsSystem(ResonantFamily):
    """Hyperplanes {A_i : A_i . q = p_i} in [0,1]^h for each of the d rows of a d x h matrix.

    Level n is the window Phi_k(M^n)/M <= |q_k|^+ <= Phi_k(M^n) for all k (q != 0), with
    |p_i| <= h * max_k |q_k| (``p_range="per_q"``) or h * max_k Phi_k(M^n) (``"window"``).
    """

    kind = "linear_forms"

    def __init__(self, d: int, h: int, Phi, M: int = 2, p_range: str = "per_q"):
        problems = []
        if int(d) != d or d < 1:
            problems.append(("d", f"must be a positive integer, got {d}"))
        if int(h) != h or h < 1:
            problems.append(("h", f"must be a positive integer, got {h}"))
        Phi = [as_rate(f) for f in (Phi if isinstance(Phi, (list, tuple)) else [Phi] * int(h))]
        if len(Phi) != h:
            problems.append(("Phi", f"need {h} growth functions, got {len(Phi)}"))
        if p_range not in ("per_q", "window"):
            problems.append(("p_range", f"must be 'per_q' or 'window', got {p_range!r}"))
        if problems:
            raise ValidationError(problems)
        self.d, self.h, self.Phi, self.p_range = int(d), int(h), Phi, p_range
        self.scheme = LevelScheme("linear_forms", M)
        kappa = (self.h - 1) / self.h
        self.space = AmbientSpace(tuple(FactorSpace(self.h, kappa=kappa, torus=False) for _ in range(self.d)))

    def phi_value(self, k, u) -> int:
        v = self.Phi[k].exact(u)
        v = v if v is not None else self.Phi[k](u)
        return int(math.floor(v))

    def window(self, n):
        """Per k, the inclusive range of |q_k|^+ at level n."""
        u = self.u(n)
        out = []
        for k in range(self.h):
            top = self.phi_value(k, u)
            low = Fraction(top, self.scheme.M)
            out.append((max(1, math.ceil(low)), top))
        return out

    def _q_values(self, lo, hi):
        vals = [q for q in range(-hi, hi + 1) if lo <= max(1, abs(q)) <= hi]
        return vals

    def ell(self, n):
        return max(generalized_inverse(self.Phi[k], lo) for k, (lo, _) in enumerate(self.window(n)))

    def _p_bound(self, q, win):
        if self.p_range == "window":
            return self.h * max(hi for _, hi in win)
        return self.h * max(abs(x) for x in q)

    def count_level(self, n):
        n = _check_level(n)
        win = self.window(n)
        if self.p_range == "window":
            nq = math.prod(len(self._q_values(lo, hi)) for lo, hi in win)
            has_zero = all(lo <= 1 for lo, _ in win)
            P = self._p_bound(None, win)
            return (nq - int(has_zero)) * (2 * P + 1) ** self.d
        top = max(hi for _, hi in win)
        total = 0
        prev = None
        for m in range(0, top + 1):
            cur = math.prod(sum(1 for q in self._q_values(lo, hi) if abs(q) <= m) for lo, hi in win)
            if m > 0:
                total += (cur - prev) * (2 * self.h * m + 1) ** self.d
            prev = cur
        return total

    def iter_q(self, n):
        win = self.window(n)
        for q in itertools.product(*(self._q_values(lo, hi) for lo, hi in win)):
            if any(q):
                yield q

    def iter_level(self, n):
        win = self.window(n)
        for q in self.iter_q(n):
            P = self._p_bound(q, win)
            b = self._beta(q)
            for ps in itertools.product(range(-P, P + 1), repeat=self.d):
                yield ResonantItem(q + ps, b, tuple(Affine(q, p) for p in ps))

    def _beta(self, alpha):
        q = alpha[: self.h]
        return max(generalized_inverse(self.Phi[k], max(1, abs(q[k]))) for k in range(self.h))

    def iter_near(self, n, box: Box, radii):
        """Items whose slabs can meet ``box`` (the matrix box, rows concatenated)."""
        win = self.window(n)
        for q in self.iter_q(n):
            b = self._beta(q)
            P = self._p_bound(q, win)
            ranges = []
            qa = np.asarray(q, dtype=float)
            for i in range(self.d):
                lo = np.asarray([float(x) for x in box.lo[i * self.h:(i + 1) * self.h]])
                hi = np.asarray([float(x) for x in box.hi[i * self.h:(i + 1) * self.h]])
                vmin = float(np.sum(np.where(qa > 0, qa * lo, qa * hi)))
                vmax = float(np.sum(np.where(qa > 0, qa * hi, qa * lo)))
                tol = float(radii[i]) * float(np.abs(qa).sum())
                ranges.append(range(max(-P, math.floor(vmin - tol)), min(P, math.ceil(vmax + tol)) + 1))
            for ps in itertools.product(*ranges):
                yield ResonantItem(q + ps, b, tuple(Affine(q, p) for p in ps))


class ShrinkingSystem(ResonantFamily):
    """Preimages of a target x_o under x -> b_i x mod 1 restricted to Cantor sets.

    Level n items are tuples of digit words w_i in Lambda_i^n, with centers
    x_i(w_i) = sum_j w_ij / b_i^j + x_o,i / b_i^n and weight n.
    """

    kind = "shrinking"

    def __init__(self, bases, digit_sets, x_o=None):
        bases = list(bases)
        digit_sets = list(digit_sets)
        if len(bases) != len(digit_sets) or not bases:
            raise ValidationError(("digit_sets", "need one digit set per base"))
        specs = []
        problems = []
        for i, (b, lam) in enumerate(zip(bases, digit_sets)):
            try:
                specs.append(CantorSpec(b, tuple(lam)))
            except ValidationError as e:
                problems.extend((f"factor {i} {f}", m) for f, m in e.problems)
        x_o = [0] * len(bases) if x_o is None else list(x_o)
        if len(x_o) != len(bases):
            problems.append(("x_o", f"need {len(bases)} targets, got {len(x_o)}"))
        elif any(not 0 <= x <= 1 for x in x_o):
            problems.append(("x_o", f"targets must lie in [0, 1], got {x_o}"))
        if problems:
            raise ValidationError(problems)
        self.specs = specs
        self.x_o = [Fraction(x) if isinstance(x, (int, Fraction)) else x for x in x_o]
        self.d = len(specs)
        self.scheme = LevelScheme("linear")
        self.space = AmbientSpace(tuple(FactorSpace(1, kappa=0.0, cantor=s, torus=False) for s in specs))

    def count_level(self, n):
        n = _check_level(n)
        return math.prod(len(s.digits) ** n for s in self.specs)

    def center(self, i, word):
        b = self.specs[i].base
        x = Fraction(0)
        for j, e in enumerate(word, start=1):
            x += Fraction(e, b ** j)
        return x + self.x_o[i] / Fraction(b) ** len(word)

    def iter_level(self, n):
        per = [list(itertools.product(s.digits, repeat=n)) for s in self.specs]
        for words in itertools.product(*per):
            geo = tuple(CantorPreimage(w, self.center(i, w)) for i, w in enumerate(words))
            yield ResonantItem(tuple(words), n, geo)

    def _beta(self, alpha):
        return len(alpha[0])

    def iter_near(self, n, box: Box, radii):
        per = []
        for i, s in enumerate(self.specs):
            words = []
            lo, hi = box.lo[i] - radii[i], box.hi[i] + radii[i]
            for w in itertools.product(s.digits, repeat=n):
                c = self.center(i, w)
                if lo <= c <= hi:
                    words.append(w)
            per.append(words)
        for words in itertools.product(*per):
            geo = tuple(CantorPreimage(w, self.center(i, w)) for i, w in enumerate(words))
            yield ResonantItem(tuple(words), n, geo)
