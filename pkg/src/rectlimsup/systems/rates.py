"""Rate functions u -> value: symbolic c*u^a*log(u)^b, exponentials, tables and combinations.

Every rate evaluates on floats or arrays, evaluates in log space for huge arguments, and
evaluates exactly (Fraction) where that is possible, e.g. 1/q or 2*u^-3.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exceptions import ValidationError


def _as_exact(x):
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    return None


class Rate:
    """Base class; subclasses implement ``_eval`` (float/array) and ``log`` (natural log)."""

    nonincreasing: bool | None = None

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        out = self._eval(arr)
        return float(out) if np.ndim(out) == 0 else out

    def _eval(self, u):
        return np.exp(self.log(u))

    def log(self, u):
        raise NotImplementedError

    def log_at(self, lu):
        """Natural log of the rate at u = exp(lu); stays finite where u itself overflows."""
        lu = np.asarray(lu, dtype=float)
        return self.log(np.exp(np.minimum(lu, 700.0)))

    def exact(self, u) -> Fraction | None:
        """Exact value at an integer or Fraction argument, or None when irrational."""
        return None

    def __mul__(self, other):
        return Mul(self, as_rate(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Div(self, as_rate(other))

    def __rtruediv__(self, other):
        return Div(as_rate(other), self)

    def __pow__(self, k):
        return Pow(self, k)


def as_rate(x) -> Rate:
    if isinstance(x, Rate):
        return x
    if isinstance(x, str):
        return parse_rate(x)
    return PowerLog(x, 0, 0)


@dataclass(frozen=True, eq=False)
class PowerLog(Rate):
    """c * u^a * log(u)^b."""

    c: object = 1
    a: object = 0
    b: object = 0

    def __post_init__(self):
        if not self.c > 0:
            raise ValidationError(("c", f"rate coefficient must be positive, got {self.c}"))

    @property
    def nonincreasing(self):
        return self.a < 0 or (self.a == 0 and self.b <= 0)

    def _eval(self, u):
        out = float(self.c) * u ** float(self.a)
        if self.b:
            out = out * np.log(u) ** float(self.b)
        return out

    def log(self, u):
        u = np.asarray(u, dtype=float)
        out = math.log(float(self.c)) + float(self.a) * np.log(u)
        if self.b:
            out = out + float(self.b) * np.log(np.log(u))
        return out

    def log_at(self, lu):
        lu = np.asarray(lu, dtype=float)
        out = math.log(float(self.c)) + float(self.a) * lu
        if self.b:
            out = out + float(self.b) * np.log(lu)
        return out

    def exact(self, u):
        c, u = _as_exact(self.c), _as_exact(u)
        a = _as_exact(self.a) if not isinstance(self.a, float) or self.a.is_integer() else None
        if c is None or u is None or a is None or self.b:
            return None
        if a.denominator == 1:
            return c * u ** int(a)
        root = _exact_root(u, a.denominator)
        return None if root is None else c * root ** a.numerator

    def __repr__(self):
        return f"PowerLog({self.c}*u^{self.a}*log(u)^{self.b})"


@dataclass(frozen=True, eq=False)
class Exponential(Rate):
    """c * base^(a*u)."""

    c: object = 1
    base: object = 2
    a: object = -1

    @property
    def nonincreasing(self):
        return self.a <= 0

    def log(self, u):
        return math.log(float(self.c)) + float(self.a) * np.asarray(u, dtype=float) * math.log(float(self.base))

    def log_at(self, lu):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.log(np.exp(np.asarray(lu, dtype=float)))

    def exact(self, u):
        c, b, u = _as_exact(self.c), _as_exact(self.base), _as_exact(u)
        if c is None or b is None or u is None or int(self.a) != self.a or u.denominator != 1:
            return None
        return c * b ** (int(self.a) * int(u))


@dataclass(frozen=True, eq=False)
class Table(Rate):
    """Tabulated values at u = start, start+1, ...; the last value is held afterwards."""

    values: tuple
    start: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values or any(not v > 0 for v in self.values):
            raise ValidationError(("values", "table values must be positive"))

    @property
    def nonincreasing(self):
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def _lookup(self, u):
        idx = np.clip(np.floor(np.asarray(u, dtype=float)).astype(np.int64) - self.start, 0, len(self.values) - 1)
        return np.asarray([float(v) for v in self.values])[idx]

    def _eval(self, u):
        return self._lookup(u)

    def log(self, u):
        return np.log(self._lookup(u))

    def log_at(self, lu):
        # beyond any table length only the held last value matters
        return self.log(np.exp(np.minimum(np.asarray(lu, dtype=float), 40.0)))

    def exact(self, u):
        u = _as_exact(u)
        if u is None:
            return None
        k = min(max(math.floor(u) - self.start, 0), len(self.values) - 1)
        return _as_exact(self.values[k])


@dataclass(frozen=True, eq=False)
class Floor(Rate):
    """Integer part of another rate, at least 1; used for integer-valued growth functions."""

    inner: Rate

    def _eval(self, u):
        return np.maximum(np.floor(self.inner(u) + 1e-9), 1.0)

    def log(self, u):
        return np.log(self._eval(np.asarray(u, dtype=float)))

    def log_at(self, lu):
        lu = np.asarray(lu, dtype=float)
        small = self.log(np.exp(np.minimum(lu, 40.0)))
        return np.where(lu < 40.0, small, np.maximum(self.inner.log_at(lu), 0.0))

    def exact(self, u):
        v = self.inner.exact(u)
        if v is None:
            x = float(self.inner(float(u)))
            return Fraction(max(math.floor(x + 1e-9), 1))
        return Fraction(max(math.floor(v), 1))


@dataclass(frozen=True, eq=False)
class Mul(Rate):
    f: Rate
    g: Rate

    def _eval(self, u):
        return self.f._eval(u) * self.g._eval(u)

    def log(self, u):
        return self.f.log(u) + self.g.log(u)

    def log_at(self, lu):
        return self.f.log_at(lu) + self.g.log_at(lu)

    def exact(self, u):
        a, b = self.f.exact(u), self.g.exact(u)
        return None if a is None or b is None else a * b


@dataclass(frozen=True, eq=False)
class Div(Rate):
    f: Rate
    g: Rate

    def _eval(self, u):
        return self.f._eval(u) / self.g._eval(u)

    def log(self, u):
        return self.f.log(u) - self.g.log(u)

    def log_at(self, lu):
        return self.f.log_at(lu) - self.g.log_at(lu)

    def exact(self, u):
        a, b = self.f.exact(u), self.g.exact(u)
        return None if a is None or b is None else a / b


@dataclass(frozen=True, eq=False)
class Pow(Rate):
    f: Rate
    k: object

    def _eval(self, u):
        return self.f._eval(u) ** float(self.k)

    def log(self, u):
        return float(self.k) * self.f.log(u)

    def log_at(self, lu):
        return float(self.k) * self.f.log_at(lu)

    def exact(self, u):
        a = self.f.exact(u)
        if a is None:
            return None
        k = Fraction(self.k) if not isinstance(self.k, float) or float(self.k).is_integer() else None
        if k is None:
            return None
        if k.denominator == 1:
            return a ** int(k)
        # rational power is exact only for perfect powers
        root = _exact_root(a, k.denominator)
        return None if root is None else root ** k.numerator


def _exact_root(x: Fraction, n: int) -> Fraction | None:
    def iroot(m):
        if n == 2:
            r = math.isqrt(m)
            return r if r * r == m else None
        lo, hi = 0, 1 << (m.bit_length() // n + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** n < m:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** n == m else None

    if x < 0:
        return None
    a, b = iroot(x.numerator), iroot(x.denominator)
    return None if a is None or b is None else Fraction(a, b)


@dataclass(frozen=True, eq=False)
class Max(Rate):
    rates: tuple

    def _eval(self, u):
        return np.max(np.stack([np.broadcast_to(r._eval(u), np.shape(u)) for r in self.rates]), axis=0)

    def log(self, u):
        return np.max(np.stack([np.broadcast_to(r.log(u), np.shape(u)) for r in self.rates]), axis=0)

    def log_at(self, lu):
        return np.max(np.stack([np.broadcast_to(r.log_at(lu), np.shape(lu)) for r in self.rates]), axis=0)

    def exact(self, u):
        vals = [r.exact(u) for r in self.rates]
        if all(v is not None for v in vals):
            return max(vals)
        # an exact value that clearly beats every inexact one is still the exact maximum
        floats = [float(r(float(u))) for r in self.rates]
        best = max(range(len(vals)), key=lambda k: floats[k])
        if vals[best] is None:
            return None
        if all(floats[k] < floats[best] * (1 - 1e-9) for k in range(len(vals)) if vals[k] is None):
            return max(v for v in vals if v is not None)
        return None


def max_rate(*rates) -> Rate:
    rates = tuple(as_rate(r) for r in rates)
    return rates[0] if len(rates) == 1 else Max(rates)


_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+)?"


def _parse_num(s: str):
    s = s.strip().strip("()")
    if "/" in s:
        return Fraction(s)
    if re.fullmatch(r"[-+]?\d+", s):
        return int(s)
    return float(s)


def parse_rate(text: str) -> Rate:
    """Parse "c*u^a*log(u)^b" and friends: any product of a number, u^a and log(u)^b.

    Examples: "1/u" is not accepted, write "u^-1"; "2*u^-1"; "u^-3"; "u^-1*log(u)^-2";
    "2^-u" for an exponential; "u" and "1" also work.
    """
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValidationError(("rate", "empty rate expression"))
    m = re.fullmatch(rf"(?:({_NUM})\*)?({_NUM})\^\(?(-?)u\)?", s)
    if m:
        c = _parse_num(m.group(1)) if m.group(1) else 1
        return Exponential(c, _parse_num(m.group(2)), -1 if m.group(3) else 1)
    c, a, b = 1, 0, 0
    for term in s.split("*"):
        if not term:
            raise ValidationError(("rate", f"cannot parse rate expression {text!r}"))
        if mm := re.fullmatch(r"u(?:\^\(?(" + _NUM + r")\)?)?", term):
            a += _parse_num(mm.group(1)) if mm.group(1) else 1
        elif mm := re.fullmatch(r"log\(u\)(?:\^\(?(" + _NUM + r")\)?)?", term):
            b += _parse_num(mm.group(1)) if mm.group(1) else 1
        elif re.fullmatch(_NUM, term):
            c *= _parse_num(term)
        else:
            raise ValidationError(("rate", f"cannot parse term {term!r} in rate expression {text!r}"))
    return PowerLog(c, a, b)


def check_monotone(rate: Rate, us, nonincreasing: bool = True, what: str = "rate"):
    vals = np.asarray(rate(np.asarray(us, dtype=float)), dtype=float)
    d = np.diff(vals)
    bad = np.nonzero(d > 1e-15 * np.abs(vals[:-1]) if nonincreasing else d < -1e-15 * np.abs(vals[:-1]))[0]
    if bad.size:
        k = int(bad[0])
        word = "nonincreasing" if nonincreasing else "nondecreasing"
        raise ValidationError((what, f"not {word}: value {vals[k]} at u={us[k]} then {vals[k + 1]} at u={us[k + 1]}"))


def lambda_regularity(rate: Rate, us) -> float:
    """Largest ratio rate(u_{n+1}) / rate(u_n) over the given sequence (log-space)."""
    logs = np.asarray(rate.log(np.asarray(us, dtype=float)), dtype=float)
    return float(np.exp(np.max(np.diff(logs)))) if len(logs) > 1 else float("nan")


def generalized_inverse(rate: Rate, m, start: int = 1) -> int:
    """min{u >= start integer : rate(u) >= m} for a nondecreasing rate."""
    def ge(u):
        v = rate.exact(u)
        return (v if v is not None else rate(u)) >= m

    if ge(start):
        return start
    lo, hi = start, start + 1
    while not ge(hi):
        lo, hi = hi, 2 * hi
        if hi > 2 ** 62:
            raise ValidationError(("rate", f"rate never reaches {m}"))
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ge(mid):
            hi = mid
        else:
            lo = mid
    return hi
