"""Self-similar Cantor measure of intervals.

The measure lives on the attractor of x -> (x + k)/b, k in the digit set, and gives
each level-n cylinder mass (#digits)^-n.  Interval measures are computed by descending
through the cylinders that straddle an endpoint; whatever is still straddling at the
depth limit goes into the error bound.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..exceptions import ValidationError
from .spaces import CantorSpec


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@lru_cache(maxsize=65536)
def _measure(lo: Fraction, hi: Fraction, base: int, digits: tuple, depth: int):
    ndig = len(digits)
    # a cylinder [a, a + b^-k] carries its mass on the hull of the scaled attractor
    lo_off = Fraction(digits[0], base - 1)
    hi_off = Fraction(digits[-1], base - 1)
    value = Fraction(0)
    error = Fraction(0)
    stack = [(Fraction(0), 0)]
    while stack:
        a, k = stack.pop()
        width = Fraction(1, base ** k)
        mass = Fraction(1, ndig ** k)
        s = a + lo_off * width
        t = a + hi_off * width
        if t <= lo or s >= hi:
            continue
        if lo <= s and t <= hi:
            value += mass
            continue
        if k >= depth:
            error += mass
            continue
        child = width / base
        for dgt in digits:
            stack.append((a + dgt * child, k + 1))
    return value, error


def cantor_box_measure(interval, spec: CantorSpec, depth: int = 48, exact: bool = False):
    """Measure of the closed interval ``(lo, hi)`` under the Cantor measure of ``spec``.

    Returns ``(value, error)`` with value <= true measure <= value + error.  With
    ``exact=True`` both are Fractions, otherwise floats.
    """
    lo, hi = interval
    problems = []
    if not 0 <= lo <= hi <= 1:
        problems.append(("interval", f"need 0 <= lo <= hi <= 1, got ({lo}, {hi})"))
    if int(depth) != depth or depth < 1:
        problems.append(("depth", f"must be a positive integer, got {depth}"))
    if problems:
        raise ValidationError(problems)
    value, error = _measure(_frac(lo), _frac(hi), spec.base, spec.digits, int(depth))
    if exact:
        return value, error
    return float(value), float(error)


def cantor_cylinder(word, spec: CantorSpec):
    """Left endpoint and width of the cylinder coded by ``word``."""
    a = Fraction(0)
    for k, dgt in enumerate(word, start=1):
        a += Fraction(dgt, spec.base ** k)
    return a, Fraction(1, spec.base ** len(word))


def sample_cantor(rng: np.random.Generator, spec: CantorSpec, size: int) -> np.ndarray:
    """Draw points from the Cantor measure by picking base-b digits uniformly from the digit set."""
    ndigits = int(np.ceil(53 / np.log2(spec.base))) + 1
    digits = np.asarray(spec.digits, dtype=float)
    picks = digits[rng.integers(0, len(digits), size=(size, ndigits))]
    scales = float(spec.base) ** -np.arange(1, ndigits + 1)
    return picks @ scales
