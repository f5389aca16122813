"""Second-moment lower bound for the measure of a limsup set.

For sets E_1..E_N the ratio (sum mu(E_n))^2 / sum over ordered pairs m != n of
mu(E_m & E_n) bounds mu(limsup E_n) from below in the limit.  The sum runs over
ordered pairs, so identical sets E give mu(E) N / (N - 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..boxgeom.spaces import AmbientSpace
from ..boxgeom.sweep import intersection_measure, union_measure
from ..exceptions import ValidationError


@dataclass
class ChungErdosReport:
    measures: list
    matrix: np.ndarray
    ratios: list
    exact_ratios: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.ratios[-1]

    @property
    def sum_measures(self) -> float:
        return float(sum(self.measures))

    def rows(self):
        """(N, sum of mu(E_n) for n <= N, ratio at N) for N = 2.. ."""
        return [(k + 2, float(sum(self.measures[:k + 2])), r) for k, r in enumerate(self.ratios)]


def _value(est):
    return est.exact if est.exact is not None else est.value


def _boxes(E):
    return E.boxes if hasattr(E, "boxes") else list(E)


def chung_erdos_bound(level_sets, space: AmbientSpace | None = None) -> ChungErdosReport:
    """Ratios for every prefix N = 2..len(level_sets); +inf when all pairwise intersections are null.

    ``level_sets`` holds LevelSets or plain lists of boxes.  Values are exact Fractions
    when the boxes have rational coordinates.
    """
    sets = [_boxes(E) for E in level_sets]
    if len(sets) < 2:
        raise ValidationError(("level_sets", f"need at least two sets, got {len(sets)}"))
    N = len(sets)
    m = [_value(union_measure(E, space)) for E in sets]
    M = [[None] * N for _ in range(N)]
    for i in range(N):
        M[i][i] = m[i]
        for j in range(i + 1, N):
            if not sets[i] or not sets[j]:
                v = 0
            else:
                v = _value(intersection_measure(sets[i], sets[j], space))
            M[i][j] = M[j][i] = v
    exact = all(isinstance(x, (int, Fraction)) for row in M for x in row)
    ratios, exact_ratios = [], []
    total, off = 0, 0
    for k in range(N):
        total += m[k]
        off += 2 * sum(M[k][j] for j in range(k))
        if k == 0:
            continue
        if off == 0:
            ratios.append(math.inf)
            exact_ratios.append(None)
        else:
            r = Fraction(total) ** 2 / Fraction(off) if exact else total ** 2 / off
            ratios.append(float(r))
            exact_ratios.append(r if exact else None)
    notes = []
    if off == 0:
        notes.append(f"pairwise disjoint sets: ratio is +inf; min(1, sum mu(E_n)) = {min(1.0, float(total))}")
    matrix = np.array([[float(x) for x in row] for row in M])
    return ChungErdosReport([x for x in m], matrix, ratios, exact_ratios, notes)
