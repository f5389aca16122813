"""Factor spaces and their product.

A factor is either Lebesgue measure on the unit cube of some dimension or the
natural self-similar measure on a digit-restricted Cantor set in [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..exceptions import ValidationError


@dataclass(frozen=True)
class CantorSpec:
    """Cantor set of points in [0, 1] whose base-``base`` digits all lie in ``digits``."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(k) for k in self.digits))
        problems = []
        if int(self.base) != self.base or self.base < 2:
            problems.append(("base", f"must be an integer >= 2, got {self.base}"))
        if len(set(self.digits)) != len(self.digits):
            problems.append(("digits", f"digit set {list(self.digits)} has repeated digits"))
        if len(set(self.digits)) < 2:
            problems.append(("digits", f"digit set {list(self.digits)} needs at least two digits"))
        bad = [k for k in self.digits if not 0 <= k < self.base]
        if bad:
            problems.append(("digits", f"digit set {list(self.digits)} has digits {bad} outside 0..{self.base - 1}"))
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "digits", tuple(sorted(self.digits)))

    @property
    def delta(self) -> float:
        return math.log(len(self.digits)) / math.log(self.base)

    @property
    def full(self) -> bool:
        """True when every digit is allowed, i.e. the measure is Lebesgue."""
        return len(self.digits) == self.base


@dataclass(frozen=True)
class FactorSpace:
    """One factor X_i of the ambient product.

    ``cantor`` is None for Lebesgue measure on [0,1]^dim.  A CantorSpec with the
    full digit set still yields Lebesgue measure but remembers its base, which the
    shrinking-target construction needs.
    """

    dim: int = 1
    kappa: float = 0.0
    cantor: CantorSpec | None = None
    torus: bool = True

    def __post_init__(self):
        problems = []
        if int(self.dim) != self.dim or self.dim < 1:
            problems.append(("dim", f"must be a positive integer, got {self.dim}"))
        if not 0 <= self.kappa < 1:
            problems.append(("kappa", f"must lie in [0, 1), got {self.kappa}"))
        if self.cantor is not None and self.dim != 1:
            problems.append(("dim", "Cantor factors are one-dimensional"))
        if problems:
            raise ValidationError(problems)

    @property
    def delta(self) -> float:
        if self.cantor is None:
            return float(self.dim)
        return self.cantor.delta

    @property
    def is_lebesgue(self) -> bool:
        return self.cantor is None or self.cantor.full


@dataclass(frozen=True)
class AmbientSpace:
    factors: tuple[FactorSpace, ...]
    _axis_factor: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValidationError(("factors", "need at least one factor"))
        owner = []
        for i, fac in enumerate(self.factors):
            owner.extend([i] * fac.dim)
        object.__setattr__(self, "_axis_factor", tuple(owner))

    @classmethod
    def lebesgue(cls, dim: int, torus: bool = True) -> "AmbientSpace":
        return cls(tuple(FactorSpace(1, torus=torus) for _ in range(dim)))

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return len(self._axis_factor)

    def axes(self, i: int) -> range:
        """Coordinate axes occupied by factor ``i``."""
        start = sum(f.dim for f in self.factors[:i])
        return range(start, start + self.factors[i].dim)

    @property
    def axis_factor(self) -> tuple[int, ...]:
        return self._axis_factor

    @property
    def axis_torus(self) -> tuple[bool, ...]:
        return tuple(self.factors[i].torus for i in self._axis_factor)

    @property
    def axis_cantor(self) -> tuple[CantorSpec | None, ...]:
        """Per axis, the CantorSpec whose measure applies there, or None for Lebesgue."""
        out = []
        for i in self._axis_factor:
            fac = self.factors[i]
            out.append(None if fac.is_lebesgue else fac.cantor)
        return tuple(out)

    @property
    def is_lebesgue(self) -> bool:
        return all(f.is_lebesgue for f in self.factors)
