"""Rate sanitization and the (psi, rho) pairs for each system.

Simultaneous approximation: phi_i is raised to at least q^(-1-1/(2d)), a change that does
not alter the measure of the limsup set; if q * prod phi_i(q) > 1 throughout the tail the
set is already full and a flag is raised instead.

Linear forms: phi is raised on the integers where (max Phi)^d * prod Phi * prod phi falls
below a slowly growing f(u), by convex interpolation with the previous sanitized value,
so that the product lands exactly on f(u) / ((max Phi)^d prod Phi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import bisect

from ..exceptions import ValidationError
from .families import LevelScheme
from .rates import (Div, Exponential, Mul, PowerLog, Pow, Rate, Table, as_rate, check_monotone,
                    lambda_regularity, max_rate)

U = PowerLog(1, 1, 0)


@dataclass
class SanitizedRates:
    kind: str
    original: list
    sanitized: list
    full_measure: bool = False
    Phi: list = field(default_factory=list)
    f: Rate | None = None
    window: tuple = (1, 1)
    in_N1: np.ndarray | None = None
    t_star: np.ndarray | None = None
    u0: int | None = None
    u0_redefined: bool = False
    warnings: list = field(default_factory=list)
    bases: list = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.original)

    @property
    def h(self) -> int:
        return len(self.Phi)


def _prod(rates):
    out = rates[0]
    for r in rates[1:]:
        out = Mul(out, r)
    return out


def sanitize_rates(kind: str, phi, Phi=None, d: int | None = None, h: int | None = None, M: int = 2,
                   f: Rate | None = None, epsilon: float = 0.1, u_max: int = 10 ** 4,
                   bases=None) -> SanitizedRates:
    """Sanitize approximating functions for ``kind`` in {"simultaneous", "linear_forms", "shrinking"}.

    ``phi`` is a list of d rates (a single rate is repeated d times).  Checks and the
    linear-forms induction run on the integers 1..u_max.
    """
    if isinstance(phi, (Rate, str, int, float)):
        phi = [phi] * (d or 1)
    phi = [as_rate(p) for p in phi]
    d = len(phi) if d is None else d
    if len(phi) != d:
        raise ValidationError(("phi", f"need {d} approximating functions, got {len(phi)}"))
    us = np.arange(1, int(u_max) + 1, dtype=float)
    for i, p in enumerate(phi):
        check_monotone(p, us, True, what=f"phi[{i}]")

    if kind == "shrinking":
        bases = list(bases or [])
        if len(bases) != d:
            raise ValidationError(("bases", f"need {d} bases, got {len(bases)}"))
        return SanitizedRates("shrinking", phi, list(phi), window=(1, int(u_max)), bases=bases)

    if kind == "simultaneous":
        tail = us[len(us) // 2:]
        prod = np.exp(sum(p.log(tail) for p in phi) + np.log(tail))
        if np.all(prod > 1):
            return SanitizedRates("simultaneous", phi, list(phi), full_measure=True, window=(1, int(u_max)))
        floor = PowerLog(1, Fraction(-(2 * d + 1), 2 * d), 0)
        return SanitizedRates("simultaneous", phi, [max_rate(p, floor) for p in phi], window=(1, int(u_max)))

    if kind != "linear_forms":
        raise ValidationError(("kind", f"unknown sanitization kind {kind!r}"))
    if Phi is None:
        raise ValidationError(("Phi", "linear forms need the growth functions Phi"))
    if isinstance(Phi, (Rate, str, int, float)):
        Phi = [Phi] * (h or 1)
    Phi = [as_rate(p) for p in Phi]
    h = len(Phi) if h is None else h
    if len(Phi) != h:
        raise ValidationError(("Phi", f"need {h} growth functions, got {len(Phi)}"))
    for k, P in enumerate(Phi):
        check_monotone(P, us, False, what=f"Phi[{k}]")
    notes = []

    # growth between consecutive M-adic points
    ts = [M ** t for t in range(0, int(math.log(u_max, M)) + 1)]
    for k, P in enumerate(Phi):
        if len(ts) > 1:
            ratios = np.exp(np.diff(P.log(np.asarray(ts, dtype=float))))
            if np.min(ratios[1:] if len(ratios) > 1 else ratios) <= 1:
                notes.append(f"Phi[{k}] does not grow by a factor > 1 between M-adic points on the tested range")

    maxPhi = max_rate(*Phi)
    if f is None:
        f = Pow(maxPhi, epsilon)
    base_log = d * maxPhi.log(us) + sum(P.log(us) for P in Phi)
    target_log = f.log(us) - base_log
    if np.any(np.diff(target_log) > 1e-12):
        notes.append("f(u) / ((max Phi)^d prod Phi) is not decreasing on the tested range")

    phis = np.stack([np.asarray(p(us), dtype=float) for p in phi])
    in_N1 = base_log + np.log(phis).sum(axis=0) >= f.log(us) - 1e-12
    target = np.exp(target_log)
    tilde = phis.copy()
    t_star = np.full(len(us), np.nan)
    redefined = False
    if in_N1.any():
        u0 = int(np.argmax(in_N1))
    else:
        # no u satisfies the inequality: raise the value at u=1 onto the boundary
        u0 = 0
        redefined = True
        scale = (target[0] / np.prod(phis[:, 0])) ** (1 / d)
        tilde[:, 0] = phis[:, 0] * max(scale, 1.0)
        notes.append("N_1 empty on the tested range; value at u=1 raised onto the boundary")
    tilde[:, :u0] = np.nan
    for j in range(u0 + 1, len(us)):
        if in_N1[j]:
            continue
        prev, cur = tilde[:, j - 1], phis[:, j]

        def G(t):
            return np.prod(t * prev + (1 - t) * cur)

        goal = target[j]
        if G(1.0) < goal:
            # only possible when f/(...) is not decreasing; keep the previous value
            t = 1.0
        else:
            t = bisect(lambda s: G(s) - goal, 0.0, 1.0, xtol=1e-16, rtol=8.9e-16, maxiter=200)
        t_star[j] = t
        tilde[:, j] = t * prev + (1 - t) * cur
    sanitized = [Table(tuple(np.where(np.isnan(row), phis[i], row)), start=1) for i, row in enumerate(tilde)]

    cap = np.log(tilde[:, u0:]).sum(axis=0) + sum(P.log(us[u0:]) for P in Phi)
    full = bool(np.all(cap[len(cap) // 2:] > 0))
    return SanitizedRates("linear_forms", phi, sanitized, full_measure=full, Phi=Phi, f=f, window=(1, int(u_max)),
                          in_N1=in_N1, t_star=t_star, u0=u0 + 1, u0_redefined=redefined, warnings=notes)


@dataclass
class RatePair:
    kind: str
    psi: list
    rho: list
    scheme: LevelScheme
    lam: list = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.psi)

    def psi_at(self, n):
        u = self.scheme.u(n)
        return [_value(p, u) for p in self.psi]

    def rho_at(self, n):
        u = self.scheme.u(n)
        return [_value(r, u) for r in self.rho]


def _value(rate, u):
    v = rate.exact(u)
    return v if v is not None else float(rate(u))


def make_rates(sanitized: SanitizedRates, M: int = 16, levels=range(1, 6), scheme: LevelScheme | None = None,
               check: bool = True) -> RatePair:
    """Approximating and ubiquity functions (psi_i, rho_i) for a sanitized system.

    simultaneous: psi_i = phi_i / q,  rho_i = (phi_i / q) (q prod phi)^(-1/d)
    linear_forms: psi_i = phi_i / (h max Phi),  rho_i = M phi_i / max Phi * (prod phi prod Phi)^(-1/d)
    shrinking:    psi_i(n) = phi_i(n) / b_i^n,  rho_i(n) = b_i^-n
    psi_i <= rho_i is checked at u_n for every level in ``levels``.
    """
    if sanitized.full_measure:
        raise ValidationError(("rates", "sanitization flagged full measure; no ubiquity pair is needed"))
    phi = sanitized.sanitized
    d = len(phi)
    if sanitized.kind == "simultaneous":
        scheme = scheme or LevelScheme("geometric", M)
        prod = Mul(U, _prod(phi))
        psi = [Div(p, U) for p in phi]
        rho = [Mul(Div(p, U), Pow(prod, Fraction(-1, d))) for p in phi]
    elif sanitized.kind == "linear_forms":
        scheme = scheme or LevelScheme("linear_forms", M)
        Phi = sanitized.Phi
        h = len(Phi)
        maxPhi = max_rate(*Phi)
        vol = Mul(_prod(phi), _prod(Phi))
        psi = [Div(p, Mul(PowerLog(h, 0, 0), maxPhi)) for p in phi]
        rho = [Mul(Mul(PowerLog(scheme.M, 0, 0), Div(p, maxPhi)), Pow(vol, Fraction(-1, d))) for p in phi]
    elif sanitized.kind == "shrinking":
        scheme = scheme or LevelScheme("linear")
        rho = [Exponential(1, b, -1) for b in sanitized.bases]
        psi = [Mul(p, r) for p, r in zip(phi, rho)]
    else:
        raise ValidationError(("kind", f"unknown kind {sanitized.kind!r}"))

    pair = RatePair(sanitized.kind, psi, rho, scheme)
    if check:
        for n in levels:
            u = scheme.u(n)
            for i in range(d):
                a, b = _value(psi[i], u), _value(rho[i], u)
                if a > b * (1 + 1e-12):
                    raise ValidationError((f"psi[{i}]", f"psi exceeds rho at level {n} (u={u}): {float(a)} > {float(b)}"))
        us = [scheme.u(n) for n in levels]
        pair.lam = [lambda_regularity(p, us) for p in psi]
    return pair
