"""Partial sums of the series that decide between measure zero and full measure.

Finite sums cannot decide convergence.  The label attached to a report is a heuristic
read off the dyadic block sums B_k = sum of terms with index in [2^k, 2^(k+1)): if
log2 B_k does not fall over the last blocks the series is called diverging, if it falls
by at least 0.1 per block it is called converging, anything in between is inconclusive.
Block sums that decay like a power of k rather than geometrically are judged against
the exponent -1 instead (see ``classify``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..boxgeom.spaces import AmbientSpace
from ..exceptions import ValidationError
from ..systems.rates import as_rate
from ..systems.sanitize import RatePair

DIVERGING_SLOPE = -0.02
CONVERGING_SLOPE = -0.1
POWER_MARGIN = 0.1


@dataclass
class SeriesReport:
    checkpoints: list
    partial_sums: list
    last_terms: list
    label: str
    slope: float
    note: str = ""
    comparison: "SeriesReport | None" = None
    terms: np.ndarray | None = field(default=None, repr=False)

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0

    def rows(self):
        return list(zip(self.checkpoints, self.partial_sums, self.last_terms))


def checkpoints(N: int) -> list:
    pts = {N}
    k = 1
    while k <= N:
        pts.add(k)
        k *= 2
    k = 10
    while k <= N:
        pts.add(k)
        k *= 10
    return sorted(pts)


def classify(terms) -> tuple[str, float]:
    """Heuristic label and the fitted decay exponent of the dyadic block sums.

    Over the upper half of the blocks log2 B_k is fitted both against k (geometric
    decay 2^(sigma k)) and against log2 k (power decay k^tau); the better fit decides.
    Geometric: sigma >= -0.02 diverging, sigma <= -0.1 converging.  Power: the boundary
    is tau = -1 and anything within 0.1 of it is inconclusive.  The returned slope is
    sigma or tau accordingly.
    """
    t = np.asarray(terms, dtype=float)
    K = int(math.floor(math.log2(len(t) + 1)))
    if K < 3:
        return "inconclusive", float("nan")
    # complete blocks [2^k, 2^(k+1)) with 1-based indices
    blocks = np.array([math.fsum(t[2 ** k - 1:2 ** (k + 1) - 1]) for k in range(K)])
    start = K // 2 if K - K // 2 >= 3 else K - 3
    tail = blocks[start:]
    if np.any(tail <= 0):
        # terms underflowed: faster than any geometric rate we could fit
        return ("converging", float("-inf")) if tail[-1] <= 0 else ("inconclusive", float("nan"))
    y = np.log2(tail)
    ks = np.arange(start, K, dtype=float)
    fits = []
    for x in (ks, np.log2(ks + 1)):
        coef, res, *_ = np.polyfit(x, y, 1, full=True)
        fits.append((float(res[0]) if len(res) else 0.0, float(coef[0])))
    (res_g, sigma), (res_p, tau) = fits
    if res_g <= res_p:
        if sigma >= DIVERGING_SLOPE:
            return "diverging", sigma
        if sigma <= CONVERGING_SLOPE:
            return "converging", sigma
        return "inconclusive", sigma
    if tau > -1 + POWER_MARGIN:
        return "diverging", tau
    if tau < -1 - POWER_MARGIN:
        return "converging", tau
    return "inconclusive", tau


def report_from_terms(terms, note: str = "", index=None) -> SeriesReport:
    terms = np.asarray(terms, dtype=float)
    if np.any(terms < 0) or np.any(np.isnan(terms)):
        raise ValidationError(("terms", "series terms must be nonnegative numbers"))
    N = len(terms)
    idx = list(range(1, N + 1)) if index is None else list(index)
    cps = checkpoints(N)
    sums, last = [], []
    running, pos = [], 0
    for c in cps:
        running.extend(terms[pos:c])
        pos = c
        sums.append(math.fsum(running))
        last.append(float(terms[c - 1]))
    label, slope = classify(terms)
    return SeriesReport([idx[c - 1] for c in cps], sums, last, label, slope,
                        note=note or "label is a finite-sum heuristic", terms=terms)


def theorem_series(rates: RatePair, space: AmbientSpace, N: int) -> SeriesReport:
    """Partial sums of sum_n prod_i (psi_i(u_n) / rho_i(u_n))^(delta_i (1 - kappa_i)) for n = 1..N."""
    if int(N) != N or N < 1:
        raise ValidationError(("N", f"must be a positive integer, got {N}"))
    if len(space.factors) != rates.d:
        raise ValidationError(("space", f"{len(space.factors)} factors for {rates.d} rate pairs"))
    n = np.arange(1, int(N) + 1)
    lu = rates.scheme.log_u(n)
    logt = np.zeros(len(n))
    for psi, rho, f in zip(rates.psi, rates.rho, space.factors):
        logt += f.delta * (1 - f.kappa) * (np.asarray(psi.log_at(lu)) - np.asarray(rho.log_at(lu)))
    return report_from_terms(np.exp(logt))


def _rates(x, count, what):
    if isinstance(x, (list, tuple)):
        out = [as_rate(r) for r in x]
    else:
        out = [as_rate(x)] * count
    if len(out) != count:
        raise ValidationError((what, f"need {count} functions, got {len(out)}"))
    return out


def _log_terms(kind, phi, Phi, q, deltas):
    lq = np.log(q)
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind == "simultaneous":
            out = sum(p.log_at(lq) for p in phi)
        elif kind == "linear_forms":
            out = -lq + sum(p.log_at(lq) for p in phi) + sum(P.log_at(lq) for P in Phi)
        else:
            out = sum(dl * p.log_at(lq) for p, dl in zip(phi, deltas))
    out = np.array(out, dtype=float)
    # log(u)^b is undefined at u = 1; such terms are left out of the sum
    out[~np.isfinite(out)] = -np.inf
    return out


def application_series(kind: str, phi, Phi=None, Q: int = 10 ** 4, *, d: int | None = None, h: int | None = None,
                       deltas=None, M: int = 2) -> SeriesReport:
    """Partial sums of the series attached to each system, up to index Q.

    simultaneous: sum_q prod_i phi_i(q)
    linear_forms: sum_q q^-1 prod_i phi_i(q) prod_k Phi_k(q)
    shrinking:    sum_n prod_i psi_i(n)^delta_i
    The report's ``comparison`` is the M-adic condensation (M - 1) sum_t M^t a(M^t).
    """
    problems = []
    if kind not in ("simultaneous", "linear_forms", "shrinking"):
        problems.append(("kind", f"unknown series kind {kind!r}"))
    if int(Q) != Q or Q < 1:
        problems.append(("Q", f"must be a positive integer, got {Q}"))
    if int(M) != M or M < 2:
        problems.append(("M", f"must be an integer >= 2, got {M}"))
    if kind == "linear_forms" and Phi is None:
        problems.append(("Phi", "linear forms need the growth functions Phi"))
    if problems:
        raise ValidationError(problems)
    if d is None:
        d = len(phi) if isinstance(phi, (list, tuple)) else (len(deltas) if deltas is not None else 1)
    phi = _rates(phi, d, "phi")
    Phi = _rates(Phi, h or (len(Phi) if isinstance(Phi, (list, tuple)) else 1), "Phi") if Phi is not None else []
    if kind == "shrinking":
        deltas = [1.0] * d if deltas is None else list(deltas)
        if len(deltas) != d:
            raise ValidationError(("deltas", f"need {d} exponents, got {len(deltas)}"))
    q = np.arange(1, int(Q) + 1, dtype=float)
    logt = _log_terms(kind, phi, Phi, q, deltas)
    skipped = [int(x) for x in q[np.isneginf(logt)]]
    rep = report_from_terms(np.exp(logt))
    if skipped[:1] == [1]:
        rep.note += "; the undefined term at index 1 is left out"
    T = int(math.floor(math.log(Q, M) + 1e-12))
    mt = np.asarray([float(M) ** t for t in range(T + 1)])
    cond = (M - 1) * mt * np.exp(_log_terms(kind, phi, Phi, mt, deltas))
    comp = report_from_terms(cond, note=f"{M}-adic condensation, index t = 0..{T}", index=range(T + 1))
    rep.comparison = comp
    return rep
