"""Integer witnesses for systems of linear-form inequalities.

Given a d x h matrix A, bounds Phi_k and radii rho_k, find a nonzero (q, p) with
|A_i q - p_i| < rho_i and |q_k| <= Phi_k.  The body defined by these inequalities is
convex, symmetric and has volume 2^(d+h) prod rho_i prod (Phi_k + 1) once the
q-bounds are read as |q_k| < Phi_k + 1, so a lattice point exists as soon as
prod rho_i * prod (Phi_k + 1) > 1.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from ..boxgeom.neighborhood import Affine
from ..exceptions import SizeError, ValidationError, WitnessError
from .families import ResonantItem

WITNESS_CAP = 10 ** 7


def volume_condition(Phi, rho) -> bool:
    """Exact check of prod rho_i * prod (floor(Phi_k) + 1) > 1."""
    v = Fraction(1)
    for r in rho:
        v *= Fraction(r)
    for P in Phi:
        v *= math.floor(P) + 1
    return v > 1


def verify_witness(A, q, p, Phi, rho) -> bool:
    """Both inequality systems, checked in rational arithmetic on the given entries."""
    if not any(q):
        return False
    if any(abs(qk) > P for qk, P in zip(q, Phi)):
        return False
    for row, pi, r in zip(A, p, rho):
        val = sum((Fraction(a) * qk for a, qk in zip(row, q)), Fraction(0)) - pi
        if not abs(val) < Fraction(r):
            return False
    return True


def _sign_normalize(q, p):
    for x in q:
        if x:
            if x < 0:
                return tuple(-y for y in q), tuple(-y for y in p)
            break
    return tuple(q), tuple(p)


def minkowski_witness(A, Phi, rho, u=None, cap: int = WITNESS_CAP, require_volume: bool = True) -> ResonantItem | None:
    """Exhaustive search for an integer witness (q, p).

    ``A`` is d x h, ``Phi`` has h bounds and ``rho`` d radii.  Among all solutions the one
    with the smallest max_i |A_i q - p_i| / rho_i is returned, ties broken by the smallest
    max_k |q_k| and then lexicographically; q is normalized so its first nonzero entry is
    positive, and p_i is the integer nearest to A_i q.
    """
    A = np.atleast_2d(np.asarray(A, dtype=object))
    d, h = A.shape
    Phi = [int(math.floor(P)) for P in (Phi if np.ndim(Phi) else [Phi] * h)]
    rho = list(rho) if np.ndim(rho) else [rho] * d
    problems = []
    if len(Phi) != h:
        problems.append(("Phi", f"need {h} bounds, got {len(Phi)}"))
    if len(rho) != d:
        problems.append(("rho", f"need {d} radii, got {len(rho)}"))
    if any(P < 0 for P in Phi):
        problems.append(("Phi", f"bounds must be nonnegative, got {Phi}"))
    if any(not r > 0 for r in rho):
        problems.append(("rho", f"radii must be positive, got {rho}"))
    if problems:
        raise ValidationError(problems)
    volume_ok = volume_condition(Phi, rho)
    if require_volume and not volume_ok:
        raise ValidationError(("rho", "prod rho_i * prod (Phi_k + 1) <= 1; no witness is guaranteed"))
    size = math.prod(2 * P + 1 for P in Phi)
    if size > cap:
        raise SizeError(size, cap, what="witness q-box")

    Af = A.astype(float)
    rf = np.asarray([float(r) for r in rho])
    Q = np.array(list(itertools.product(*(range(-P, P + 1) for P in Phi))), dtype=np.int64)
    Q = Q[np.any(Q != 0, axis=1)]
    # keep one of each +-q pair
    first = np.argmax(Q != 0, axis=1)
    Q = Q[Q[np.arange(len(Q)), first] > 0]
    vals = Q @ Af.T
    P = np.rint(vals)
    score = np.max(np.abs(vals - P) / rf, axis=1)
    norm = np.max(np.abs(Q), axis=1)
    order = np.lexsort(tuple(Q[:, k] for k in range(h - 1, -1, -1)) + (norm, score))
    for idx in order:
        if score[idx] >= 1 + 1e-9:
            break
        q = tuple(int(x) for x in Q[idx])
        # nearest integers computed exactly
        p = []
        for row in A:
            v = sum((Fraction(a) * qk for a, qk in zip(row, q)), Fraction(0))
            p.append(math.floor(v + Fraction(1, 2)))
        if verify_witness(A, q, p, Phi, rho):
            q, p = _sign_normalize(q, p)
            return ResonantItem(q + tuple(p), u, tuple(Affine(q, pi) for pi in p))
    if volume_ok:
        raise WitnessError(f"no witness found for A={A.tolist()}, Phi={Phi}, rho={rho} although the volume condition holds")
    return None
