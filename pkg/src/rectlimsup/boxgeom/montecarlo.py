"""Seeded Monte Carlo measure estimates.

Samples are produced in fixed blocks; block k draws from a Philox stream keyed by the
seed with k in the counter, so the estimate depends on (seed, samples) only and not on
how blocks are spread over workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..exceptions import ValidationError
from .box import Box
from .cantor import sample_cantor
from .spaces import AmbientSpace
from .sweep import MeasureEstimate

BLOCK = 65536


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, int(block), 0, 0]))


def sample_block(space: AmbientSpace, seed: int, block: int, size: int, region: Box | None = None) -> np.ndarray:
    """``size`` points from the product measure (restricted to ``region`` on Lebesgue axes)."""
    rng = block_rng(seed, block)
    cols = []
    for j, cantor in enumerate(space.axis_cantor):
        if cantor is None:
            u = rng.random(size)
            if region is not None:
                a, b = float(region.lo[j]), float(region.hi[j])
                u = a + (b - a) * u
            cols.append(u)
        else:
            cols.append(sample_cantor(rng, cantor, size))
    return np.column_stack(cols)


def sample_points(space: AmbientSpace, samples: int, seed: int, region: Box | None = None) -> np.ndarray:
    chunks = []
    for k in range(math.ceil(samples / BLOCK)):
        size = min(BLOCK, samples - k * BLOCK)
        chunks.append(sample_block(space, seed, k, size, region))
    return np.concatenate(chunks) if chunks else np.zeros((0, space.dim))


def mc_measure(membership, space: AmbientSpace, samples: int, seed: int, *, region: Box | None = None,
               workers: int = 1) -> MeasureEstimate:
    """Fraction of sampled points accepted by ``membership`` (a vectorized predicate).

    With ``region`` the Lebesgue axes are sampled inside that box and the fraction is
    rescaled by the region's Lebesgue volume; the caller promises the set lies inside it.
    Error is 4 standard deviations of the hit fraction.
    """
    problems = []
    if int(samples) != samples or samples < 1:
        problems.append(("samples", f"must be a positive integer, got {samples}"))
    if seed is None or int(seed) != seed or seed < 0:
        problems.append(("seed", f"must be a nonnegative integer, got {seed}"))
    if region is not None and region.dim != space.dim:
        problems.append(("region", f"dimension {region.dim} does not match space dimension {space.dim}"))
    if problems:
        raise ValidationError(problems)
    samples = int(samples)
    nblocks = math.ceil(samples / BLOCK)

    def run(k):
        size = min(BLOCK, samples - k * BLOCK)
        x = sample_block(space, seed, k, size, region)
        return int(np.count_nonzero(membership(x)))

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(run, range(nblocks)))
    else:
        hits = sum(run(k) for k in range(nblocks))

    p = hits / samples
    scale = 1.0
    if region is not None:
        for j, cantor in enumerate(space.axis_cantor):
            if cantor is None:
                scale *= float(region.hi[j]) - float(region.lo[j])
    err = 4.0 * math.sqrt(p * (1 - p) / samples)
    return MeasureEstimate(p * scale, err * scale, method="monte-carlo", seed=int(seed), samples=samples)
