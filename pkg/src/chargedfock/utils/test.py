from fractions import Fraction
from typing import List, Tuple
import numpy as np
from chargedfock.fockstate import SectorState, TensorState
from chargedfock.partition import Partition, make_partition
from chargedfock.scalar import ScalarContext
from chargedfock.truncation import Truncation


def generate_random_partition(rng: np.random.Generator, max_level: int) -> Partition:
    """Uniform level in [0, max_level], then parts drawn greedily below the remainder."""
    remaining = int(rng.integers(0, max_level + 1))
    parts = []
    while remaining > 0:
        part = int(rng.integers(1, remaining + 1))
        parts.append(part)
        remaining -= part
    return make_partition(parts)


def _coefficient(rng: np.random.Generator, ctx: ScalarContext = None):
    value = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    if value == 0:
        value = Fraction(1)
    return value if ctx is None else ctx.convert(value)


def generate_random_sectorstate(rng: np.random.Generator, j: int = 0, max_level: int = 3,
                                n_terms: int = 3, ctx: ScalarContext = None) -> SectorState:
    entries = {}
    for _ in range(n_terms):
        entries[(j, generate_random_partition(rng, max_level))] = _coefficient(rng, ctx)
    return SectorState(entries)


def generate_random_tensorstate(rng: np.random.Generator, j: int = 0, max_level: int = 3,
                                n_terms: int = 3, ctx: ScalarContext = None) -> TensorState:
    entries = {}
    for _ in range(n_terms):
        left = generate_random_partition(rng, max_level)
        right = generate_random_partition(rng, max_level)
        entries[(j, left, right)] = _coefficient(rng, ctx)
    return TensorState(entries)


def generate_interior_pairs(trunc: Truncation, interior_buffer: int, samples: int, seed: int,
                            ctx: ScalarContext = None, n_terms: int = 2) -> List[Tuple[TensorState, TensorState]]:
    """The vacuum pair followed by `samples` random interior pairs of sector 0."""
    rng = np.random.default_rng(seed)
    one = 1 if ctx is None else ctx.one()
    pairs = [(TensorState.vacuum(0) * one, TensorState.vacuum(0) * one)]
    top = trunc.level_cutoff - interior_buffer
    if top < 0:
        return pairs
    for _ in range(samples):
        pairs.append((generate_random_tensorstate(rng, 0, top, n_terms, ctx),
                      generate_random_tensorstate(rng, 0, top, n_terms, ctx)))
    return pairs
