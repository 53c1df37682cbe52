from functools import lru_cache
from typing import Dict, Optional, Tuple
from chargedfock.fockstate import SectorState, TensorState, accumulate
from chargedfock.partition import Partition, add_part, level, remove_part
from chargedfock.scalar import Scalar
from chargedfock.truncation import Truncation


LEFT = "left"
RIGHT = "right"
SIDES = (LEFT, RIGHT)


@lru_cache(maxsize=None)
def current_on_partition(m: int, p: Partition) -> Optional[Tuple[Partition, int]]:
    """
    J_m J_{-p} Omega for m != 0: creation prepends a part, annihilation
    contracts one of the equal parts with weight m * multiplicity.
    """
    if m == 0:
        raise ValueError("J_0 acts by the sector charge, not on partitions")
    if m < 0:
        return add_part(p, -m), 1
    mult = p.count(m)
    if mult == 0:
        return None
    return remove_part(p, m), m * mult


def current_on_vector(m: int,
                      vec: Dict[Partition, Scalar],
                      beta: Scalar,
                      level_cutoff: int) -> Tuple[Dict[Partition, Scalar], bool]:
    """J_m on a vector of one sector given as partition -> coefficient."""
    result: Dict[Partition, Scalar] = {}
    overflow = False
    if m == 0:
        for p, c in vec.items():
            result[p] = beta * c
        return result, overflow
    for p, c in vec.items():
        image = current_on_partition(m, p)
        if image is None:
            continue
        q, coef = image
        if level(q) > level_cutoff:
            overflow = True
            continue
        accumulate(result, q, coef * c)
    return result, overflow


def apply_J(m: int, v: SectorState, trunc: Truncation) -> SectorState:
    entries = {}
    overflow = v.overflow
    for (j, p), c in v.items():
        image, dropped = current_on_vector(m, {p: c}, trunc.charge(j), trunc.level_cutoff)
        overflow = overflow or dropped
        for q, value in image.items():
            accumulate(entries, (j, q), value)
    return SectorState(entries, overflow)


def apply_J_tensor(side: str, m: int, v: TensorState, trunc: Truncation) -> TensorState:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    entries = {}
    overflow = v.overflow
    for (j, left, right), c in v.items():
        acted = left if side == LEFT else right
        image, dropped = current_on_vector(m, {acted: c}, trunc.charge(j), trunc.level_cutoff)
        overflow = overflow or dropped
        for q, value in image.items():
            key = (j, q, right) if side == LEFT else (j, left, q)
            accumulate(entries, key, value)
    return TensorState(entries, overflow)
