from fractions import Fraction
from typing import List, Tuple
from chargedfock.partition import Partition, partitions_of
from chargedfock.scalar import GaussianRational, Scalar


def as_integer(x: Scalar, tolerance: float = 1e-9) -> int:
    """Returns x as an int or raises ValueError when x is not (close to) one."""
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise ValueError(f"{x} is not real")
        x = x.re
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        return x.numerator
    if isinstance(x, complex):
        if abs(x.imag) > tolerance:
            raise ValueError(f"{x} is not real")
        x = x.real
    k = round(x)
    if abs(x - k) > tolerance * max(1.0, abs(x)):
        raise ValueError(f"{x} is not an integer")
    return int(k)


class Truncation:
    """
    Finite arena: chiral level <= level_cutoff on every factor and charge
    sectors j*alpha0 with j_min <= j <= j_max.
    """
    def __init__(self, level_cutoff: int, j_min: int, j_max: int, alpha0: Scalar):
        if level_cutoff < 0:
            raise ValueError("level_cutoff must be nonnegative")
        if j_min > j_max:
            raise ValueError("Empty charge window")
        if alpha0 == 0:
            raise ValueError("alpha0 must be nonzero")
        self.level_cutoff: int = level_cutoff
        self.j_min: int = j_min
        self.j_max: int = j_max
        self.alpha0: Scalar = alpha0

    @property
    def charge_window(self) -> Tuple[int, int]:
        return (self.j_min, self.j_max)

    def contains_sector(self, j: int) -> bool:
        return self.j_min <= j <= self.j_max

    def check_sector(self, j: int) -> None:
        if not self.contains_sector(j):
            raise ValueError(f"Sector {j} outside charge window [{self.j_min}, {self.j_max}]")

    def sectors(self) -> List[int]:
        return list(range(self.j_min, self.j_max + 1))

    def charge(self, j: int) -> Scalar:
        return j * self.alpha0

    def charge_steps(self, alpha: Scalar) -> int:
        """Number of alpha0 steps in alpha; alpha must lie in alpha0*Z."""
        try:
            return as_integer(alpha / self.alpha0)
        except ValueError as e:
            raise ValueError(f"alpha={alpha} is not in alpha0*Z (alpha0={self.alpha0})") from e

    def with_level_cutoff(self, level_cutoff: int) -> "Truncation":
        return Truncation(level_cutoff, self.j_min, self.j_max, self.alpha0)

    def __repr__(self):
        return f"Truncation(L={self.level_cutoff}, j=[{self.j_min}, {self.j_max}], alpha0={self.alpha0})"


def enumerate_basis(trunc: Truncation, j: int, level: int) -> List[Partition]:
    trunc.check_sector(j)
    if not 0 <= level <= trunc.level_cutoff:
        raise ValueError(f"level {level} outside [0, {trunc.level_cutoff}]")
    return list(partitions_of(level))
