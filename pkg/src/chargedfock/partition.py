from collections import Counter
from functools import lru_cache
from math import factorial
from typing import Iterable, Iterator, List, Tuple


# Weakly decreasing tuple of positive integers; () is the vacuum.
Partition = Tuple[int, ...]

EMPTY: Partition = ()


def check_partition(parts: Partition) -> None:
    if not isinstance(parts, tuple):
        raise TypeError("Partition must be a tuple")
    if not all(isinstance(i, int) and i > 0 for i in parts):
        raise ValueError(f"Partition parts must be positive integers: {parts}")
    if not all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"Partition parts must be weakly decreasing: {parts}")


def make_partition(parts: Iterable[int]) -> Partition:
    """Sorts the parts; J_{-n} commute, so the order of creation is irrelevant."""
    p = tuple(sorted(parts, reverse=True))
    check_partition(p)
    return p


def level(p: Partition) -> int:
    return sum(p)


def multiplicities(p: Partition) -> Counter:
    return Counter(p)


@lru_cache(maxsize=None)
def z_factor(p: Partition) -> int:
    """
    z_p = prod_i i^{m_i} m_i!, the norm^2 of J_{-p_1}...J_{-p_k} Omega.
    """
    z = 1
    for part, mult in Counter(p).items():
        z *= part ** mult * factorial(mult)
    return z


def _partitions(n: int, max_part: int) -> List[Partition]:
    if n == 0:
        return [EMPTY]
    result = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            result.append((first,) + rest)
    return result


@lru_cache(maxsize=None)
def partitions_of(n: int) -> Tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("Cannot partition a negative integer")
    return tuple(_partitions(n, n))


def partitions_up_to(n: int) -> Iterator[Partition]:
    for k in range(n + 1):
        yield from partitions_of(k)


def add_part(p: Partition, k: int) -> Partition:
    for i, part in enumerate(p):
        if part <= k:
            return p[:i] + (k,) + p[i:]
    return p + (k,)


def remove_part(p: Partition, k: int) -> Partition:
    i = p.index(k)
    return p[:i] + p[i + 1:]


def merge(p: Partition, q: Partition) -> Partition:
    if not p:
        return q
    if not q:
        return p
    return tuple(sorted(p + q, reverse=True))


@lru_cache(maxsize=None)
def annihilations(p: Partition) -> Tuple[Tuple[Partition, Partition, int], ...]:
    """
    All sub-multisets mu of p with J_mu J_{-p} Omega = coef * J_{-(p - mu)} Omega.
    Returns (mu, rest, coef) with coef = prod_k k^{m_k(mu)} m_k(p)! / (m_k(p) - m_k(mu))!.
    """
    items = sorted(Counter(p).items(), reverse=True)
    result = [((), (), 1)]
    for part, mult in items:
        extended = []
        for mu, rest, coef in result:
            for taken in range(mult + 1):
                c = coef * part ** taken * factorial(mult) // factorial(mult - taken)
                extended.append((mu + (part,) * taken,
                                 rest + (part,) * (mult - taken),
                                 c))
        result = extended
    return tuple(result)
