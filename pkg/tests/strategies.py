from fractions import Fraction
from hypothesis import strategies as st
from chargedfock.fockstate import SectorState, TensorState
from chargedfock.partition import partitions_of
from chargedfock.scalar import GaussianRational


def partitions(max_level: int, min_level: int = 0):
    return st.integers(min_level, max_level).flatmap(lambda n: st.sampled_from(partitions_of(n)))


def fractions(limit: int = 5):
    return st.builds(Fraction, st.integers(-limit, limit), st.integers(1, limit))


def gaussians(limit: int = 5):
    return st.builds(GaussianRational, fractions(limit), fractions(limit))


def sector_states(max_level: int = 4, sectors=(-1, 0, 1), max_terms: int = 4):
    terms = st.lists(st.tuples(st.sampled_from(sectors), partitions(max_level), gaussians()), max_size=max_terms)
    return terms.map(lambda ts: SectorState({(j, p): c for j, p, c in ts}))


def tensor_states(max_level: int = 3, sectors=(-1, 0, 1), max_terms: int = 4):
    terms = st.lists(st.tuples(st.sampled_from(sectors), partitions(max_level), partitions(max_level), gaussians()),
                     max_size=max_terms)
    return terms.map(lambda ts: TensorState({(j, left, right): c for j, left, right, c in ts}))
