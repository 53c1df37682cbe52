from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple
from chargedfock.fockstate import SectorState, TensorState, accumulate
from chargedfock.heisenberg import LEFT, RIGHT, SIDES, current_on_vector
from chargedfock.partition import Partition, level
from chargedfock.scalar import EXACT_RATIONAL, Scalar, ScalarContext
from chargedfock.truncation import Truncation


SUGAWARA_NORMALIZATION = Fraction(1, 2)


@lru_cache(maxsize=None)
def sugawara_on_partition(n: int,
                          p: Partition,
                          beta: Scalar,
                          level_cutoff: int,
                          normalization: Scalar = SUGAWARA_NORMALIZATION
                          ) -> Tuple[Tuple[Tuple[Partition, Scalar], ...], bool]:
    """
    L_n = normalization * sum_k :J_{n-k} J_k: on one basis vector of charge beta.
    Only n - l <= k <= l contribute on a level-l vector.
    """
    ell = level(p)
    total: Dict[Partition, Scalar] = {}
    overflow = False
    for k in range(n - ell, ell + 1):
        a, b = n - k, k
        # normal order: the larger index acts first
        first, second = max(a, b), min(a, b)
        w, dropped = current_on_vector(first, {p: 1}, beta, level_cutoff)
        overflow = overflow or dropped
        if not w:
            continue
        w, dropped = current_on_vector(second, w, beta, level_cutoff)
        overflow = overflow or dropped
        for q, c in w.items():
            accumulate(total, q, c)
    column = tuple((q, normalization * c) for q, c in total.items() if c != 0)
    return column, overflow


def apply_L(n: int, v: SectorState, trunc: Truncation,
            normalization: Scalar = SUGAWARA_NORMALIZATION) -> SectorState:
    entries = {}
    overflow = v.overflow
    for (j, p), c in v.items():
        column, dropped = sugawara_on_partition(n, p, trunc.charge(j), trunc.level_cutoff, normalization)
        overflow = overflow or dropped
        for q, value in column:
            accumulate(entries, (j, q), value * c)
    return SectorState(entries, overflow)


def apply_L_tensor(side: str, n: int, v: TensorState, trunc: Truncation,
                   normalization: Scalar = SUGAWARA_NORMALIZATION) -> TensorState:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    entries = {}
    overflow = v.overflow
    for (j, left, right), c in v.items():
        acted = left if side == LEFT else right
        column, dropped = sugawara_on_partition(n, acted, trunc.charge(j), trunc.level_cutoff, normalization)
        overflow = overflow or dropped
        for q, value in column:
            key = (j, q, right) if side == LEFT else (j, left, q)
            accumulate(entries, key, value * c)
    return TensorState(entries, overflow)


# (side, mode index, coefficient) terms of a chiral combination on the tensor space
ChiralTerms = List[Tuple[str, int, Scalar]]


def apply_chiral_terms(terms: ChiralTerms, v: TensorState, trunc: Truncation,
                       normalization: Scalar = SUGAWARA_NORMALIZATION) -> TensorState:
    result = TensorState(overflow=v.overflow)
    for side, n, coef in terms:
        if coef == 0:
            continue
        result = result + apply_L_tensor(side, n, v, trunc, normalization) * coef
    return result


def chiral_adjoint(terms: ChiralTerms) -> ChiralTerms:
    """(L_n (x) 1)^* = L_{-n} (x) 1, coefficients conjugated."""
    return [(side, -n, coef.conjugate()) for side, n, coef in terms]


class LorentzGenerator:
    """
    Unperturbed two-dimensional Moebius generators on the diagonal-charge space:
    l_plus = L_1 (x) 1 + 1 (x) L_{-1}, l_minus = L_{-1} (x) 1 + 1 (x) L_1,
    k0 = L_0 (x) 1 - 1 (x) L_0, k1 = (l_plus + l_minus)/2, k2 = (l_plus - l_minus)/2i.
    """
    L_PLUS = "l_plus"
    L_MINUS = "l_minus"
    K0 = "k0"
    K1 = "k1"
    K2 = "k2"
    KINDS = (L_PLUS, L_MINUS, K0, K1, K2)

    def __init__(self, kind: str, ctx: ScalarContext = None):
        if kind not in LorentzGenerator.KINDS:
            raise ValueError(f"Unknown Lorentz generator: {kind}")
        if kind == LorentzGenerator.K2 and (ctx is None or ctx.mode == EXACT_RATIONAL):
            raise ValueError("k2 needs an imaginary unit: use exact-gaussian or float mode")
        self.kind: str = kind
        self.ctx: ScalarContext = ctx

    def terms(self) -> ChiralTerms:
        one = Fraction(1)
        half = Fraction(1, 2)
        if self.kind == LorentzGenerator.L_PLUS:
            return [(LEFT, 1, one), (RIGHT, -1, one)]
        if self.kind == LorentzGenerator.L_MINUS:
            return [(LEFT, -1, one), (RIGHT, 1, one)]
        if self.kind == LorentzGenerator.K0:
            return [(LEFT, 0, one), (RIGHT, 0, -one)]
        if self.kind == LorentzGenerator.K1:
            return [(LEFT, 1, half), (RIGHT, -1, half), (LEFT, -1, half), (RIGHT, 1, half)]
        minus_half_i = -half * self.ctx.imaginary_unit()
        return [(LEFT, 1, minus_half_i), (RIGHT, -1, minus_half_i),
                (LEFT, -1, -minus_half_i), (RIGHT, 1, -minus_half_i)]

    def __repr__(self):
        return f"LorentzGenerator({self.kind!r})"


def apply_lorentz(g: LorentzGenerator, v: TensorState, trunc: Truncation) -> TensorState:
    return apply_chiral_terms(g.terms(), v, trunc)
