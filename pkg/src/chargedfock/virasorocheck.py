from fractions import Fraction
from typing import Callable, List, Sequence
from chargedfock.fockstate import SectorState, TensorState, inner_product
from chargedfock.heisenberg import apply_J
from chargedfock.heisenbergcheck import check_sectors
from chargedfock.partition import partitions_up_to
from chargedfock.relationabstractcheck import CheckFailure, RelationAbstractCheck
from chargedfock.scalar import EXACT_RATIONAL, Scalar, ScalarContext
from chargedfock.truncation import Truncation
from chargedfock.virasoro import SUGAWARA_NORMALIZATION, LorentzGenerator, apply_chiral_terms, apply_L


CENTRAL_CHARGE = 1


class VirasoroCheck(RelationAbstractCheck):
    """[L_m, L_n] = (m - n) L_{m+n} + c/12 m(m^2 - 1) delta_{m,-n} with c = 1."""
    def __init__(self, ctx: ScalarContext, m_max: int = 4, sectors: Sequence[int] = None,
                 normalization: Scalar = SUGAWARA_NORMALIZATION):
        super().__init__("VirasoroCheck", ctx)
        self.m_max: int = m_max
        self.sectors: Sequence[int] = sectors
        self.normalization: Scalar = normalization

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        top = trunc.level_cutoff - self.m_max
        if top < 0:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures

        def L(n, v):
            return apply_L(n, v, trunc, self.normalization)

        modes = range(-self.m_max, self.m_max + 1)
        for j in check_sectors(trunc, self.sectors):
            for p in partitions_up_to(top):
                v = SectorState({(j, p): 1})
                for m in modes:
                    for n in modes:
                        lhs = L(m, L(n, v)) - L(n, L(m, v))
                        expected = L(m + n, v) * (m - n)
                        if m == -n:
                            central = self.ctx.convert(Fraction(CENTRAL_CHARGE * m * (m * m - 1), 12))
                            expected = expected + v * central
                        self.compare(self.state_residual(lhs - expected), f"[L_{m}, L_{n}] on {v}", failures)
        if callback:
            callback(self.name, len(failures), "")
        return failures


class SugawaraCurrentCheck(RelationAbstractCheck):
    """[L_m, J_n] = -n J_{m+n}."""
    def __init__(self, ctx: ScalarContext, m_max: int = 4, sectors: Sequence[int] = None,
                 normalization: Scalar = SUGAWARA_NORMALIZATION):
        super().__init__("SugawaraCurrentCheck", ctx)
        self.m_max: int = m_max
        self.sectors: Sequence[int] = sectors
        self.normalization: Scalar = normalization

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        top = trunc.level_cutoff - self.m_max
        if top < 0:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures
        modes = range(-self.m_max, self.m_max + 1)
        for j in check_sectors(trunc, self.sectors):
            for p in partitions_up_to(top):
                v = SectorState({(j, p): 1})
                for m in modes:
                    for n in modes:
                        lhs = (apply_L(m, apply_J(n, v, trunc), trunc, self.normalization)
                               - apply_J(n, apply_L(m, v, trunc, self.normalization), trunc))
                        expected = apply_J(m + n, v, trunc) * (-n)
                        self.compare(self.state_residual(lhs - expected), f"[L_{m}, J_{n}] on {v}", failures)
        if callback:
            callback(self.name, len(failures), "")
        return failures


class LorentzCheck(RelationAbstractCheck):
    """
    Unperturbed Moebius relations on the diagonal-charge space:
    [l_1, l_-1] = 2 k0, [k0, l_{+-1}] = -+l_{+-1}, k2 = i[k0, k1], l_1^* = l_-1.
    """
    def __init__(self, ctx: ScalarContext, max_level: int = 3, sectors: Sequence[int] = None,
                 normalization: Scalar = SUGAWARA_NORMALIZATION):
        super().__init__("LorentzCheck", ctx)
        self.max_level: int = max_level
        self.sectors: Sequence[int] = sectors
        self.normalization: Scalar = normalization

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        top = min(trunc.level_cutoff - 1, self.max_level)
        if top < 0:
            self.vacuous(trunc, "Lorentz generators")
            return failures

        def act(kind, v):
            return apply_chiral_terms(LorentzGenerator(kind, self.ctx).terms(), v, trunc, self.normalization)

        def bracket(a, b, v):
            return act(a, act(b, v)) - act(b, act(a, v))

        G = LorentzGenerator
        has_i = self.ctx.mode != EXACT_RATIONAL
        for j in check_sectors(trunc, self.sectors, reach=1):
            basis = [TensorState({(j, left, right): 1})
                     for left in partitions_up_to(top) for right in partitions_up_to(top)]
            for v in basis:
                self.compare(self.state_residual(bracket(G.L_PLUS, G.L_MINUS, v) - act(G.K0, v) * 2),
                             f"[l_1, l_-1] - 2 k0 on {v}", failures)
                self.compare(self.state_residual(bracket(G.K0, G.L_PLUS, v) + act(G.L_PLUS, v)),
                             f"[k0, l_1] + l_1 on {v}", failures)
                self.compare(self.state_residual(bracket(G.K0, G.L_MINUS, v) - act(G.L_MINUS, v)),
                             f"[k0, l_-1] - l_-1 on {v}", failures)
                if has_i:
                    i = self.ctx.imaginary_unit()
                    self.compare(self.state_residual(act(G.K2, v) - bracket(G.K0, G.K1, v) * i),
                                 f"k2 - i[k0, k1] on {v}", failures)
                for w in basis:
                    residual = inner_product(act(G.L_PLUS, v), w) - inner_product(v, act(G.L_MINUS, w))
                    self.compare(residual, f"<l_1 {v}, {w}> adjoint", failures)
        if callback:
            callback(self.name, len(failures), "")
        return failures
