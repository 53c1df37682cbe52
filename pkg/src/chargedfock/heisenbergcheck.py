from typing import Callable, List, Sequence
from chargedfock.fockstate import SectorState, TensorState, inner_product
from chargedfock.heisenberg import LEFT, RIGHT, apply_J, apply_J_tensor
from chargedfock.partition import partitions_up_to
from chargedfock.relationabstractcheck import CheckFailure, RelationAbstractCheck
from chargedfock.scalar import Scalar, ScalarContext
from chargedfock.truncation import Truncation


def check_sectors(trunc: Truncation, sectors: Sequence[int] = None, reach: int = 2) -> List[int]:
    if sectors is None:
        return [j for j in trunc.sectors() if abs(j) <= reach]
    return [j for j in sectors if trunc.contains_sector(j)]


class HeisenbergCheck(RelationAbstractCheck):
    """[J_m, J_n] = m delta_{m,-n} and J_m^* = J_{-m} on levels <= L - m_max."""
    def __init__(self, ctx: ScalarContext, m_max: int = 6, sectors: Sequence[int] = None):
        super().__init__("HeisenbergCheck", ctx)
        self.m_max: int = m_max
        self.sectors: Sequence[int] = sectors

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        top = trunc.level_cutoff - self.m_max
        if top < 0:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures
        modes = range(-self.m_max, self.m_max + 1)
        count = 0
        for j in check_sectors(trunc, self.sectors):
            basis = [SectorState({(j, p): 1}) for p in partitions_up_to(top)]
            for v in basis:
                for m in modes:
                    for n in modes:
                        lhs = apply_J(m, apply_J(n, v, trunc), trunc) - apply_J(n, apply_J(m, v, trunc), trunc)
                        expected = v * m if m == -n else SectorState()
                        self.compare(self.state_residual(lhs - expected), f"[J_{m}, J_{n}] on {v}", failures)
                        count += 1
                for w in basis:
                    for m in range(1, self.m_max + 1):
                        residual = inner_product(apply_J(-m, v, trunc), w) - inner_product(v, apply_J(m, w, trunc))
                        self.compare(residual, f"<J_{-m} {v}, {w}> adjoint", failures)
        if callback:
            callback(self.name, len(failures), f"{count} commutators")
        return failures


class TensorCurrentCheck(RelationAbstractCheck):
    """Left and right current actions commute on the diagonal-charge space."""
    def __init__(self, ctx: ScalarContext, m_max: int = 2, max_level: int = 3):
        super().__init__("TensorCurrentCheck", ctx)
        self.m_max: int = m_max
        self.max_level: int = max_level

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        top = min(trunc.level_cutoff - self.m_max, self.max_level)
        if top < 0:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures
        modes = range(-self.m_max, self.m_max + 1)
        for j in check_sectors(trunc, reach=0):
            for left in partitions_up_to(top):
                for right in partitions_up_to(top):
                    v = TensorState({(j, left, right): 1})
                    for m in modes:
                        for n in modes:
                            lr = apply_J_tensor(LEFT, m, apply_J_tensor(RIGHT, n, v, trunc), trunc)
                            rl = apply_J_tensor(RIGHT, n, apply_J_tensor(LEFT, m, v, trunc), trunc)
                            self.compare(self.state_residual(lr - rl), f"left J_{m} / right J_{n} on {v}", failures)
        if callback:
            callback(self.name, len(failures), "")
        return failures
