from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, List
from chargedfock.fockstate import FockState
from chargedfock.scalar import Scalar, ScalarContext
from chargedfock.truncation import Truncation
from chargedfock.utils import outputmanager


IDENTITY = "identity"
BUDGET = "budget"


@dataclass
class CheckFailure:
    check: str
    detail: str
    residual: Scalar
    kind: str = IDENTITY


class RelationAbstractCheck(ABC):
    def __init__(self, name: str, ctx: ScalarContext):
        self.name: str = name
        self.ctx: ScalarContext = ctx
        self.warnings: List[str] = []

    def vacuous(self, trunc: Truncation, what: str) -> None:
        msg = f"{self.name}: vacuous interior at L={trunc.level_cutoff} ({what})"
        outputmanager.warning(msg)
        self.warnings.append(msg)

    def state_residual(self, state: FockState) -> Scalar:
        """Largest coefficient of a difference state; the first nonzero one in exact modes."""
        if self.ctx.is_exact:
            for _, c in state.items():
                return c
            return 0
        return max((abs(c) for _, c in state.items()), default=0.0)

    def compare(self, residual: Scalar, detail: str, failures: List[CheckFailure]) -> None:
        if not self.ctx.is_zero(residual):
            outputmanager.debug(self.name, "failed at", detail, "residual", residual)
            failures.append(CheckFailure(self.name, detail, residual))

    @abstractmethod
    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        pass
