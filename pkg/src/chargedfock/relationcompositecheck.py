from typing import Callable, List
from chargedfock.relationabstractcheck import CheckFailure, RelationAbstractCheck
from chargedfock.scalar import Scalar, ScalarContext
from chargedfock.truncation import Truncation


class RelationCompositeCheck(RelationAbstractCheck):
    def __init__(self, checks: List[RelationAbstractCheck], ctx: ScalarContext):
        super().__init__("RelationCompositeCheck", ctx)
        self.checks: List[RelationAbstractCheck] = checks

    def add_check(self, check: RelationAbstractCheck) -> None:
        self.checks.append(check)

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        for check in self.checks:
            failures.extend(check.get_failures(trunc, callback=callback))
            self.warnings.extend(w for w in check.warnings if w not in self.warnings)
        if callback:
            callback(self.name, len(failures), "failures")
        return failures
