from typing import Callable, List
from chargedfock.fockstate import TensorState, inner_product
from chargedfock.partition import partitions_up_to
from chargedfock.relationabstractcheck import CheckFailure, RelationAbstractCheck
from chargedfock.scalar import Scalar, ScalarContext, imag_part
from chargedfock.timezero import (TimeZeroMode, apply_time_zero, flip, sign_automorphism,
                                  vacuum_band_norms)
from chargedfock.truncation import Truncation


class TimeZeroCheck(RelationAbstractCheck):
    """
    Band-exact identities of the time-zero modes: vacuum band norms, flip and
    sign covariance, the adjoint relation and reality of matrix elements.
    """
    def __init__(self, ctx: ScalarContext, alpha: Scalar, m_max: int = 2, max_level: int = 2):
        super().__init__("TimeZeroCheck", ctx)
        self.alpha: Scalar = alpha
        self.m_max: int = m_max
        self.max_level: int = max_level

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        a = self.alpha
        steps = trunc.charge_steps(a)
        if not (trunc.contains_sector(steps) and trunc.contains_sector(-steps) and trunc.contains_sector(0)):
            self.vacuous(trunc, "charge window does not hold sectors 0 and +-alpha")
            return failures
        vacuum = TensorState.vacuum(0)
        modes = range(-self.m_max, self.m_max + 1)
        for m in modes:
            image, report = apply_time_zero(TimeZeroMode(a, m), vacuum, trunc)
            expected = dict(vacuum_band_norms(a, m, trunc.level_cutoff - max(m, 0)))
            self.compare(report.depth - len(expected), f"vacuum band count of Psi_{m}", failures)
            for band, value in report.bands:
                self.compare(value - expected.get(band, 0), f"vacuum band {band} of Psi_{m}", failures)
            for symmetrized in (False, True):
                lhs, _ = apply_time_zero(TimeZeroMode(a, m, symmetrized), vacuum, trunc)
                rhs, _ = apply_time_zero(TimeZeroMode(a, -m, symmetrized), vacuum, trunc)
                self.compare(self.state_residual(flip(lhs) - rhs), f"flip Psi_{m} (sym={symmetrized})", failures)
            if self.ctx.is_exact:
                for _, c in image.items():
                    self.compare(imag_part(c), f"reality of Psi_{m}", failures)

        top = min(self.max_level, trunc.level_cutoff)
        basis = [TensorState({(0, left, right): 1}) for left in partitions_up_to(top) for right in partitions_up_to(top)]
        shifted = [TensorState({(steps, left, right): 1}) for left in partitions_up_to(top) for right in partitions_up_to(top)]
        for m in modes:
            mode = TimeZeroMode(a, m)
            pulled = [apply_time_zero(mode.adjoint(), w, trunc)[0] for w in shifted]
            for v in basis:
                image = apply_time_zero(mode, v, trunc)[0]
                lhs = sign_automorphism(image, trunc)
                rhs = apply_time_zero(TimeZeroMode(-a, m), sign_automorphism(v, trunc), trunc)[0]
                self.compare(self.state_residual(lhs - rhs), f"sign covariance of Psi_{m} on {v}", failures)
                for w, back in zip(shifted, pulled):
                    residual = inner_product(image, w) - inner_product(v, back)
                    self.compare(residual, f"<Psi_{m} {v}, {w}> adjoint", failures)
        if callback:
            callback(self.name, len(failures), "")
        return failures
