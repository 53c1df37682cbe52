from typing import Callable, Iterator, List, Sequence, Tuple
from chargedfock.fockstate import SectorState, inner_product, norm_sq
from chargedfock.heisenberg import apply_J
from chargedfock.partition import Partition, level, partitions_of, partitions_up_to
from chargedfock.relationabstractcheck import BUDGET, CheckFailure, RelationAbstractCheck
from chargedfock.scalar import Scalar, ScalarContext, to_float
from chargedfock.truncation import Truncation
from chargedfock.vertex import (ConvergenceError, apply_Y_mode, apply_Y_mode_recursive, conformal_dimension,
                                mode_index, truncated_mode_norm, vacuum_mode_norm_sq)
from chargedfock.virasoro import SUGAWARA_NORMALIZATION, apply_L


def charged_sectors(trunc: Truncation, alpha: Scalar, sectors: Sequence[int] = None, reach: int = 2) -> List[int]:
    """Sectors j with j and j + alpha/alpha0 both inside the window."""
    steps = trunc.charge_steps(alpha)
    candidates = trunc.sectors() if sectors is None else sectors
    return [j for j in candidates
            if trunc.contains_sector(j) and trunc.contains_sector(j + steps) and (sectors is not None or abs(j) <= reach)]


def covariance_cells(trunc: Truncation, m_max: int) -> Iterator[Tuple[Partition, int, int]]:
    """(source partition, m, delta) with every intermediate level of the commutator inside L."""
    cutoff = trunc.level_cutoff
    for p in partitions_up_to(cutoff - m_max):
        ell = level(p)
        for m in range(-m_max, m_max + 1):
            for delta in range(-ell - m_max, cutoff - ell + 1):
                if ell + delta <= cutoff and ell - m <= cutoff and ell + delta - m <= cutoff:
                    yield p, m, delta


class _ChargedCheck(RelationAbstractCheck):
    def __init__(self, name: str, ctx: ScalarContext, alpha: Scalar, sectors: Sequence[int] = None):
        super().__init__(name, ctx)
        self.alpha: Scalar = alpha
        self.sectors: Sequence[int] = sectors

    def finish(self, failures: List[CheckFailure], callback, msg: str = "") -> List[CheckFailure]:
        if callback:
            callback(self.name, len(failures), msg)
        return failures


class CurrentCovarianceCheck(_ChargedCheck):
    """[J_m, Y(delta)] = alpha Y(delta - m)."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, m_max: int = 6, sectors: Sequence[int] = None):
        super().__init__("CurrentCovarianceCheck", ctx, alpha, sectors)
        self.m_max: int = m_max

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        if trunc.level_cutoff < self.m_max:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures
        a = self.alpha
        for j in charged_sectors(trunc, a, self.sectors):
            for p, m, delta in covariance_cells(trunc, self.m_max):
                v = SectorState({(j, p): 1})
                lhs = apply_J(m, apply_Y_mode(a, delta, v, trunc), trunc) - apply_Y_mode(a, delta, apply_J(m, v, trunc), trunc)
                rhs = apply_Y_mode(a, delta - m, v, trunc) * a
                self.compare(self.state_residual(lhs - rhs), f"[J_{m}, Y(delta={delta})] on {v}", failures)
        return self.finish(failures, callback)


class PrimaryCovarianceCheck(_ChargedCheck):
    """[L_m, Y_s] = ((d - 1)m - s) Y_{m+s}, s the mode index of delta on the source sector."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, m_max: int = 3, sectors: Sequence[int] = None,
                 normalization: Scalar = SUGAWARA_NORMALIZATION):
        super().__init__("PrimaryCovarianceCheck", ctx, alpha, sectors)
        self.m_max: int = m_max
        self.normalization: Scalar = normalization

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        if trunc.level_cutoff < self.m_max:
            self.vacuous(trunc, f"|m| <= {self.m_max}")
            return failures
        a = self.alpha
        d = conformal_dimension(a)
        for j in charged_sectors(trunc, a, self.sectors):
            for p, m, delta in covariance_cells(trunc, self.m_max):
                v = SectorState({(j, p): 1})
                lhs = (apply_L(m, apply_Y_mode(a, delta, v, trunc), trunc, self.normalization)
                       - apply_Y_mode(a, delta, apply_L(m, v, trunc, self.normalization), trunc))
                s = mode_index(a, delta, j, trunc)
                rhs = apply_Y_mode(a, delta - m, v, trunc) * ((d - 1) * m - s)
                self.compare(self.state_residual(lhs - rhs), f"[L_{m}, Y(delta={delta})] on {v}", failures)
        return self.finish(failures, callback)


class OracleEquivalenceCheck(_ChargedCheck):
    """Expansion and commutator recursion give the same Y-mode matrix elements."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, sectors: Sequence[int] = (0, 1)):
        super().__init__("OracleEquivalenceCheck", ctx, alpha, sectors)

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        a = self.alpha
        sectors = charged_sectors(trunc, a, self.sectors)
        if not sectors:
            self.vacuous(trunc, "no sector with a shifted image in the window")
        for j in sectors:
            for p in partitions_up_to(trunc.level_cutoff):
                v = SectorState({(j, p): 1})
                ell = level(p)
                for delta in range(-ell, trunc.level_cutoff - ell + 1):
                    diff = apply_Y_mode(a, delta, v, trunc) - apply_Y_mode_recursive(a, delta, v, trunc)
                    self.compare(self.state_residual(diff), f"Y(delta={delta}) on {v}", failures)
        return self.finish(failures, callback)


class VacuumNormCheck(_ChargedCheck):
    """||Y(n) Omega||^2 = prod_{k<n} (2d + k) / n! for n <= min(L, n_max)."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, n_max: int = 30):
        super().__init__("VacuumNormCheck", ctx, alpha)
        self.n_max: int = n_max

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        a = self.alpha
        if not charged_sectors(trunc, a, [0]):
            self.vacuous(trunc, "sector 0 cannot be shifted")
            return failures
        omega = SectorState.vacuum(0)
        for n in range(min(trunc.level_cutoff, self.n_max) + 1):
            residual = norm_sq(apply_Y_mode(a, n, omega, trunc)) - vacuum_mode_norm_sq(a, n)
            self.compare(residual, f"n={n}", failures)
        return self.finish(failures, callback)


class YAdjointCheck(_ChargedCheck):
    """<Y(alpha, delta) v, w> = <v, Y(-alpha, -delta) w>."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, max_level: int = 5, sectors: Sequence[int] = None):
        super().__init__("YAdjointCheck", ctx, alpha, sectors)
        self.max_level: int = max_level

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        a = self.alpha
        steps = trunc.charge_steps(a)
        top = min(trunc.level_cutoff, self.max_level)
        for j in charged_sectors(trunc, a, self.sectors):
            for p in partitions_up_to(top):
                v = SectorState({(j, p): 1})
                ell = level(p)
                for delta in range(-ell, top - ell + 1):
                    image = apply_Y_mode(a, delta, v, trunc)
                    for q in partitions_of(ell + delta):
                        w = SectorState({(j + steps, q): 1})
                        residual = inner_product(image, w) - inner_product(v, apply_Y_mode(-a, -delta, w, trunc))
                        self.compare(residual, f"<Y(delta={delta}) {v}, {w}>", failures)
        return self.finish(failures, callback)


class EnergyBoundCheck(_ChargedCheck):
    """Compressed mode blocks have operator norm <= 1 for |alpha| <= 1."""
    def __init__(self, ctx: ScalarContext, alpha: Scalar, delta_max: int = 6, tolerance: float = 1e-9):
        super().__init__("EnergyBoundCheck", ctx, alpha)
        self.delta_max: int = delta_max
        self.tolerance: float = tolerance

    def get_failures(self, trunc: Truncation,
                     callback: Callable[[str, Scalar, str], None] = None) -> List[CheckFailure]:
        failures = []
        if abs(to_float(self.alpha)) > 1:
            self.warnings.append(f"{self.name}: |alpha| > 1, nothing asserted")
            return self.finish(failures, callback, "skipped")
        reach = min(self.delta_max, trunc.level_cutoff)
        worst = 0.0
        for delta in range(-reach, reach + 1):
            try:
                value = truncated_mode_norm(self.alpha, delta, trunc)
            except ConvergenceError as e:
                failures.append(CheckFailure(self.name, f"delta={delta}: {e}", e.residual, BUDGET))
                continue
            worst = max(worst, value)
            if value > 1 + self.tolerance:
                failures.append(CheckFailure(self.name, f"delta={delta}", value - 1, BUDGET))
        return self.finish(failures, callback, f"max norm {worst:.12g}")
