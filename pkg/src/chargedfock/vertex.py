import csv
from functools import lru_cache
from typing import Dict, List, TextIO, Tuple
import numpy as np
from chargedfock.fockstate import FockState, SectorState, accumulate
from chargedfock.heisenberg import current_on_partition
from chargedfock.partition import EMPTY, Partition, annihilations, level, merge, partitions_of, z_factor
from chargedfock.scalar import Scalar, imag_part, real_part
from chargedfock.truncation import Truncation, as_integer
from chargedfock.utils import outputmanager


PLUS = "+"
MINUS = "-"

# level k -> ((mu, coef), ...) meaning sum coef * J_{-+mu_1} ... J_{-+mu_r} z^{-+k}
ECoefficientTable = Dict[int, Tuple[Tuple[Partition, Scalar], ...]]

# delta -> ((target partition, coef), ...)
YColumn = Dict[int, Tuple[Tuple[Partition, Scalar], ...]]


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3g})")
        self.residual: float = residual


def conformal_dimension(alpha: Scalar) -> Scalar:
    return alpha * alpha / 2


@lru_cache(maxsize=None)
def _e_table(sign: str, alpha: Scalar, level_cutoff: int) -> ECoefficientTable:
    # exp(sum_n p_n x^n / n) = sum_mu p_mu x^|mu| / z_mu with p_n = -+alpha J_{+-n}
    weight = alpha if sign == MINUS else -alpha
    table = {}
    for k in range(level_cutoff + 1):
        table[k] = tuple((mu, weight ** len(mu) / z_factor(mu)) for mu in partitions_of(k))
    return table


def expand_E(sign: str, alpha: Scalar, trunc: Truncation) -> ECoefficientTable:
    """
    Coefficients of E^{sign}(alpha, z) = exp(-+ sum_{n>0} alpha J_{+-n} z^{-+n} / n),
    graded by the total level shift k <= level_cutoff.
    """
    if sign not in (PLUS, MINUS):
        raise ValueError(f"sign must be {PLUS!r} or {MINUS!r}")
    return _e_table(sign, alpha, trunc.level_cutoff)


@lru_cache(maxsize=None)
def y_column(alpha: Scalar, p: Partition, level_cutoff: int) -> YColumn:
    """
    Y_alpha(z) on J_{-p} Omega up to the charge shift: E^+ contracts a
    sub-multiset mu of p, E^- appends a partition nu, delta = |nu| - |mu|.
    """
    e_minus = _e_table(MINUS, alpha, level_cutoff)
    ell = level(p)
    by_delta: Dict[int, Dict[Partition, Scalar]] = {}
    for mu, rest, contraction in annihilations(p):
        plus_coef = (-alpha) ** len(mu) * contraction / z_factor(mu)
        rest_level = ell - level(mu)
        for k in range(level_cutoff - rest_level + 1):
            delta = k - level(mu)
            target = by_delta.setdefault(delta, {})
            for nu, minus_coef in e_minus[k]:
                accumulate(target, merge(rest, nu), plus_coef * minus_coef)
    column = {}
    for delta, target in by_delta.items():
        column[delta] = tuple((q, c) for q, c in target.items() if c != 0)
    return column


def apply_Y_mode(alpha: Scalar, delta: int, v: SectorState, trunc: Truncation) -> SectorState:
    """
    Level-(l + delta) component, in sector beta + alpha, of Y_alpha(z) v,
    i.e. the mode Y_{alpha, s} with s = -alpha*beta - d - delta.
    """
    steps = trunc.charge_steps(alpha)
    entries = {}
    overflow = v.overflow
    for (j, p), c in v.items():
        target_j = j + steps
        if level(p) + delta > trunc.level_cutoff or not trunc.contains_sector(target_j):
            overflow = True
            continue
        for q, coef in y_column(alpha, p, trunc.level_cutoff).get(delta, ()):
            accumulate(entries, (target_j, q), coef * c)
    return SectorState(entries, overflow)


@lru_cache(maxsize=None)
def y_matrix_element(alpha: Scalar, bra: Partition, delta: int, ket: Partition) -> Scalar:
    """
    <J_{-bra} Omega_{beta+alpha}, Y(delta) J_{-ket} Omega_beta> from
    [J_m, Y(delta)] = alpha Y(delta - m) alone, anchored at <Omega, Y(0) Omega> = 1.
    """
    if level(bra) != level(ket) + delta:
        return 0
    if bra:
        k, rest = bra[0], bra[1:]
        total = alpha * y_matrix_element(alpha, rest, delta - k, ket)
        image = current_on_partition(k, ket)
        if image is not None:
            q, coef = image
            total = total + coef * y_matrix_element(alpha, rest, delta, q)
        return total
    if ket:
        k, rest = ket[0], ket[1:]
        return -alpha * y_matrix_element(alpha, EMPTY, delta + k, rest)
    return 1 if delta == 0 else 0


def apply_Y_mode_recursive(alpha: Scalar, delta: int, v: SectorState, trunc: Truncation) -> SectorState:
    steps = trunc.charge_steps(alpha)
    entries = {}
    overflow = v.overflow
    for (j, p), c in v.items():
        target_level = level(p) + delta
        target_j = j + steps
        if target_level > trunc.level_cutoff or not trunc.contains_sector(target_j):
            overflow = True
            continue
        if target_level < 0:
            continue
        for q in partitions_of(target_level):
            element = y_matrix_element(alpha, q, delta, p)
            if element != 0:
                accumulate(entries, (target_j, q), element * c / z_factor(q))
    return SectorState(entries, overflow)


def vacuum_mode_norm_sq(alpha: Scalar, n: int) -> Scalar:
    """||Y_{alpha,-n-d} Omega||^2 = prod_{k<n} (2d + k) / n!."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return vacuum_mode_norm_sq_series(alpha, n)[n]


def vacuum_mode_norm_sq_series(alpha: Scalar, n_max: int) -> List[Scalar]:
    two_d = alpha * alpha
    values = [two_d ** 0]
    for n in range(1, n_max + 1):
        values.append(values[-1] * (two_d + n - 1) / n)
    return values


def mode_index(alpha: Scalar, delta: int, j: int, trunc: Truncation) -> Scalar:
    """Real mode index s of the delta-shift on sector j: s = -alpha*beta - d - delta."""
    return -alpha * trunc.charge(j) - conformal_dimension(alpha) - delta


def delta_of(alpha: Scalar, s: Scalar, j: int, trunc: Truncation) -> int:
    try:
        return as_integer(-alpha * trunc.charge(j) - conformal_dimension(alpha) - s)
    except ValueError as e:
        raise ValueError(f"Y_{{alpha,{s}}} vanishes on sector {j}: s not in Z - alpha*beta - d") from e


def charge_shift(alpha: Scalar, v: FockState, trunc: Truncation) -> FockState:
    """c_alpha; on tensor states it shifts both factors."""
    steps = trunc.charge_steps(alpha)
    entries = {}
    overflow = v.overflow
    for key, c in v.items():
        target_j = key[0] + steps
        if not trunc.contains_sector(target_j):
            overflow = True
            continue
        entries[(target_j,) + key[1:]] = c
    return type(v)(entries, overflow)


def mode_block(alpha: Scalar, delta: int, source_level: int, trunc: Truncation
               ) -> Tuple[List[Partition], List[Partition], Dict[Tuple[int, int], Scalar]]:
    """Sparse matrix of Y(delta) from one source level, in the monomial basis."""
    sources = list(partitions_of(source_level))
    targets = list(partitions_of(source_level + delta))
    index = {q: i for i, q in enumerate(targets)}
    matrix = {}
    for col, p in enumerate(sources):
        for q, coef in y_column(alpha, p, trunc.level_cutoff).get(delta, ()):
            matrix[(index[q], col)] = coef
    return sources, targets, matrix


def _block_levels(delta: int, trunc: Truncation) -> List[int]:
    return [ell for ell in range(trunc.level_cutoff + 1) if 0 <= ell + delta <= trunc.level_cutoff]


def _power_iteration(a: np.ndarray, tolerance: float, max_iterations: int) -> float:
    ata = a.conj().T @ a
    x = np.ones(ata.shape[0]) / np.sqrt(ata.shape[0])
    sigma_sq = 0.0
    residual = float("inf")
    for _ in range(max_iterations):
        y = ata @ x
        sigma_sq = float(np.real(np.vdot(x, y)))
        residual = float(np.linalg.norm(y - sigma_sq * x))
        if residual <= tolerance * max(sigma_sq, 1.0):
            return sigma_sq
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0
        x = y / norm
    raise ConvergenceError("power iteration did not converge", residual)


def truncated_mode_norm(alpha: Scalar, delta: int, trunc: Truncation,
                        tolerance: float = 1e-12, max_iterations: int = 100000) -> float:
    """
    Operator norm of the compression of Y(delta) to the truncation, in the
    Gram-weighted (orthonormal) basis. Y(delta) is block diagonal by level.
    """
    largest = 0.0
    for ell in _block_levels(delta, trunc):
        sources, targets, matrix = mode_block(alpha, delta, ell, trunc)
        a = np.zeros((len(targets), len(sources)), dtype=complex)
        for (row, col), coef in matrix.items():
            weight = np.sqrt(z_factor(targets[row]) / z_factor(sources[col]))
            a[row, col] = complex(coef) * weight
        sigma_sq = _power_iteration(a, tolerance, max_iterations)
        outputmanager.debug("truncated_mode_norm: level", ell, "delta", delta, "sigma^2", sigma_sq)
        largest = max(largest, float(np.sqrt(sigma_sq)))
    return largest


def _format_partition(p: Partition) -> str:
    return " ".join(str(i) for i in p)


def export_mode_block(alpha: Scalar, delta: int, trunc: Truncation, fp: TextIO, to_string=str) -> None:
    """CSV: source_level, source_partition, target_partition, re, im."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["source_level", "source_partition", "target_partition", "re", "im"])
    for ell in _block_levels(delta, trunc):
        sources, targets, matrix = mode_block(alpha, delta, ell, trunc)
        for (row, col), coef in sorted(matrix.items(), key=lambda item: (item[0][1], item[0][0])):
            writer.writerow([ell, _format_partition(sources[col]), _format_partition(targets[row]),
                             to_string(real_part(coef)), to_string(imag_part(coef))])

