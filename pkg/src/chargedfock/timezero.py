import csv
from dataclasses import dataclass, field
from typing import Dict, List, TextIO, Tuple
from chargedfock.fockstate import FockState, TensorState, accumulate, inner_product, norm_sq
from chargedfock.scalar import Scalar, format_decimal
from chargedfock.truncation import Truncation
from chargedfock.vertex import vacuum_mode_norm_sq_series, y_column


class TimeZeroMode:
    """
    Psi_{alpha,m} = sum_t Y_{alpha,t} (x) Y_{alpha,t-m}: in level shifts, the
    pairs (delta_L, delta_L + m). The symmetrized mode adds the -alpha part.
    """
    def __init__(self, alpha: Scalar, m: int, symmetrized: bool = False):
        self.alpha: Scalar = alpha
        self.m: int = m
        self.symmetrized: bool = symmetrized

    def charges(self) -> List[Scalar]:
        if self.symmetrized:
            return [self.alpha, -self.alpha]
        return [self.alpha]

    def adjoint(self) -> "TimeZeroMode":
        # Psi_{alpha,m}^* = Psi_{-alpha,-m}; the symmetrized mode maps to itself at -m
        if self.symmetrized:
            return TimeZeroMode(self.alpha, -self.m, True)
        return TimeZeroMode(-self.alpha, -self.m, False)

    def __repr__(self):
        sym = ", sym" if self.symmetrized else ""
        return f"TimeZeroMode({self.alpha}, {self.m}{sym})"


@dataclass
class TailReport:
    """Norm^2 of every included band, keyed by the left level shift."""
    bands: List[Tuple[int, Scalar]] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.bands)

    @property
    def last_band_norm_sq(self) -> Scalar:
        if not self.bands:
            return 0
        return self.bands[-1][1]

    def float_bands(self) -> List[Tuple[int, float]]:
        return [(n, float(abs(complex(v)))) for n, v in self.bands]


def _accumulate_part(alpha: Scalar, m: int, v: TensorState, trunc: Truncation,
                     bands: Dict[int, Dict]) -> bool:
    steps = trunc.charge_steps(alpha)
    overflow = False
    for (j, left, right), c in v.items():
        target_j = j + steps
        if not trunc.contains_sector(target_j):
            overflow = True
            continue
        right_column = y_column(alpha, right, trunc.level_cutoff)
        for delta, left_terms in y_column(alpha, left, trunc.level_cutoff).items():
            right_terms = right_column.get(delta + m)
            if not right_terms:
                continue
            entries = bands.setdefault(delta, {})
            for ql, cl in left_terms:
                for qr, cr in right_terms:
                    accumulate(entries, (target_j, ql, qr), c * cl * cr)
    return overflow


def apply_time_zero(mode: TimeZeroMode, v: TensorState, trunc: Truncation) -> Tuple[TensorState, TailReport]:
    """
    Partial sum of the mode over every band reachable inside the truncation.
    Dropped bands are accounted for in the tail report, not in the overflow flag.
    """
    if not isinstance(v, TensorState):
        raise ValueError(f"apply_time_zero acts on the diagonal-charge space, got {type(v).__name__}")
    bands: Dict[int, Dict] = {}
    overflow = v.overflow
    for alpha in mode.charges():
        overflow = _accumulate_part(alpha, mode.m, v, trunc, bands) or overflow
    result = TensorState(overflow=overflow)
    report = TailReport()
    for delta in sorted(bands):
        band = TensorState(bands[delta])
        report.bands.append((delta, norm_sq(band)))
        result = result + band
    return result, report


def adjoint_residual(mode: TimeZeroMode, v: TensorState, w: TensorState, trunc: Truncation) -> Scalar:
    """<Psi v, w> - <v, Psi^* w>; exact band by band inside the truncation."""
    left, _ = apply_time_zero(mode, v, trunc)
    right, _ = apply_time_zero(mode.adjoint(), w, trunc)
    return inner_product(left, w) - inner_product(v, right)


def partial_sum_norm_series(alpha: Scalar, m: int, n_max: int) -> List[Scalar]:
    """
    S_N = sum_{n<=N} ||Y(n) Omega||^2 ||Y(n+m) Omega||^2 (vacuum bands). The list
    holds n_max + 1 entries so that sums[N] is S_N; sums[0] is the band-0 term
    alone, ahead of the S_1..S_{n_max} series.
    """
    norms = vacuum_mode_norm_sq_series(alpha, n_max + max(m, 0))
    sums = []
    total = 0
    for n in range(n_max + 1):
        if n + m >= 0:
            total = total + norms[n] * norms[n + m]
        sums.append(total)
    return sums


def vacuum_band_norms(alpha: Scalar, m: int, n_max: int) -> List[Tuple[int, Scalar]]:
    norms = vacuum_mode_norm_sq_series(alpha, n_max + max(m, 0))
    return [(n, norms[n] * norms[n + m]) for n in range(max(0, -m), n_max + 1)]


def flip(v: TensorState) -> TensorState:
    return TensorState({(j, right, left): c for (j, left, right), c in v.items()}, v.overflow)


def sign_automorphism(v: FockState, trunc: Truncation = None) -> FockState:
    """
    J_m -> -J_m, J_0 included: (j, parts) -> (-j, parts) with sign (-1)^{#parts}.
    A truncation with an asymmetric window drops and flags what falls outside.
    """
    entries = {}
    overflow = v.overflow
    for key, c in v.items():
        j = -key[0]
        if trunc is not None and not trunc.contains_sector(j):
            overflow = True
            continue
        parts = sum(len(p) for p in key[1:])
        entries[(j,) + key[1:]] = -c if parts % 2 else c
    return type(v)(entries, overflow)


def export_convergence_study(alpha: Scalar, m: int, n_max: int, fp: TextIO, digits: int = 30) -> None:
    """CSV: band, band_norm_sq, partial_sum for the vacuum bands."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["band", "band_norm_sq", "partial_sum"])
    total = 0
    for n, value in vacuum_band_norms(alpha, m, n_max):
        total = total + value
        writer.writerow([n, format_decimal(value, digits), format_decimal(total, digits)])

