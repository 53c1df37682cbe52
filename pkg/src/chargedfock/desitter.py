import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple
import sympy
from chargedfock.diagnostics import SAFETY_FACTOR, band_tail_budget, loglog_slope
from chargedfock.fockstate import TensorState, inner_product
from chargedfock.heisenberg import LEFT, RIGHT
from chargedfock.partition import level
from chargedfock.scalar import EXACT_RATIONAL, Scalar, ScalarContext, abs2, conj, imag_part, real_part
from chargedfock.timezero import TailReport, TimeZeroMode, apply_time_zero, vacuum_band_norms
from chargedfock.truncation import Truncation
from chargedfock.utils import outputmanager
from chargedfock.virasoro import ChiralTerms, apply_chiral_terms, chiral_adjoint
from chargedfock.vertex import conformal_dimension


LORENTZ = "lorentz"
VIRASORO_C0 = "virasoro_c0"
D_HALF = "d_half"
FAMILIES = (LORENTZ, VIRASORO_C0, D_HALF)

PASS = "pass"
FAIL = "fail"
BUDGET_EXCEEDED = "budget-exceeded"

TensorPair = Tuple[TensorState, TensorState]


class GeneratorParts:
    """
    chiral part + field_coefficient * (symmetrized time-zero mode); the form
    every perturbed generator and its analytic adjoint take.
    """
    def __init__(self, chiral: ChiralTerms, field_coefficient: Scalar, field_mode: TimeZeroMode):
        self.chiral: ChiralTerms = chiral
        self.field_coefficient: Scalar = field_coefficient
        self.field_mode: TimeZeroMode = field_mode

    def adjoint(self) -> "GeneratorParts":
        return GeneratorParts(chiral_adjoint(self.chiral),
                              conj(self.field_coefficient),
                              self.field_mode.adjoint())

    def has_field(self) -> bool:
        return self.field_coefficient != 0

    def level_shift(self) -> int:
        return max((abs(n) for _, n, _ in self.chiral), default=0)

    def apply_chiral(self, v: TensorState, trunc: Truncation) -> TensorState:
        return apply_chiral_terms(self.chiral, v, trunc)

    def apply_field(self, v: TensorState, trunc: Truncation) -> Tuple[TensorState, TailReport]:
        if not self.has_field():
            return TensorState(), TailReport()
        image, report = apply_time_zero(self.field_mode, v, trunc)
        return image * self.field_coefficient, report

    def field_tail(self, report: TailReport) -> float:
        if not self.has_field():
            return 0.0
        return band_tail_budget(report.float_bands()) * float(abs2(self.field_coefficient))


class PerturbedGenerator(GeneratorParts):
    """
    lorentz:     G_{+-1} = L_{+-1} (x) 1 + 1 (x) L_{-+1} + lambda Psi_{+-1},  G_0 = L_0 (x) 1 - 1 (x) L_0
    virasoro_c0: V_m = L_m (x) 1 - 1 (x) L_{-m} + i lambda m Psi_m
    d_half:      W_m = L_m (x) 1 - 1 (x) L_{-m} + lambda Psi_m
    Psi is the symmetrized time-zero mode of charge alpha.
    """
    def __init__(self, family: str, m: int, lam: Scalar, alpha: Scalar, ctx: ScalarContext):
        if family not in FAMILIES:
            raise ValueError(f"Unknown generator family: {family}")
        if family == LORENTZ and m not in (-1, 0, 1):
            raise ValueError(f"lorentz generators have m in {{-1, 0, 1}}, got {m}")
        self.family: str = family
        self.m: int = m
        self.lam: Scalar = lam
        self.alpha: Scalar = alpha
        self.ctx: ScalarContext = ctx
        super().__init__(self._chiral_terms(), self._field_coefficient(), TimeZeroMode(alpha, m, True))

    def _chiral_terms(self) -> ChiralTerms:
        one = self.ctx.one()
        if self.family == LORENTZ and self.m != 0:
            return [(LEFT, self.m, one), (RIGHT, -self.m, one)]
        return [(LEFT, self.m, one), (RIGHT, -self.m, -one)]

    def _field_coefficient(self) -> Scalar:
        if self.lam == 0:
            return self.ctx.zero()
        if self.family == LORENTZ:
            return self.lam if self.m != 0 else self.ctx.zero()
        if self.family == VIRASORO_C0:
            if self.m == 0:
                return self.ctx.zero()
            return self.ctx.imaginary_unit() * self.lam * self.m
        return self.lam

    def bracket_target(self, other: "PerturbedGenerator") -> Tuple[int, "PerturbedGenerator"]:
        """[A_m, B_n] = (m - n) family_{m+n}; (0, None) when the bracket vanishes."""
        k = self.m - other.m
        if k == 0:
            return 0, None
        return k, PerturbedGenerator(self.family, self.m + other.m, self.lam, self.alpha, self.ctx)

    def __repr__(self):
        return f"PerturbedGenerator({self.family!r}, m={self.m}, lambda={self.lam}, alpha={self.alpha})"


@dataclass
class WeakCommutator:
    """
    <A* P1, B P2> - <B* P1, A P2> split by perturbation order: ll (chiral-chiral),
    mixed (linear in the field), psipsi (quadratic). Only psipsi depends on the
    dropped bands; tail_budget bounds that dependence.
    """
    ll: Scalar
    mixed: Scalar
    psipsi: Scalar
    tail_budget: float

    @property
    def value(self) -> Scalar:
        return self.ll + self.mixed + self.psipsi


def _sectors_reachable(v: TensorState, parts: Sequence[GeneratorParts], trunc: Truncation) -> bool:
    for g in parts:
        if not g.has_field():
            continue
        for alpha in g.field_mode.charges():
            steps = trunc.charge_steps(alpha)
            if any(not trunc.contains_sector(j + steps) for j, _, _ in v.keys()):
                return False
    return True


def check_interior(v: TensorState, trunc: Truncation, interior_buffer: int,
                   parts: Sequence[GeneratorParts] = ()) -> None:
    top = trunc.level_cutoff - interior_buffer
    for j, left, right in v.keys():
        if not trunc.contains_sector(j) or max(level(left), level(right)) > top:
            raise ValueError(f"Test vector component {(j, left, right)} is not interior "
                             f"(L={trunc.level_cutoff}, buffer={interior_buffer})")
    if not _sectors_reachable(v, parts, trunc):
        raise ValueError("Test vector sits too close to the charge window for the field charge")


def _cross(t1: float, t2: float) -> float:
    if t1 == 0 or t2 == 0:
        return 0.0
    return math.sqrt(t1 * t2)


def weak_commutator(a: GeneratorParts, b: GeneratorParts, phi1: TensorState, phi2: TensorState,
                    trunc: Truncation, interior_buffer: int = None) -> WeakCommutator:
    buffer = max(a.level_shift(), b.level_shift()) if interior_buffer is None else interior_buffer
    if buffer < max(a.level_shift(), b.level_shift()):
        raise ValueError(f"interior_buffer {buffer} is below the generator level shift")
    check_interior(phi1, trunc, buffer, (a, b))
    check_interior(phi2, trunc, buffer, (a, b))

    a_star = a.adjoint()
    b_star = b.adjoint()
    x_l = a_star.apply_chiral(phi1, trunc)
    y_l = b.apply_chiral(phi2, trunc)
    u_l = b_star.apply_chiral(phi1, trunc)
    w_l = a.apply_chiral(phi2, trunc)
    x_f, rx = a_star.apply_field(phi1, trunc)
    y_f, ry = b.apply_field(phi2, trunc)
    u_f, ru = b_star.apply_field(phi1, trunc)
    w_f, rw = a.apply_field(phi2, trunc)

    ll = inner_product(x_l, y_l) - inner_product(u_l, w_l)
    mixed = (inner_product(x_l, y_f) + inner_product(x_f, y_l)
             - inner_product(u_l, w_f) - inner_product(u_f, w_l))
    psipsi = inner_product(x_f, y_f) - inner_product(u_f, w_f)
    budget = SAFETY_FACTOR * (_cross(a_star.field_tail(rx), b.field_tail(ry))
                              + _cross(b_star.field_tail(ru), a.field_tail(rw)))
    return WeakCommutator(ll, mixed, psipsi, budget)


def field_weak_commutator(alpha_a: Scalar, alpha_b: Scalar, m: int, n: int,
                          phi1: TensorState, phi2: TensorState, trunc: Truncation,
                          interior_buffer: int = 0) -> WeakCommutator:
    """Weak commutator of the symmetrized modes Psi_{alpha_a,m} and Psi_{alpha_b,n}."""
    a = GeneratorParts([], 1, TimeZeroMode(alpha_a, m, True))
    b = GeneratorParts([], 1, TimeZeroMode(alpha_b, n, True))
    return weak_commutator(a, b, phi1, phi2, trunc, interior_buffer)


@dataclass
class RelationResidual:
    ll: Scalar
    mixed: Scalar
    psipsi: Scalar
    tail_budget: float

    @property
    def value(self) -> Scalar:
        return self.ll + self.mixed + self.psipsi


def relation_residual(a: PerturbedGenerator, b: PerturbedGenerator, phi1: TensorState, phi2: TensorState,
                      trunc: Truncation, interior_buffer: int) -> RelationResidual:
    """weak_commutator(A, B) - <P1, (m - n) family_{m+n} P2>, split as in WeakCommutator."""
    wc = weak_commutator(a, b, phi1, phi2, trunc, interior_buffer)
    k, target = a.bracket_target(b)
    target_ll = 0
    target_field = 0
    if target is not None:
        target_ll = k * inner_product(phi1, target.apply_chiral(phi2, trunc))
        image, _ = target.apply_field(phi2, trunc)
        target_field = k * inner_product(phi1, image)
    return RelationResidual(wc.ll - target_ll, wc.mixed - target_field, wc.psipsi, wc.tail_budget)


def verdict(residual: RelationResidual, ctx: ScalarContext) -> str:
    if not ctx.is_zero(residual.ll) or not ctx.is_zero(residual.mixed):
        return FAIL
    if not ctx.within(residual.psipsi, residual.tail_budget):
        return BUDGET_EXCEEDED
    return PASS


def _budget_str(budget: float) -> str:
    return "inf" if math.isinf(budget) else repr(budget)


def relation_record(family: str, m: int, n: int, lam: Scalar, alpha: Scalar, trunc: Truncation,
                    buffer: int, pair: int, residual: RelationResidual, ctx: ScalarContext) -> Dict:
    value = residual.value
    return {
        "family": family,
        "m": m,
        "n": n,
        "lambda": ctx.to_string(lam),
        "alpha": ctx.to_string(alpha),
        "L": trunc.level_cutoff,
        "buffer": buffer,
        "pair": pair,
        "residual_re": ctx.to_string(real_part(value)),
        "residual_im": ctx.to_string(imag_part(value)),
        "tail_budget": _budget_str(residual.tail_budget),
        "verdict": verdict(residual, ctx),
    }


def _sweep(family: str, modes: Sequence[Tuple[int, int]], lam: Scalar, alpha: Scalar,
           trunc: Truncation, interior_buffer: int, ctx: ScalarContext,
           pairs: Sequence[TensorPair], callback: Callable[[str, Scalar, str], None]) -> List[Dict]:
    records = []
    for m, n in modes:
        a = PerturbedGenerator(family, m, lam, alpha, ctx)
        b = PerturbedGenerator(family, n, lam, alpha, ctx)
        for index, (phi1, phi2) in enumerate(pairs):
            residual = relation_residual(a, b, phi1, phi2, trunc, interior_buffer)
            record = relation_record(family, m, n, lam, alpha, trunc, interior_buffer, index, residual, ctx)
            outputmanager.debug(family, (m, n), "pair", index, "ll", residual.ll, "mixed", residual.mixed,
                                "psipsi", residual.psipsi, "budget", residual.tail_budget)
            if record["verdict"] != PASS:
                outputmanager.warning(family, f"[{m},{n}]", "pair", index, record["verdict"],
                                      "residual", record["residual_re"], record["residual_im"])
            if callback:
                callback(f"{family}[{m},{n}]#{index}", residual.value, record["verdict"])
            records.append(record)
    return records


def verify_lorentz(lam: Scalar, alpha: Scalar, trunc: Truncation, interior_buffer: int,
                   ctx: ScalarContext, pairs: Sequence[TensorPair],
                   callback: Callable[[str, Scalar, str], None] = None) -> List[Dict]:
    modes = [(m, n) for m in (-1, 0, 1) for n in (-1, 0, 1)]
    return _sweep(LORENTZ, modes, lam, alpha, trunc, interior_buffer, ctx, pairs, callback)


def chiral_difference_identity() -> sympy.Expr:
    """n((2d-1)m - n) - m((2d-1)n - m) - (m - n)(m + n); identically zero."""
    d, m, n = sympy.symbols("d m n")
    return sympy.expand(n * ((2 * d - 1) * m - n) - m * ((2 * d - 1) * n - m) - (m - n) * (m + n))


def chiral_difference_coefficient(d: Scalar, m: int, n: int) -> sympy.Expr:
    """n((2d-1)m - n) - m((2d-1)n - m), the i lambda coefficient of [V_m, V_n]'s mixed part."""
    d = sympy.nsimplify(d)
    return sympy.expand(n * ((2 * d - 1) * m - n) - m * ((2 * d - 1) * n - m))


def verify_virasoro_c0(lam: Scalar, alpha: Scalar, m_range: int, trunc: Truncation, interior_buffer: int,
                       ctx: ScalarContext, pairs: Sequence[TensorPair],
                       callback: Callable[[str, Scalar, str], None] = None) -> List[Dict]:
    if lam != 0 and ctx.mode == EXACT_RATIONAL:
        raise ValueError("virasoro_c0 with lambda != 0 needs exact-gaussian or float mode")
    identity = chiral_difference_identity()
    if identity != 0:
        raise ArithmeticError(f"coefficient identity does not vanish: {identity}")
    modes = [(m, n) for m in range(-m_range, m_range + 1) for n in range(-m_range, m_range + 1)
             if abs(m + n) <= m_range]
    return _sweep(VIRASORO_C0, modes, lam, alpha, trunc, interior_buffer, ctx, pairs, callback)


def mixed_coefficient(d, m: int, n: int):
    """((2d-1)m - n) - ((2d-1)n - m): the lambda coefficient of [W_m, W_n]'s mixed part, equal to 2d(m - n)."""
    return ((2 * d - 1) * m - n) - ((2 * d - 1) * n - m)


def d_half_closure_solutions(m: int, n: int) -> List[sympy.Expr]:
    """Values of d for which the mixed coefficient equals the closure coefficient m - n."""
    d = sympy.symbols("d")
    return sympy.solve(sympy.Eq(mixed_coefficient(d, m, n), m - n), d)


def explore_d_half(lam: Scalar, alpha: Scalar, trunc: Truncation, interior_buffer: int,
                   ctx: ScalarContext, pairs: Sequence[TensorPair], m_range: int = 3,
                   band_window: int = 64, callback: Callable[[str, Scalar, str], None] = None) -> Dict:
    d_sym = sympy.symbols("d")
    d = conformal_dimension(alpha)
    d_exact = sympy.nsimplify(d)
    closure = []
    for m in range(-m_range, m_range + 1):
        for n in range(-m_range, m_range + 1):
            if m == n:
                continue
            identity = sympy.expand(mixed_coefficient(d_sym, m, n) - 2 * d_sym * (m - n))
            solutions = d_half_closure_solutions(m, n)
            coefficient = mixed_coefficient(d_exact, m, n)
            closure.append({
                "m": m,
                "n": n,
                "identity_2d": identity == 0,
                "closes_only_at": [str(s) for s in solutions],
                "coefficient": str(coefficient),
                "closure_coefficient": m - n,
                "closes": bool(sympy.simplify(coefficient - (m - n)) == 0),
            })
            if callback:
                callback(f"d_half_coefficient[{m},{n}]", coefficient - (m - n), "closes" if closure[-1]["closes"] else "open")

    bands = [(n, float(v)) for n, v in vacuum_band_norms(alpha, 0, band_window) if n > 0]
    slope = loglog_slope(bands, (band_window // 4, band_window))
    modes = [(1, -1), (-1, 1), (2, -1)]
    records = _sweep(D_HALF, modes, lam, alpha, trunc, interior_buffer, ctx, pairs, callback)
    return {
        "d": ctx.to_string(d),
        "closure": closure,
        "band_slope": slope,
        "band_slope_expected": float(4 * d - 2),
        "summable": slope < -1,
        "records": records,
    }


def verify_commutativity(alpha: Scalar, m_range: int, truncs: Sequence[Truncation], interior_buffer: int,
                         ctx: ScalarContext, pairs_for: Callable[[Truncation], Sequence[TensorPair]],
                         alpha_b: Scalar = None, vacuum_tolerance: float = 1e-10,
                         callback: Callable[[str, Scalar, str], None] = None) -> Dict:
    """
    Weak commutators of the symmetrized modes at escalating truncations. Pair 0
    of every truncation is the vacuum pair; the rest are excited interior pairs.
    """
    alpha_b = alpha if alpha_b is None else alpha_b
    records = []
    vacuum_exact = True
    excited_peaks = []
    for trunc in truncs:
        peak = 0.0
        for m in range(-m_range, m_range + 1):
            for n in range(-m_range, m_range + 1):
                for index, (phi1, phi2) in enumerate(pairs_for(trunc)):
                    wc = field_weak_commutator(alpha, alpha_b, m, n, phi1, phi2, trunc, interior_buffer)
                    value = wc.value
                    if index == 0:
                        vacuum_exact = vacuum_exact and value == 0
                        ok = ctx.within(value, vacuum_tolerance)
                    else:
                        peak = max(peak, abs(complex(value)))
                        ok = ctx.within(value, wc.tail_budget)
                    record = {
                        "family": "commutativity",
                        "m": m,
                        "n": n,
                        "lambda": ctx.to_string(ctx.one()),
                        "alpha": ctx.to_string(alpha),
                        "L": trunc.level_cutoff,
                        "buffer": interior_buffer,
                        "pair": index,
                        "residual_re": ctx.to_string(real_part(value)),
                        "residual_im": ctx.to_string(imag_part(value)),
                        "tail_budget": _budget_str(wc.tail_budget),
                        "verdict": PASS if ok else BUDGET_EXCEEDED,
                    }
                    if callback:
                        callback(f"commutativity[{m},{n}]#{index}@L={trunc.level_cutoff}", value, record["verdict"])
                    records.append(record)
        excited_peaks.append((trunc.level_cutoff, peak))
        outputmanager.info("commutativity at L =", trunc.level_cutoff, "largest excited residual", peak)
    decreasing = None
    if len(excited_peaks) > 1 and excited_peaks[0][1] > 0:
        decreasing = excited_peaks[-1][1] <= excited_peaks[0][1]
    return {
        "records": records,
        "vacuum_exact_zero": vacuum_exact,
        "excited_peaks": [{"L": level_cutoff, "residual": peak} for level_cutoff, peak in excited_peaks],
        "excited_decreasing": decreasing,
    }
