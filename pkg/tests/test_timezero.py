import io
from fractions import Fraction
import pytest
from hypothesis import given, strategies as st
from chargedfock.fockstate import SectorState, TensorState, norm_sq
from chargedfock.timezero import (TailReport, TimeZeroMode, adjoint_residual, apply_time_zero,
                                  export_convergence_study, flip, partial_sum_norm_series, sign_automorphism,
                                  vacuum_band_norms)
from chargedfock.timezerocheck import TimeZeroCheck
from chargedfock.truncation import Truncation
from tests.strategies import partitions

HALF = Fraction(1, 2)
TRUNC = Truncation(4, -2, 2, HALF)


def test_mode_adjoints():
    plain = TimeZeroMode(HALF, 2).adjoint()
    assert (plain.alpha, plain.m, plain.symmetrized) == (-HALF, -2, False)
    sym = TimeZeroMode(HALF, 2, True).adjoint()
    assert (sym.alpha, sym.m, sym.symmetrized) == (HALF, -2, True)
    assert TimeZeroMode(HALF, 0, True).charges() == [HALF, -HALF]


def test_vacuum_bands():
    image, report = apply_time_zero(TimeZeroMode(HALF, 0), TensorState.vacuum(0), TRUNC)
    assert report.depth == 5
    assert [band for band, _ in report.bands] == [0, 1, 2, 3, 4]
    assert report.bands[1] == (1, Fraction(1, 16))
    assert report.last_band_norm_sq == vacuum_band_norms(HALF, 0, 4)[-1][1]
    assert norm_sq(image) == sum(value for _, value in report.bands)
    assert all(key[0] == 1 for key in image.keys())


def test_band_norms_of_shifted_modes():
    assert vacuum_band_norms(HALF, 1, 1) == [(0, Fraction(1, 4)), (1, Fraction(1, 4) * Fraction(5, 32))]
    assert [band for band, _ in vacuum_band_norms(HALF, -2, 3)] == [2, 3]
    _, report = apply_time_zero(TimeZeroMode(HALF, -1), TensorState.vacuum(0), TRUNC)
    assert [band for band, _ in report.bands] == [1, 2, 3, 4]


def test_partial_sums():
    assert partial_sum_norm_series(HALF, 0, 2) == [1, 1 + Fraction(1, 16), 1 + Fraction(1, 16) + Fraction(25, 1024)]
    sums = partial_sum_norm_series(HALF, -1, 2)
    assert sums[0] == 0
    assert sums[1] == Fraction(1, 4)


def test_partial_sums_are_indexed_by_cutoff():
    sums = partial_sum_norm_series(HALF, 1, 5)
    assert len(sums) == 5 + 1
    assert sums[0] == Fraction(1, 4)
    bands = dict(vacuum_band_norms(HALF, 1, 5))
    for n in range(1, 6):
        assert sums[n] - sums[n - 1] == bands[n]


def test_symmetrized_mode_reaches_both_charges():
    image, _ = apply_time_zero(TimeZeroMode(HALF, 0, True), TensorState.vacuum(0), TRUNC)
    assert {key[0] for key in image.keys()} == {-1, 1}


def test_time_zero_needs_tensor_states():
    with pytest.raises(ValueError):
        apply_time_zero(TimeZeroMode(HALF, 0), SectorState.vacuum(0), TRUNC)


def test_empty_tail_report():
    assert TailReport().depth == 0
    assert TailReport().last_band_norm_sq == 0


@given(partitions(2), partitions(2), partitions(2), partitions(2), st.integers(-2, 2))
def test_adjoint(pl, pr, ql, qr, m):
    v = TensorState.basis(0, pl, pr)
    w = TensorState.basis(1, ql, qr)
    assert adjoint_residual(TimeZeroMode(HALF, m), v, w, TRUNC) == 0


@given(st.integers(-2, 2), st.booleans())
def test_flip_exchanges_modes_on_vacuum(m, symmetrized):
    lhs, _ = apply_time_zero(TimeZeroMode(HALF, m, symmetrized), TensorState.vacuum(0), TRUNC)
    rhs, _ = apply_time_zero(TimeZeroMode(HALF, -m, symmetrized), TensorState.vacuum(0), TRUNC)
    assert flip(lhs) == rhs


def test_sign_automorphism():
    v = TensorState({(1, (2, 1), ()): 3, (1, (2,), ()): 5})
    assert sign_automorphism(v) == TensorState({(-1, (2, 1), ()): 3, (-1, (2,), ()): -5})
    assert sign_automorphism(sign_automorphism(v)) == v
    dropped = sign_automorphism(SectorState.vacuum(2), Truncation(2, -1, 2, HALF))
    assert dropped.is_zero() and dropped.overflow


@given(partitions(2), partitions(2), st.integers(-1, 1))
def test_sign_covariance(pl, pr, m):
    v = TensorState.basis(0, pl, pr)
    lhs = sign_automorphism(apply_time_zero(TimeZeroMode(HALF, m), v, TRUNC)[0], TRUNC)
    rhs = apply_time_zero(TimeZeroMode(-HALF, m), sign_automorphism(v, TRUNC), TRUNC)[0]
    assert lhs == rhs


def test_export_convergence_study():
    buffer = io.StringIO()
    export_convergence_study(HALF, 0, 3, buffer, digits=12)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == "band,band_norm_sq,partial_sum"
    assert len(lines) == 5
    assert lines[1].startswith("0,1.0")
    assert lines[2].split(",")[1].startswith("0.0625")


def test_time_zero_check_passes(ctx):
    check = TimeZeroCheck(ctx, HALF, m_max=1, max_level=1)
    assert check.get_failures(Truncation(3, -1, 1, HALF)) == []
