from fractions import Fraction
import pytest
from hypothesis import given, strategies as st
from chargedfock.fockstate import SectorState, TensorState, inner_product
from chargedfock.heisenberg import LEFT, RIGHT
from chargedfock.truncation import Truncation
from chargedfock.virasoro import (SUGAWARA_NORMALIZATION, LorentzGenerator, apply_L, apply_L_tensor, apply_lorentz,
                                  chiral_adjoint)
from chargedfock.virasorocheck import LorentzCheck, SugawaraCurrentCheck, VirasoroCheck
from tests.strategies import partitions

TRUNC = Truncation(6, -2, 2, Fraction(1, 2))


@given(partitions(6), st.integers(-2, 2))
def test_L0_is_energy(p, j):
    v = SectorState.basis(j, p)
    beta = TRUNC.charge(j)
    assert apply_L(0, v, TRUNC) == v * (beta * beta / 2 + sum(p))


def test_L_minus_one_on_charged_vacuum():
    beta = TRUNC.charge(2)
    assert apply_L(-1, SectorState.vacuum(2), TRUNC) == SectorState.basis(2, [1], beta)
    assert apply_L(-1, SectorState.vacuum(0), TRUNC).is_zero()


def test_central_term_on_vacuum():
    omega = SectorState.vacuum(0)
    assert apply_L(2, apply_L(-2, omega, TRUNC), TRUNC) == omega * Fraction(1, 2)


@given(partitions(3), st.integers(-3, 3), st.integers(-2, 2))
def test_L_adjoint(p, n, j):
    v = SectorState.basis(j, p)
    for q in [(), (1,), (2, 1), (1, 1, 1)]:
        w = SectorState.basis(j, q)
        assert inner_product(apply_L(n, v, TRUNC), w) == inner_product(v, apply_L(-n, w, TRUNC))


def test_virasoro_check_passes(ctx):
    check = VirasoroCheck(ctx, m_max=3, sectors=[0, 1])
    assert check.get_failures(TRUNC) == []


def test_wrong_normalization_breaks_virasoro(ctx):
    check = VirasoroCheck(ctx, m_max=2, sectors=[0], normalization=SUGAWARA_NORMALIZATION + Fraction(1, 1000))
    failures = check.get_failures(Truncation(3, 0, 0, Fraction(1, 2)))
    assert failures
    assert failures[0].check == "VirasoroCheck"


def test_sugawara_current_check_passes(ctx):
    assert SugawaraCurrentCheck(ctx, m_max=3, sectors=[-1, 2]).get_failures(TRUNC) == []


def test_tensor_action():
    v = TensorState.basis(0, [1], [])
    assert apply_L_tensor(LEFT, 0, v, TRUNC) == v
    assert apply_L_tensor(RIGHT, 0, v, TRUNC).is_zero()


def test_chiral_adjoint_flips_modes(gaussian_ctx):
    i = gaussian_ctx.imaginary_unit()
    terms = [(LEFT, 1, i), (RIGHT, -2, Fraction(3))]
    assert chiral_adjoint(terms) == [(LEFT, -1, -i), (RIGHT, 2, Fraction(3))]


def test_k2_needs_an_imaginary_unit(ctx):
    with pytest.raises(ValueError):
        LorentzGenerator(LorentzGenerator.K2, ctx)
    with pytest.raises(ValueError):
        LorentzGenerator("boost")


def test_k0_on_vacuum_is_zero():
    assert apply_lorentz(LorentzGenerator(LorentzGenerator.K0), TensorState.vacuum(1), TRUNC).is_zero()


def test_lorentz_check_passes(gaussian_ctx):
    check = LorentzCheck(gaussian_ctx, max_level=2, sectors=[0, 1])
    assert check.get_failures(Truncation(4, -1, 1, Fraction(1, 2))) == []
