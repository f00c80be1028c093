import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import zeta

from jacobi_approx.errors import DegenerateFunctionError, ParameterDomainError
from jacobi_approx.smoothness import (
    ModulusCurve,
    ModulusSettings,
    PhiFunction,
    measured_c1,
    measured_c2,
    modulus,
    modulus_curve,
    phi_check_sum3,
    phi_check_sum4,
    phi_constants,
    translation_defect,
)
from jacobi_approx.weighted_spaces import Func, SpaceParams

SP = SpaceParams(2, 1.0, 1.0)
X2 = Func(lambda x: x * x, label="x2")
ABS = Func(np.abs, label="abs", breakpoints=(0.0,))


# -- phi -------------------------------------------------------------------------------------


def test_phi_labels_and_domain():
    phi = PhiFunction.from_label("power:1.5")
    assert phi.exponent == 1.5
    assert PhiFunction.from_label("const").exponent == 0.0
    assert float(phi(0.25)) == pytest.approx(0.125)
    with pytest.raises(ParameterDomainError):
        phi(np.array([0.0]))
    with pytest.raises(ParameterDomainError):
        phi(1.5)
    with pytest.raises(ParameterDomainError):
        PhiFunction.from_label("log:2")
    with pytest.raises(ParameterDomainError):
        PhiFunction.power(-1)


def test_c1_c2_for_powers():
    assert measured_c1(PhiFunction.power(0.7)) == pytest.approx(1.0)
    assert measured_c2(PhiFunction.power(0.7)) == pytest.approx(2**0.7)
    # a non-monotone but quasi-monotone phi
    wobble = PhiFunction(lambda t: t * (1.5 + np.sin(1 / t)), "wobble")
    assert 1.0 < measured_c1(wobble) <= 5.0
    with pytest.raises(DegenerateFunctionError):
        measured_c1(PhiFunction(lambda t: np.where(t < 0.5, 0.0, t)))


def test_sum3_bounded_case_matches_zeta_oracle():
    # lambda0 = 1, phi = t^2.5: sum_{j>n} j^-1.5 / n^-0.5, summed exactly by the Hurwitz zeta
    phi = PhiFunction.power(2.5)
    n = np.arange(1, 65)
    oracle = np.max(n**0.5 * zeta(1.5, n + 1))
    chk = phi_check_sum3(phi, 1.0, 64)
    assert not chk.unbounded
    assert chk.constant == pytest.approx(oracle, rel=1e-6)
    assert phi_check_sum3(phi, 1.0, 128).constant == pytest.approx(chk.constant, rel=0.05)


def test_sum3_flags_critical_power():
    chk = phi_check_sum3(PhiFunction.power(2.0), 1.0, 64)
    assert chk.unbounded
    assert chk.tail_exponent == pytest.approx(-1.0, abs=1e-9)


def test_sum3_lambda0_zero_is_the_harmonic_weighted_sum():
    # sum_{j>n} (1/j) phi(1/j) <= C phi(1/n) with phi = t: C -> sup n (zeta(2, n+1))
    chk = phi_check_sum3(PhiFunction.power(1.0), 0.0, 50)
    n = np.arange(1, 51)
    assert chk.constant == pytest.approx(np.max(n * zeta(2, n + 1)), rel=1e-6)


def test_sum3_degenerate_phi():
    with pytest.raises(DegenerateFunctionError):
        phi_check_sum3(PhiFunction(lambda t: np.where(t < 0.1, 0.0, t)), 0.5, 64)


@pytest.mark.parametrize("lam", [0.3, 1.0, 1.7])
def test_sum4_power_matches_direct_sum(lam):
    phi = PhiFunction.power(lam)
    j = np.arange(1, 101, dtype=float)
    oracle = np.max(np.cumsum(j ** (1 - lam)) / j ** (2 - lam))
    chk = phi_check_sum4(phi, 100)
    assert not chk.unbounded
    assert chk.constant == pytest.approx(oracle, rel=1e-12)


def test_sum4_flags_square():
    assert phi_check_sum4(PhiFunction.power(2.0), 128).unbounded


def test_sum4_constant_phi_ratio_tends_to_half():
    chk = phi_check_sum4(PhiFunction.constant(), 1000)
    assert chk.final_ratio == pytest.approx(1000 * 1001 / 2 / 1000**2, rel=1e-12)
    assert not chk.unbounded


def test_phi_constants_keys():
    out = phi_constants(PhiFunction.power(1.0), 0.25, 64)
    assert set(out) == {"C1", "C2", "C3", "C4"}


# -- modulus ---------------------------------------------------------------------------------


def test_modulus_of_constant_vanishes():
    assert modulus(Func.constant(2.0), 0.5, SP) == pytest.approx(0.0, abs=1e-9)


def test_modulus_small_delta():
    assert modulus(X2, 1e-3, SP) < 1e-4


def test_modulus_monotone_and_dense_grid_crosscheck():
    a, b = modulus(ABS, 0.1, SP), modulus(ABS, 0.2, SP)
    assert a <= b
    dense = max(translation_defect(ABS, t, SP) for t in np.linspace(0.2 / 160, 0.2, 160))
    assert b == pytest.approx(dense, rel=1e-3)


def test_modulus_delta_range():
    with pytest.raises(ParameterDomainError):
        modulus(X2, 0.0, SP)
    with pytest.raises(ParameterDomainError):
        modulus(X2, 4.0, SP)


def test_modulus_curve_nondecreasing_and_consistent():
    ds = [0.4, 0.2, 0.1, 0.05]
    curve = modulus_curve(ABS, ds, SP)
    assert isinstance(curve, ModulusCurve)
    assert np.all(np.diff(curve.values) >= 0)
    np.testing.assert_allclose(curve.deltas, sorted(ds))
    for d, w in zip(curve.deltas, curve.values):
        assert w >= modulus(ABS, d, SP) * (1 - 1e-12)


def test_modulus_curve_rejects_decrease():
    with pytest.raises(AssertionError):
        ModulusCurve(np.array([0.1, 0.2]), np.array([2.0, 1.0]), SP, np.array([]), np.array([]))


def test_settings_validation():
    with pytest.raises(ParameterDomainError):
        ModulusSettings(t_samples=2)


@settings(max_examples=10)
@given(st.floats(-3, 3), st.floats(0.05, 0.5))
def test_modulus_ignores_added_constants(c, delta):
    f = Func(np.exp)
    g = Func(lambda x: np.exp(x) + c)
    assert modulus(g, delta, SP) == pytest.approx(modulus(f, delta, SP), abs=1e-9)


@settings(max_examples=10)
@given(st.floats(-3, 3).filter(lambda c: abs(c) > 1e-3), st.floats(0.05, 0.5))
def test_modulus_homogeneous(c, delta):
    base = modulus(ABS, delta, SP)
    assert modulus(ABS * c, delta, SP) == pytest.approx(abs(c) * base, rel=1e-9)
