import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_approx.differential import DOperator, apply_D, apply_D_expansion, apply_D_pointwise, as_expansion
from jacobi_approx.errors import BasisMismatchError, DomainError, ParameterDomainError
from jacobi_approx.ortho_core import LEGENDRE, JacobiExpansion, JacobiParams, jacobi_eigenvalue, jacobi_eval
from jacobi_approx.weighted_spaces import Func


def mode(jp, k):
    return JacobiExpansion(jp, np.eye(k + 1)[k])


def test_constants_annihilated():
    e = apply_D_expansion(JacobiExpansion(JacobiParams(1, 0), [3.0]), 1)
    np.testing.assert_array_equal(e.coeffs, [0.0])


def test_single_mode_eigenvalue():
    jp = JacobiParams(1.0, 0.0)
    e = apply_D_expansion(mode(jp, 3), 1)
    np.testing.assert_allclose(e.coeffs, [0, 0, 0, -15.0])


def test_iterated_eigenvalue():
    e = apply_D_expansion(mode(LEGENDRE, 2), 2)
    np.testing.assert_allclose(e.coeffs, [0, 0, 36.0])


def test_order_zero_is_identity():
    e = mode(LEGENDRE, 2)
    assert apply_D_expansion(e, 0) is e


def test_basis_mismatch():
    with pytest.raises(BasisMismatchError):
        apply_D_expansion(mode(LEGENDRE, 2), 1, JacobiParams(1, 0))


def test_operator_validation_and_multipliers():
    with pytest.raises(ParameterDomainError):
        DOperator(LEGENDRE, 0)
    op = DOperator(JacobiParams(1, 0.5), 2)
    np.testing.assert_allclose(op.multipliers(4), [jacobi_eigenvalue(k, op.params) ** 2 for k in range(4)])


def test_pointwise_constant_and_linear():
    jp = JacobiParams(2.0, 0.5)
    x = np.linspace(-0.8, 0.8, 9)
    np.testing.assert_allclose(apply_D_pointwise(Func.constant(4.0), jp, x), 0.0, atol=1e-6)
    expected = jp.mu - jp.nu - (jp.nu + jp.mu + 2) * x
    np.testing.assert_allclose(apply_D_pointwise(Func(lambda x: x), jp, x), expected, atol=1e-8)


def test_pointwise_legendre_p4():
    f = Func(lambda x: jacobi_eval(4, LEGENDRE, x))
    got = apply_D_pointwise(f, LEGENDRE, 0.3, h=1e-4)
    assert got == pytest.approx(-20 * jacobi_eval(4, LEGENDRE, 0.3), rel=1e-5)


def test_pointwise_stencil_domain():
    with pytest.raises(DomainError):
        apply_D_pointwise(Func(np.exp), LEGENDRE, 0.99995, h=1e-4)


@given(
    st.sampled_from([LEGENDRE, JacobiParams(1, 0.5), JacobiParams(3, 3), JacobiParams(2, -0.5)]),
    st.lists(st.floats(-1, 1), min_size=1, max_size=13),
)
def test_spectral_pointwise_agreement(jp, c):
    e = JacobiExpansion(jp, c)
    x = np.linspace(-0.9, 0.9, 19)
    spec = apply_D_expansion(e, 1)(x)
    h = 1e-4
    fd = apply_D_pointwise(Func.from_expansion(e), jp, x, h=h)
    # central differences: truncation h^2 |f^(4)| / 12 on the (1 - x^2) f'' term and
    # h^2 |f^(3)| / 6 on the f' term, whose coefficient is at most |mu - nu| + nu + mu + 2;
    # rounding 4 eps |f| / h^2.  Derivatives come from an independent Chebyshev fit.
    nodes = np.cos(np.pi * (np.arange(200) + 0.5) / 200)
    cheb = np.polynomial.chebyshev.Chebyshev.fit(nodes, e(nodes), len(c) - 1, domain=[-1, 1])
    xx = np.linspace(-0.9 - h, 0.9 + h, 401)
    d3, d4 = (float(np.max(np.abs(cheb.deriv(k)(xx)))) for k in (3, 4))
    a = abs(jp.mu - jp.nu) + jp.nu + jp.mu + 2
    eps = np.finfo(float).eps
    bound = h * h * (d4 / 12 + a * d3 / 6) + 4 * eps * max(1.0, float(np.max(np.abs(e(xx))))) / (h * h)
    assert np.max(np.abs(spec - fd)) <= 2 * bound


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=20), st.integers(1, 20), st.integers(1, 3))
def test_truncation_commutes(c, n, r):
    jp = JacobiParams(1.5, 0.5)
    e = JacobiExpansion(jp, c)
    a = apply_D_expansion(e, r).truncate(n)
    b = apply_D_expansion(e.truncate(n), r)
    np.testing.assert_array_equal(a.padded(n), b.padded(n))


def test_as_expansion_and_apply_D():
    jp = JacobiParams(1.0, 1.0)
    f = Func.from_expansion(mode(jp, 3))
    assert as_expansion(f, jp) is f.expansion
    # a Legendre-defined function is re-expanded exactly in the new basis
    g = Func.from_expansion(mode(LEGENDRE, 2))
    e = as_expansion(g, jp)
    x = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(e(x), g(x), atol=1e-13)
    xi = np.linspace(-0.9, 0.9, 7)
    np.testing.assert_allclose(apply_D(g, jp)(xi), apply_D_pointwise(g, jp, xi), atol=1e-6)
    np.testing.assert_allclose(apply_D(Func(np.exp), jp, 1, 40)(0.2), apply_D_pointwise(Func(np.exp), jp, 0.2), rtol=1e-7)
