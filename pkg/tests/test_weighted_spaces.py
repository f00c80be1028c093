import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_approx.errors import ParameterDomainError, SamplingError
from jacobi_approx.ortho_core import LEGENDRE, JacobiExpansion, JacobiParams
from jacobi_approx.weighted_spaces import (
    Func,
    Regime,
    SpaceParams,
    lambda0_for_theorems,
    parse_p,
    sup_grid,
    translation_bound_params,
    validate_regime,
    weighted_norm,
    weighted_rule,
)

INF = math.inf


# -- parameters -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "p,a,b",
    [(0.5, 0, 0), (2, -0.5, 0), (1, 0, -1), (INF, -0.1, 0), (2, math.nan, 0), (math.nan, 0, 0)],
)
def test_invalid_spaces(p, a, b):
    with pytest.raises(ParameterDomainError):
        SpaceParams(p, a, b)


def test_parse_p():
    assert parse_p("inf") == INF
    assert parse_p("2") == 2.0
    assert parse_p(" Infinity ") == INF
    with pytest.raises(ParameterDomainError):
        SpaceParams(parse_p("0.5"), 0, 0)


def test_shifted_space_is_validated():
    sp = SpaceParams(2, 0.1, 0.1)
    assert sp.shifted(0.5, 0.25) == SpaceParams(2, 0.6, 0.35)
    with pytest.raises(ParameterDomainError):
        sp.shifted(-1, 0)


# -- norms -----------------------------------------------------------------------------------


def test_zero_function_has_zero_norm():
    for sp in (SpaceParams(1, 0, 0), SpaceParams(2, 1, 0.5), SpaceParams(INF, 1, 1)):
        assert weighted_norm(Func.constant(0.0), sp) == 0.0


def test_unit_norm_examples():
    assert weighted_norm(Func.constant(1.0), SpaceParams(2, 0, 0)) == pytest.approx(math.sqrt(2), rel=1e-13)
    assert weighted_norm(Func.constant(1.0), SpaceParams(INF, 1, 1)) == pytest.approx(1.0, abs=1e-12)


def test_p2_norm_matches_beta_integral():
    # int (1-x)^3 (1+x)^1 dx = 2^5 B(4, 2) = 32 / 20
    got = weighted_norm(Func.constant(1.0), SpaceParams(2, 1.5, 0.5))
    assert got == pytest.approx(math.sqrt(32 / 20), rel=1e-13)


def test_kink_norm_uses_breakpoint():
    # ||x - 0.3||_1 = 0.65^2 + 0.65... exact: int_{-1}^{1} |x - 0.3| dx = (1.3^2 + 0.7^2) / 2
    f = Func(lambda x: np.abs(x - 0.3), breakpoints=(0.3,))
    assert weighted_norm(f, SpaceParams(1, 0, 0)) == pytest.approx((1.69 + 0.49) / 2, rel=1e-13)


def test_norm_rejects_nonfinite_samples():
    with pytest.raises(SamplingError):
        weighted_norm(Func(lambda x: np.full_like(x, np.inf)), SpaceParams(2, 0, 0))


def test_sup_grid_stays_inside():
    x = sup_grid((0.0, 0.999999999))
    assert np.all(np.abs(x) <= 1 - 1e-6)
    assert 0.0 in x
    assert np.all(np.diff(x) > 0)


def test_weighted_rule_integrates_singular_weight_with_breakpoint():
    rule = weighted_rule(-0.5, 0.7, 256, (0.2,))
    # sum of weights equals the weight integral 2^(a+b+1) B(a+1, b+1)
    from scipy.special import beta

    assert rule.weights.sum() == pytest.approx(2 ** 1.2 * beta(0.5, 1.7), rel=1e-12)


spaces = st.sampled_from(
    [SpaceParams(1, 0, 0), SpaceParams(2, 0.5, 1), SpaceParams(4, 0.2, 0.0), SpaceParams(INF, 0, 0.5)]
)
poly_coeffs = st.lists(st.floats(-3, 3), min_size=1, max_size=6)


scales = st.one_of(st.just(0.0), st.floats(1e-6, 5), st.floats(-5, -1e-6))


@given(spaces, poly_coeffs, scales)
def test_norm_homogeneity(sp, c, scale):
    f = Func.from_expansion(JacobiExpansion(LEGENDRE, c))
    base = weighted_norm(f, sp)
    assert weighted_norm(f * scale, sp) == pytest.approx(abs(scale) * base, rel=1e-12, abs=1e-300)


@given(spaces, poly_coeffs, poly_coeffs)
def test_triangle_inequality(sp, c1, c2):
    f = Func.from_expansion(JacobiExpansion(LEGENDRE, c1))
    g = Func.from_expansion(JacobiExpansion(LEGENDRE, c2))
    assert weighted_norm(f + g, sp) <= weighted_norm(f, sp) + weighted_norm(g, sp) + 1e-9


@given(st.floats(0, 3), st.floats(0, 3), st.floats(0, 1), st.floats(0, 1))
def test_sup_norm_of_one_under_exponent_shifts(a, b, da, db):
    """(1-x^2)^d <= 1 makes equal shifts nonincreasing; (1+x) <= 2 caps unequal ones at 2^(da+db)."""
    one = Func.constant(1.0)
    base = weighted_norm(one, SpaceParams(INF, a, b))
    assert weighted_norm(one, SpaceParams(INF, a + da, b + da)) <= base + 1e-12
    assert weighted_norm(one, SpaceParams(INF, a + da, b + db)) <= 2 ** (da + db) * base + 1e-12


# -- Func -------------------------------------------------------------------------------------


def test_func_arithmetic_keeps_expansion_and_breakpoints():
    e = JacobiExpansion(LEGENDRE, [1.0, 2.0])
    f = Func.from_expansion(e)
    g = Func(np.abs, breakpoints=(0.0,))
    assert (f + f).expansion is not None
    assert (f - g).expansion is None
    assert (f - g).breakpoints == (0.0,)
    assert float((-f)(0.5)) == pytest.approx(-(1 + 2 * 0.5))
    assert (f * 3).degree == 1


# -- derived quantities --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "sp,expected",
    [(SpaceParams(INF, 1, 1), 0.0), (SpaceParams(1, 2, 1), 1.0), (SpaceParams(2, 1.5, 1.5), 0.25)],
)
def test_lambda0_examples(sp, expected):
    assert lambda0_for_theorems(sp) == pytest.approx(expected)


@pytest.mark.parametrize(
    "sp,eps,expected",
    [
        (SpaceParams(2, 2.0, 1.0), 0.25, (1.0, 0.0, 0.0)),  # gamma = 1 < 5/4
        (SpaceParams(2, 1.0, 2.0), 0.25, (0.0, 1.0, 0.0)),
        (SpaceParams(2, 2.0, 2.0), 0.1, (0.0, 0.0, 2 - 1.25 + 0.1)),
        (SpaceParams(INF, 2.0, 3.0), 0.2, (0.0, 1.0, 2 - 1.5 + 0.2)),
        (SpaceParams(1, 1.5, 1.5), 0.2, (0.0, 0.0, 0.5)),
        (SpaceParams(1, 0.5, 0.5), 0.2, (0.0, 0.0, 0.0)),
    ],
)
def test_translation_bound_params(sp, eps, expected):
    tb = translation_bound_params(sp, eps)
    assert (tb.gamma1, tb.gamma2, tb.gamma3) == pytest.approx(expected)
    powers = [pw for _, pw, _ in tb.shifted_spaces(sp)]
    g1, g2, g3 = expected
    assert powers == pytest.approx([0, 2 * (g1 + g2), 2 * g3, 2 * (g1 + g2 + g3)])


def test_translation_bound_epsilon_range():
    with pytest.raises(ParameterDomainError):
        translation_bound_params(SpaceParams(2, 1, 1), 0.5)


# -- regime truth table ------------------------------------------------------------------------------
# Built by hand from the hypotheses of each result: (p, alpha, beta, nu, mu, regime, expected).

H = Regime
TRUTH_TABLE = [
    # Jackson inequality via D, four parameter cases
    (2, -0.25, -0.25, -0.5, -0.5, H.LEMMA_E_D, True),  # alpha = beta = -1/(2p)
    (2, 0.0, 0.0, -0.5, -0.5, H.LEMMA_E_D, False),
    (INF, 0.0, 0.0, -0.5, -0.5, H.LEMMA_E_D, True),
    (2, 1.0, 1.0, 1.0, 1.0, H.LEMMA_E_D, True),  # -1/4 < alpha < nu + 1/2 - 1/4
    (2, 1.5, 1.5, 1.0, 1.0, H.LEMMA_E_D, False),
    (2, 1.0, 0.5, 1.0, 1.0, H.LEMMA_E_D, False),  # nu = mu forces alpha = beta
    (1, 1.0, 1.0, 1.0, 1.0, H.LEMMA_E_D, True),  # p = 1: -1/2 < alpha <= nu
    (1, 1.2, 1.2, 1.0, 1.0, H.LEMMA_E_D, False),
    (INF, 1.4, 1.4, 1.0, 1.0, H.LEMMA_E_D, True),  # p = inf: 0 <= alpha < nu + 1/2
    (2, 0.5, -0.25, 1.0, -0.5, H.LEMMA_E_D, True),  # mu = -1/2 forces beta = -1/(2p)
    (2, 0.5, 0.0, 1.0, -0.5, H.LEMMA_E_D, False),
    (2, 0.5, 0.5, 1.0, 0.0, H.LEMMA_E_D, False),  # beta < mu + 1/2 - 1/(2p) = 1/4 fails
    (2, 0.0, 0.0, 1.0, 0.0, H.LEMMA_E_D, True),
    (2, 1.5, 0.5, 2.0, 1.0, H.LEMMA_E_D, False),  # nu - mu > alpha - beta fails (equality)
    (2, 0.0, 0.1, 1.0, 0.0, H.LEMMA_E_D, False),  # alpha - beta >= 0 fails
    # direct theorem
    (1, 3.0, 3.0, 1.0, 1.0, H.THM_DIRECT, False),
    (1, 2.0, 2.0, 1.0, 1.0, H.THM_DIRECT, True),
    (2, 2.4, 2.4, 1.0, 1.0, H.THM_DIRECT, True),  # alpha < 3 - 1/p
    (2, 2.5, 0.0, 1.0, 1.0, H.THM_DIRECT, False),
    # inverse theorem
    (2, 1.0, 1.0, 1.0, 1.0, H.THM_INVERSE, True),  # alpha > 1 - 1/(2p)
    (2, 0.75, 1.0, 1.0, 1.0, H.THM_INVERSE, False),
    (INF, 1.0, 1.0, 1.0, 1.0, H.THM_INVERSE, True),
    # equivalence = both
    (2, 1.5, 1.5, 3.0, 3.0, H.THM_EQUIV, True),
    (2, 2.6, 1.5, 3.0, 3.0, H.THM_EQUIV, False),
    # derivative characterization with nu0 = min(nu, 5/2 - 1/(2p))
    (2, 1.5, 1.5, 3.0, 3.0, H.THM_E_WD, True),  # 3/4 < alpha < nu0 + 1/4 = 2.5
    (2, 1.5, 1.5, 0.5, 0.5, H.THM_E_WD, False),  # mu > 1/2 required
    (2, 1.0, 1.0, 3.0, 2.0, H.THM_E_WD, True),
    (1, 1.0, 1.0, 3.0, 3.0, H.THM_E_WD, True),  # p = 1: 1/2 < alpha <= nu0 = 2
    (1, 2.5, 2.5, 3.0, 3.0, H.THM_E_WD, False),
]


@pytest.mark.parametrize("p,a,b,nu,mu,regime,expected", TRUTH_TABLE)
def test_regime_truth_table(p, a, b, nu, mu, regime, expected):
    check = validate_regime(SpaceParams(p, a, b), JacobiParams(nu, mu), regime)
    assert bool(check) is expected, check.reason
    if not expected:
        assert check.reason and check.reason != "ok"


def test_regime_without_jacobi_params():
    assert not validate_regime(SpaceParams(2, 1, 1), None, "lemma_E_D")
    assert validate_regime(SpaceParams(2, 1, 1), None, "thm_direct")


def test_regime_reason_names_inequality():
    check = validate_regime(SpaceParams(1, 3, 3), JacobiParams(1, 1), "thm_direct")
    assert "alpha <= 2" in check.reason
