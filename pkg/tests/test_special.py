from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from melonkit.dfinite import DiffOp, apply_op, catalog
from melonkit.series import LaurentSeries, rf_expand
from melonkit.special import (
    HEUN_V3,
    HEUN_V3_ALT,
    HYP_H,
    HeunSpec,
    HyperSpec,
    IdentityId,
    InvalidGamma,
    InvalidLowerParameter,
    InvalidPullback,
    S1_PULLBACK,
    build_named,
    heun_series,
    hyper_series,
    maclaurin_pfq,
    verify_identity,
)

third = F(1, 3)


def test_2f1_first_terms():
    s = hyper_series(HyperSpec((third, 2 * third), (1,)), 3)
    assert s.coefficient_list(0, 1) == [1, F(2, 9)]


def test_h_series_head():
    assert build_named("H", 6).coefficient_list(0, 4) == [1, 0, 6, 36, 234]


def test_h_annihilated():
    h = build_named("H", 120)
    res = apply_op(catalog("L_HYP"), h)
    assert res.order >= 114 and res.is_zero()


def test_3f2_constant_term():
    s = hyper_series(HyperSpec((F(1, 2), F(3, 2), F(9, 2)), (3, 4), S1_PULLBACK), 5)
    assert s[0] == 1


def test_lower_parameter_check():
    with pytest.raises(InvalidLowerParameter):
        HyperSpec((1,), (-2,))
    with pytest.raises(InvalidLowerParameter):
        HyperSpec((1,), (0,))


def test_pullback_check():
    with pytest.raises(InvalidPullback):
        HyperSpec((1,), (1,), ((1, 1), (1,)))
    with pytest.raises(InvalidPullback):
        HyperSpec((1,), (1,), ((0, 1), (0,)))


def test_log_closed_form():
    # 2F1(1,1;2;x) = -log(1-x)/x
    s = hyper_series(HyperSpec((1, 1), (2,)), 30)
    assert s.coefficient_list(0, 30) == [F(1, n + 1) for n in range(31)]


@settings(max_examples=30, deadline=None)
@given(st.fractions(-3, 3, max_denominator=5), st.fractions(F(1, 5), 4, max_denominator=5), st.integers(1, 20))
def test_binomial_degeneration(a, b, N):
    # 2F1(a, b; b; x) = (1 - x)^(-a)
    s = hyper_series(HyperSpec((a, b), (b,)), N)
    assert s == LaurentSeries.from_poly((1, -1), N).pow_rat(-a)


@settings(max_examples=30, deadline=None)
@given(
    st.fractions(-3, 3, max_denominator=4),
    st.fractions(-3, 3, max_denominator=4),
    st.fractions(F(1, 4), 3, max_denominator=4),
    st.integers(4, 25),
)
def test_gauss_equation(a, b, c, N):
    # x(1-x) F'' + (c - (a+b+1) x) F' - a b F = 0 : an independent oracle for the term ratio
    f = hyper_series(HyperSpec((a, b), (c,)), N)
    op = DiffOp(((-a * b,), (c, -(a + b + 1)), (0, 1, -1)))
    res = apply_op(op, f)
    assert res.truncate(N - 2).is_zero()


def test_plain_pullback_is_maclaurin():
    spec = HyperSpec((third, 2 * third), (1,), ((0, 1), (1,)))
    assert hyper_series(spec, 25) == maclaurin_pfq((third, 2 * third), (1,), 25)


def test_composed_pullback():
    # F(27x^2/(1-2x)^3) through explicit composition
    base = maclaurin_pfq((third, 2 * third), (1,), 20)
    z = rf_expand((0, 0, 27), (1, -6, 12, -8), 40)
    assert hyper_series(HYP_H, 40) == base.compose(z).truncate(40)


def test_heun_v3_head():
    assert heun_series(HEUN_V3, 6).coefficient_list(0, 6) == [1, -1, 3, 3, 6, 18, 66]


def test_heun_alt_head():
    assert heun_series(HEUN_V3_ALT, 6).coefficient_list(0, 6) == [1, -1, 3, 3, 6, 18, 66]


def test_heun_against_v3(v3):
    # rearranged: Heun = 1 - x + 3x^2 + 3x^3 V3
    want = LaurentSeries.from_poly((1, -1, 3)) + v3(200).shift(3) * 3
    assert heun_series(HEUN_V3, 200) == want.truncate(200)


def test_heun_q_zero():
    s = heun_series(HeunSpec(2, 0, 1, 1, 1, 1), 4)
    assert s[1] == 0


def test_heun_scale_zero():
    assert heun_series(HeunSpec(-8, 2, -1, -2, 2, -2, 0), 5) == LaurentSeries.constant(1, 5)


def test_heun_gamma_check():
    with pytest.raises(InvalidGamma):
        HeunSpec(-8, 2, -1, -2, 0, -2)
    with pytest.raises(InvalidGamma):
        HeunSpec(-8, 2, -1, -2, -3, -2)


def test_heun_epsilon():
    assert HEUN_V3.epsilon == -1 - 2 - 2 + 2 + 1


def test_named_leading_terms():
    s1, s2, sp = (build_named(n, 40) for n in ("S1", "S2", "SP"))
    assert (s1.valuation, s1[-9]) == (-9, 1)
    assert (s2.valuation, s2[-9]) == (-9, 140)
    assert (sp.valuation, sp[-9]) == (-9, F(1, 9))


def test_decomposition_constant_term():
    combo = build_named("S1", 40) * F(1, 9) - build_named("S2", 40) * F(1, 630) + build_named("SP", 40)
    assert combo.valuation == 0
    assert combo.coefficient_list(0, 3) == [1, 4, 20, 110]


def test_unknown_named():
    with pytest.raises(KeyError):
        build_named("S9", 10)


@pytest.mark.parametrize("ident", list(IdentityId))
def test_identities(ident, enumerated, v3):
    def provider(which, N):
        if which == "V3":
            return v3(N)
        return enumerated("friendly" if which == "F3" else "inf-friendly", 3, N)

    res = verify_identity(ident, 100, provider)
    assert res.order == 100 and res.is_zero()


def test_derivative_and_contiguous_forms_agree():
    # both right-hand sides equal the Heun series, hence each other
    diff = verify_identity("rh-deriv", 80) - verify_identity("contiguous", 80)
    assert diff.is_zero()


def test_identity_parse():
    assert IdentityId.parse("s1-square") is IdentityId.S1_AS_H_SQUARED
    assert IdentityId.parse("KUMMER_FORM") is IdentityId.KUMMER_FORM
    with pytest.raises(KeyError):
        IdentityId.parse("eq99")


def test_identity_detects_wrong_input():
    bad = lambda which, N: LaurentSeries.constant(1, N)  # noqa: E731
    res = verify_identity("h-decomp", 60, bad)
    assert not res.is_zero()
