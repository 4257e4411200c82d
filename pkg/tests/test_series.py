from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from melonkit.series import (
    BadInnerValuation,
    LaurentSeries,
    NonUnitConstantTerm,
    PrecisionError,
    ZeroLeadingCoefficient,
    ls_arith,
    ls_compose,
    ls_deriv,
    ls_inv,
    ls_pow_rat,
    rf_expand,
    x,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def series(draw, min_val=-3, max_val=3, exact=None, unit=False):
    n = draw(st.integers(1, 12))
    coeffs = draw(st.lists(small, min_size=n, max_size=n))
    if unit:
        coeffs[0] = F(1)
    elif coeffs[0] == 0:
        coeffs[0] = F(1)
    v = 0 if unit else draw(st.integers(min_val, max_val))
    if exact is None:
        exact = draw(st.booleans())
    order = None if exact else v + n - 1 + draw(st.integers(0, 3))
    return LaurentSeries(coeffs, v, order)


def agree(a: LaurentSeries, b: LaurentSeries) -> bool:
    """Equal on every coefficient both know."""
    orders = [o for o in (a.order, b.order) if o is not None]
    if not orders:
        return a == b
    n = min(orders)
    return a.truncate(n) == b.truncate(n)


# -- examples ----------------------------------------------------------------------


def test_product_difference_of_squares():
    assert (1 + x) * (1 - x) == 1 - x * x


def test_pullback_expansion():
    s = rf_expand([0, 0, 27], [1, -6, 12, -8], 6)
    assert s.coefficient_list(0, 6) == [0, 0, 27, 162, 648, 2160, 6480]


def test_half_power_of_one_minus_8x():
    s = (1 - 8 * x).truncate(10).pow_rat(F(1, 2))
    assert s.coefficient_list(0, 3) == [1, -4, -8, -32]
    assert (s * s).truncate(10) == LaurentSeries.from_poly([1, -8], 10)


def test_minus_three_halves_power():
    s = ls_pow_rat((1 - 8 * x).truncate(5), F(-3, 2))
    assert s.coefficient_list(0, 2) == [1, 12, 120]


def test_derivative_of_reciprocal_monomial():
    assert ls_deriv(LaurentSeries.monomial(-1)) == -LaurentSeries.monomial(-2)


def test_precision_error_beyond_order():
    s = LaurentSeries([1, 2, 3], 0, 2)
    with pytest.raises(PrecisionError):
        s[3]


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroLeadingCoefficient):
        LaurentSeries.zero(5).inv()


def test_rational_power_needs_unit_constant():
    with pytest.raises(NonUnitConstantTerm):
        LaurentSeries([2, 1], 0, 5).pow_rat(F(1, 2))


def test_compose_requires_positive_inner_valuation():
    with pytest.raises(BadInnerValuation):
        ls_compose(LaurentSeries([1, 1], 0, 4), LaurentSeries([1, 1], 0, 4))


def test_precision_rules():
    a = LaurentSeries([1, 1], 0, 10)
    b = LaurentSeries([1, 2], 2, 8)
    assert (a * b).order == min(10 + 2, 8 + 0)
    assert LaurentSeries([1, 1], 2, 9).inv().order == 9 - 4
    inner = LaurentSeries([1, 1], 1, 6)
    outer = LaurentSeries([1, 1, 1], 0, 3)
    assert ls_compose(outer, inner).order == min((3 + 1) * 1 - 1, 6)


def test_ls_arith_kinds():
    a, b = LaurentSeries([1, 2], 0, 5), LaurentSeries([3], 1, 5)
    assert ls_arith(a, b, "add") == a + b
    assert ls_arith(a, b, "sub") == a - b
    assert ls_arith(a, b, "mul") == a * b
    assert ls_arith(a, F(1, 2), "scale") == a * F(1, 2)


def test_text_and_json_round_trip_exact_zero():
    z = LaurentSeries.zero(7)
    assert LaurentSeries.from_json(z.to_json()) == z
    assert LaurentSeries.from_text(z.to_text()) == z


# -- properties ------------------------------------------------------------------------


@given(series(), series())
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(series(), series(), series())
def test_multiplication_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series(), series(), series())
def test_distributive_on_known_part(a, b, c):
    assert agree(a * (b + c), a * b + a * c)


@given(series())
def test_inverse(a):
    inv = ls_inv(a) if a.order is not None else ls_inv(a, 10)
    prod = a * inv
    assert agree(prod, LaurentSeries.constant(1))
    if a.order is not None:
        assert inv.order == a.order - 2 * a.valuation


@given(series(unit=True, exact=False), st.integers(1, 5), st.integers(-4, 4))
def test_rational_power_roundtrip(a, den, num):
    e = F(num, den)
    r = a.pow_rat(e)
    assert agree(r.pow_rat(F(den)), a.pow_rat(F(num)))


@given(series(), series())
def test_leibniz(a, b):
    assert agree((a * b).deriv(), a.deriv() * b + a * b.deriv())


@given(series(min_val=0, exact=False), series(min_val=1, max_val=3, exact=False))
def test_chain_rule(f, g):
    lhs = ls_compose(f, g).deriv()
    rhs = ls_compose(f.deriv(), g) * g.deriv() if f.order - f.valuation >= 1 else lhs
    assert agree(lhs, rhs)


@given(series(min_val=0))
def test_compose_with_x_is_identity(f):
    ident = LaurentSeries.monomial(1)
    assert agree(ls_compose(f, ident), f)


@given(series())
def test_json_round_trip(a):
    assert LaurentSeries.from_json(a.to_json()) == a
    assert LaurentSeries.from_text(a.to_text()) == a


@settings(max_examples=50)
@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=4), st.integers(0, 15))
def test_rf_expand_matches_division(num, den, N):
    den[0] = den[0] or F(1)
    s = rf_expand(num, den, N)
    assert s.order == N
    back = (s * LaurentSeries.from_poly(den)).truncate(N)
    assert back == LaurentSeries.from_poly(num, N)
