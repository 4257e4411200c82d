from fractions import Fraction as F

import flint
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from melonkit import catalog as cat
from melonkit.dfinite import (
    CATALOG_NAMES,
    DiffOp,
    InconsistentSeed,
    InhomODE,
    InsufficientOrder,
    NotSingular,
    UnderdeterminedAtIndex,
    UnknownName,
    apply_op,
    catalog,
    indicial_exponents,
    solve_series,
    to_recurrence,
)
from melonkit.series import LaurentSeries
from melonkit.special import build_named, hyper_series, HYP_H
from melonkit.walkers import WalkerModel, enumerate_counts

V3 = catalog("V3_ODE")


def test_v3_solution_head():
    assert solve_series(V3, (), 7).coefficient_list(0, 7) == [1, 2, 6, 22, 92, 422, 2074, 10754]


def test_v3_matches_enumeration(v3_2000):
    assert v3_2000.coefficient_list(0, 200) == enumerate_counts(WalkerModel(3, "vicious"), 200)


def test_v3_annihilated_by_enumeration():
    v = LaurentSeries(enumerate_counts(WalkerModel(3, "vicious"), 150), 0, 150)
    res = apply_op(V3, v)
    assert res.order >= 147 and res.is_zero()


def test_apply_to_constant():
    res = apply_op(V3, LaurentSeries.constant(1))
    assert res == LaurentSeries.from_poly([0, -40, -16])


def test_apply_needs_enough_terms():
    with pytest.raises(InsufficientOrder):
        apply_op(V3, LaurentSeries([1, 2], 0, 1))
    with pytest.raises(InsufficientOrder):
        apply_op(V3, LaurentSeries([1, 2, 6, 22], 0, 3), need=10)


def test_recurrence_low_relations():
    rec = to_recurrence(V3)
    assert rec.free_indices == ()
    # 12 c0 = 12 and 20 c1 = 40 c0
    assert rec.relation_residual({0: 1}, 0) == 0
    assert rec.relation_residual({0: 2}, 0) == 12
    assert rec.relation_residual({0: 1, 1: 2}, 1) == 0
    assert rec.relation_residual({0: 1, 1: 1}, 1) == -20


def test_recurrence_polys_v3():
    assert to_recurrence(V3).polys == {0: (12, 7, 1), 1: (-40, -35, -7), 2: (-16, -24, -8)}


def test_hypergeometric_operator_needs_seed():
    op = catalog("L_HYP")
    assert to_recurrence(op).free_indices == (0,)
    with pytest.raises(UnderdeterminedAtIndex) as e:
        solve_series(op, (), 10)
    assert e.value.n == 0
    s = solve_series(op, {0: 1}, 10)
    assert s.coefficient_list(0, 4) == [1, 0, 6, 36, 234]
    # independent route: the hypergeometric series composed with its pullback
    assert s == hyper_series(HYP_H, 10)


def test_seed_contradiction():
    with pytest.raises(InconsistentSeed):
        solve_series(V3, [(0, 2)], 5)
    # consistent redundant seed is accepted
    assert solve_series(V3, [(1, 2)], 5)[5] == 422


def test_inconsistent_low_relation():
    # x f' = 1 has no power-series solution
    with pytest.raises(InconsistentSeed):
        solve_series(InhomODE(DiffOp(((), (0, 1))), (1,)), (), 4)


def test_l5_forward_solution_is_h():
    h = solve_series(catalog("L5"), (), 60)
    assert h.coefficient_list(0, 4) == [1, 4, 20, 110, 638]
    assert to_recurrence(catalog("L5")).free_indices == ()


def test_l5_annihilates_product(series_cache, enumerated, v3):
    f = enumerated("inf-friendly", 3, 120)
    h = f * v3(120)
    res = apply_op(catalog("L5"), h)
    assert res.order >= 100 and res.is_zero()


@pytest.mark.parametrize(
    "name,x0,want",
    [
        ("V3_ODE", F(1, 8), [0, 3]),
        ("V3_ODE", -1, [0, 3]),
        ("V3_ODE", 0, [-4, -3]),
        ("L3", F(1, 8), [0, 3, 12]),
        ("L3", -1, [0, 3, 9]),
        ("L2", F(1, 8), [0, 3]),
        ("L5", F(1, 8), [0, 1, 3, 4, 12]),
        ("L5", -1, [0, 1, 3, 4, 9]),
        ("L_HYP", F(1, 2), [1, 2]),
    ],
)
def test_indicial_exponents(name, x0, want):
    assert indicial_exponents(catalog(name), x0) == [F(w) for w in want]


def test_indicial_numeric_point():
    roots = indicial_exponents(catalog("V3_ODE"), flint.acb(0.125))
    assert len(roots) == 2
    assert abs(complex(roots[0].mid())) < 1e-20
    assert abs(complex(roots[1].mid()) - 3) < 1e-20


def test_not_singular():
    with pytest.raises(NotSingular):
        indicial_exponents(catalog("V3_ODE"), F(1, 2))


def test_catalog_shapes():
    assert V3.order == 2 and V3.rhs == (12,)
    l5 = catalog("L5")
    assert l5.order == 5 and not l5.homogeneous
    assert len(cat.L5_Q11) == 12
    want = cat.pmul(cat.xpow(5), cat.ppow(cat.ONE_MINUS_8X, 3), cat.ppow(cat.ONE_PLUS_X, 3), cat.L5_Q11)
    assert l5.op.leading == want
    assert catalog("L2").order == 2 and catalog("L3").order == 3
    assert set(CATALOG_NAMES) == {"V3_ODE", "L_HEUN", "L_HYP", "L5", "L3", "L2"}


def test_catalog_checksum():
    assert cat.catalog_fingerprint() == cat.CATALOG_SHA256


def test_unknown_name():
    with pytest.raises(UnknownName):
        catalog("L7")


def test_l3_l2_annihilate_named_solutions():
    s1 = build_named("S1", 230)
    s2 = build_named("S2", 230)
    r1 = apply_op(catalog("L3"), s1)
    r2 = apply_op(catalog("L2"), s2)
    assert r1.order >= 200 and r1.is_zero()
    assert r2.order >= 200 and r2.is_zero()


# -- properties ------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 120))
def test_v3_solution_is_annihilated(N):
    s = solve_series(V3, (), N)
    res = apply_op(V3, s)
    assert res.order >= N - 3 and res.is_zero()


def test_deterministic():
    assert solve_series(V3, (), 300) == solve_series(V3, (), 300)


small = st.integers(-6, 6)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.lists(small, min_size=1, max_size=3), min_size=2, max_size=4),
    st.lists(small, max_size=3),
    st.integers(8, 25),
    st.data(),
)
def test_solutions_solve(qs, rhs, N, data):
    assume(any(qs[-1]))
    ode = InhomODE(DiffOp(tuple(map(tuple, qs))), tuple(rhs))
    rec = to_recurrence(ode)
    seeds = {i: data.draw(st.integers(-3, 3)) for i in rec.free_indices if i <= N}
    try:
        s = solve_series(ode, seeds, N)
    except InconsistentSeed:
        assume(False)
    res = apply_op(ode, s)
    assert res.truncate(min(res.order, N - ode.order)).is_zero()
    for n in range(0, N - max(0, rec.max_shift) + 1):
        if n - rec.min_shift <= N:
            assert rec.relation_residual(s.coefficient_list(0, N), n) == 0
