import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from melonkit.dfinite import catalog, to_recurrence
from melonkit.series import LaurentSeries
from melonkit.walkers import (
    GapStateTable,
    Rule,
    UnsupportedModel,
    WalkerModel,
    _enumerate_generic,
    bijection_check,
    dp_step,
    enumerate_counts,
    enumerate_series,
    initial_table,
    move_deltas,
)

V3_HEAD = [1, 2, 6, 22, 92, 422, 2074, 10754]


def test_vicious_three():
    assert enumerate_counts(WalkerModel(3, Rule.VICIOUS), 7) == V3_HEAD


def test_super_friendly_three():
    assert enumerate_counts(WalkerModel(3, "super"), 7) == V3_HEAD


def test_friendly_terminal_three():
    assert enumerate_counts(WalkerModel(3, "friendly"), 6) == [1, 0, 2, 6, 24, 110, 550]


def test_inf_friendly_first_step():
    assert enumerate_counts(WalkerModel(3, "inf-friendly"), 1) == [1, 2]


def test_single_walker_is_free():
    assert enumerate_counts(WalkerModel(1, "vicious"), 3) == [1, 2, 4, 8]


def test_inf_friendly_step_from_start():
    m = WalkerModel(3, Rule.INFINITY_FRIENDLY)
    nxt = dp_step(m, initial_table(m))
    assert nxt[(2, 2)] == 2
    assert nxt.total() == 8


def test_vicious_step_drops_touching_gaps():
    m = WalkerModel(3, Rule.VICIOUS)
    nxt = dp_step(m, initial_table(m))
    assert all(g > 0 for gaps in nxt.counts for g in gaps)
    assert nxt.total() == 8 - 4


def test_super_friendly_step_drops_only_crossings():
    # of the 8 joint moves from the all-together state, 4 would cross
    m = WalkerModel(3, Rule.SUPER_FRIENDLY)
    nxt = dp_step(m, GapStateTable({(0, 0): 1}, 0))
    assert nxt.counts == {(0, 0): 2, (2, 0): 1, (0, 2): 1}


def _brute_states(model: WalkerModel, T: int) -> dict:
    """Gap-state counts after T steps by listing every joint path of positions."""
    start = [0]
    for g in model.start:
        start.append(start[-1] + g)
    out: dict = {}

    def ok(ys, final):
        gaps = tuple(b - a for a, b in zip(ys, ys[1:]))
        if any(g < 0 for g in gaps):
            return False
        if model.rule is Rule.VICIOUS:
            return all(gaps)
        if model.rule is Rule.INFINITY_FRIENDLY:
            return not any(a == 0 == b for a, b in zip(gaps, gaps[1:]))
        if model.rule is Rule.FRIENDLY_TERMINAL:
            return final or any(gaps)
        return True

    for moves in itertools.product(itertools.product((1, -1), repeat=model.p), repeat=T):
        ys = list(start)
        alive = True
        for t, mv in enumerate(moves, 1):
            ys = [y + d for y, d in zip(ys, mv)]
            if not ok(ys, t == T):
                alive = False
                break
        if alive:
            key = tuple(b - a for a, b in zip(ys, ys[1:]))
            out[key] = out.get(key, 0) + 1
    return out


@pytest.mark.parametrize("rule", list(Rule))
@pytest.mark.parametrize("p,T", [(2, 4), (3, 3)])
def test_dp_matches_path_listing(rule, p, T):
    m = WalkerModel(p, rule)
    table = initial_table(m)
    for _ in range(T):
        table = dp_step(m, table)
    want = _brute_states(m, T)
    got = {k: v for k, v in table.counts.items() if v}
    assert got == want


def test_move_deltas_mass():
    for p in range(1, 6):
        assert sum(move_deltas(p).values()) == 2**p


@pytest.mark.parametrize("p,N", [(3, 12), (2, 12), (4, 10)])
def test_bijection(p, N):
    assert bijection_check(p, N)


def test_friendly_needs_two_walkers():
    with pytest.raises(UnsupportedModel):
        WalkerModel(1, Rule.FRIENDLY_TERMINAL)


def test_unknown_rule():
    with pytest.raises(UnsupportedModel):
        WalkerModel(3, "osculating")


def test_negative_length():
    with pytest.raises(ValueError):
        enumerate_counts(WalkerModel(3, "vicious"), -1)


@pytest.mark.parametrize("rule", list(Rule))
def test_fast_path_matches_generic(rule):
    m = WalkerModel(3, rule)
    generic = _enumerate_generic(m, 30)
    if rule is Rule.FRIENDLY_TERMINAL:
        generic[1] = 0
    assert enumerate_counts(m, 30) == generic


def test_vicious_satisfies_recurrence():
    rec = to_recurrence(catalog("V3_ODE"))
    c = enumerate_counts(WalkerModel(3, "vicious"), 200)
    for n in range(max(rec.polys), 201):
        assert rec.relation_residual(c, n) == 0


@pytest.mark.parametrize("p,N", [(2, 20), (3, 60), (4, 20), (5, 12)])
def test_friendly_reciprocal_identity(p, N):
    v = enumerate_series(WalkerModel(p, "vicious"), N)
    f = enumerate_series(WalkerModel(p, "friendly"), N)
    target = LaurentSeries.from_poly([2, -2], N) - v.inv()
    assert f == target


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(list(Rule)), st.integers(2, 4), st.integers(0, 8))
def test_gap_parity_and_mass(rule, p, T):
    m = WalkerModel(p, rule)
    table = initial_table(m)
    for _ in range(T):
        before = table.total()
        table = dp_step(m, table)
        assert all(g % 2 == 0 and g >= 0 for gaps in table.counts for g in gaps)
        assert table.total() <= before * 2**p
        if rule is Rule.VICIOUS:
            assert all(g >= 2 for gaps in table.counts for g in gaps)
        if rule is Rule.INFINITY_FRIENDLY:
            assert not any(a == 0 == b for gaps in table.counts for a, b in zip(gaps, gaps[1:]))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(list(Rule)), st.integers(2, 4), st.integers(0, 10))
def test_leading_coefficient_and_prefix(rule, p, N):
    m = WalkerModel(p, rule)
    c = enumerate_counts(m, N)
    assert c[0] == 1 and len(c) == N + 1
    assert all(v >= 0 for v in c)
    longer = enumerate_counts(m, N + 3)
    assert longer[: N + 1] == c
