import pytest
from hypothesis import given, settings, strategies as st

from gqscreen.errors import InfeasibleError, NotThickError
from gqscreen.gq import (
    GqOrder,
    SubGqOrder,
    coprime_sweep,
    divisibility_ok,
    divisibility_ok_alt,
    enumerate_orders,
    higman_ok,
    integer_root,
    is_feasible,
    line_count,
    nagell_ljunggren_scan,
    perfect_powers,
    point_count,
    srg_params,
    subgq_admissible,
    subgq_chain_forces,
    useful_bounds,
)


@pytest.mark.parametrize("s,t,v", [(2, 2, 15), (57, 57, 188500), (76, 449, 2627625)])
def test_point_count(s, t, v):
    assert point_count(GqOrder(s, t)) == v


@pytest.mark.parametrize("s,t,b", [(2, 2, 15), (3, 5, 96), (4, 2, 27)])
def test_line_count(s, t, b):
    assert line_count(GqOrder(s, t)) == b


def test_point_count_is_exact_for_huge_orders():
    s = t = 10**40
    assert point_count(GqOrder(s, t)) == (s + 1) * (s * t + 1)


@pytest.mark.parametrize("s,t,ok", [(2, 4, True), (2, 7, False), (11, 19, True)])
def test_higman(s, t, ok):
    assert higman_ok(GqOrder(s, t)) is ok


@pytest.mark.parametrize("s,t", [(3, 5), (15, 17), (2, 2)])
def test_divisibility_examples(s, t):
    assert divisibility_ok(GqOrder(s, t))


@pytest.mark.parametrize("s,t,ok", [(4, 2, True), (2, 7, False), (1, 5, False)])
def test_is_feasible(s, t, ok):
    assert is_feasible(GqOrder(s, t)) is ok


@pytest.mark.parametrize("fn", [higman_ok, divisibility_ok, divisibility_ok_alt, srg_params, useful_bounds])
def test_thin_orders_rejected(fn):
    with pytest.raises(NotThickError):
        fn(GqOrder(1, 5))


def test_order_entries_positive():
    with pytest.raises(ValueError):
        GqOrder(0, 3)


@pytest.mark.parametrize(
    "v,orders", [(2520, [(11, 19)]), (45, [(4, 2)]), (75075, []), (15, [(2, 2)]), (1, [])]
)
def test_enumerate_orders(v, orders):
    assert [(o.s, o.t) for o in enumerate_orders(v)] == orders


def test_enumerate_orders_against_brute_force():
    limit = 20000
    by_v = {}
    for s in range(2, limit):
        for t in range(2, limit):
            v = (s + 1) * (s * t + 1)
            if v >= limit:
                break
            if is_feasible(GqOrder(s, t)):
                by_v.setdefault(v, []).append(GqOrder(s, t))
    for v in range(1, limit):
        assert enumerate_orders(v) == by_v.get(v, []), v


@pytest.mark.parametrize("s_max,hits", [(100, [(7, 20, 2)]), (6, []), (10**5, [(7, 20, 2)])])
def test_nagell_ljunggren(s_max, hits):
    assert nagell_ljunggren_scan(s_max) == hits


def test_integer_root_and_powers():
    assert integer_root(400, 2) == 20
    assert integer_root(399, 2) == 19
    assert integer_root(3**100, 100) == 3
    assert integer_root(3**100 - 1, 100) == 2
    assert (20, 2) in perfect_powers(400)


@given(st.integers(0, 10**60), st.integers(2, 12))
def test_integer_root_property(x, k):
    r = integer_root(x, k)
    assert r**k <= x < (r + 1) ** k


@pytest.mark.parametrize("limit", [2, 20, 200])
def test_coprime_sweep_empty(limit):
    assert coprime_sweep(limit) == []


@pytest.mark.parametrize(
    "amb,sub,ok", [((4, 4), (4, 2), True), ((4, 4), (2, 2), True), ((4, 4), (3, 2), False)]
)
def test_subgq_admissible(amb, sub, ok):
    assert subgq_admissible(GqOrder(*amb), SubGqOrder(*sub)) is ok


def test_subgq_admissible_rejects_ambient():
    with pytest.raises(ValueError):
        subgq_admissible(GqOrder(4, 4), SubGqOrder(4, 4))


def test_subgq_chain():
    assert subgq_chain_forces(4, 4) == (1, 16)
    assert subgq_chain_forces(2, 2) == (1, 4)
    with pytest.raises(ValueError):
        subgq_chain_forces(4, 3)


def test_useful_bounds_examples():
    b = useful_bounds(GqOrder(2, 2))
    assert b == (243 - 15, 81 - 15, 225 - 32)
    assert useful_bounds(GqOrder(57, 57)).t_plus1_pow5 == 656356768 - 188500
    b = useful_bounds(GqOrder(76, 449))
    assert b.s_plus1_pow4 == 35153041 - 2627625 and b.t_plus1_pow5 > 0


def test_useful_bounds_all_feasible_upto_1000():
    for s in range(2, 1001):
        for t in range(max(2, integer_root(s, 2)), min(s * s, 1000) + 1):
            o = GqOrder(s, t)
            if is_feasible(o):
                assert min(useful_bounds(o)) > 0


def test_srg_params_examples():
    assert srg_params(GqOrder(2, 2)).params == (15, 6, 1, 3)
    assert srg_params(GqOrder(9, 3)).params == (280, 36, 8, 4)
    assert srg_params(GqOrder(57, 57)).k == 3306


def test_srg_params_rejects_non_integral_multiplicities():
    with pytest.raises(InfeasibleError):
        srg_params(GqOrder(2, 7))


def test_srg_identity_and_integrality_follow_divisibility():
    for s in range(2, 101):
        for t in range(2, 101):
            o = GqOrder(s, t)
            if not divisibility_ok(o):
                continue
            p = srg_params(o)
            assert p.k * (p.k - p.lam - 1) == (p.v - p.k - 1) * p.mu
            assert p.multiplicities_integral
            assert p.m_plus + p.m_minus == p.v - 1


def test_divisibility_forms_agree_exhaustively():
    for s in range(2, 301):
        for t in range(2, 301):
            o = GqOrder(s, t)
            assert divisibility_ok(o) == divisibility_ok_alt(o)


@given(st.integers(2, 10**6), st.integers(2, 10**6))
def test_divisibility_forms_agree_random(s, t):
    o = GqOrder(s, t)
    assert divisibility_ok(o) == divisibility_ok_alt(o)


@given(st.integers(1, 100), st.integers(1, 100))
def test_duality_of_counts(s, t):
    assert point_count(GqOrder(s, t)) == line_count(GqOrder(t, s))


@settings(max_examples=300)
@given(st.integers(2, 100), st.integers(2, 100))
def test_enumerate_recovers_feasible_order(s, t):
    o = GqOrder(s, t)
    if is_feasible(o):
        assert o in enumerate_orders(point_count(o))
