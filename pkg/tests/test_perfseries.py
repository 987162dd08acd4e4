import random
from fractions import Fraction

import pytest

from isolab import (PerfectedSeries, RestrictedParams, membership_ECd,
                    membership_restricted, ps_add, ps_compose, ps_embed,
                    ps_frobenius, ps_mul, ps_pow, ps_truncate_ideal,
                    rigidity_check, slope_exponents)
from isolab.errors import (DegreeBoundTooSmall, MalformedInput,
                           NonzeroConstantTerm, ParameterMismatch,
                           SequenceTooShort, SlopeOrderViolated)
from isolab.perfseries import ps_neg, ps_scale

F = Fraction


def mono(p, exp, D=8, k=1, nvars=1, coeff=None):
    """One-term series c * X^exp (exp a tuple for nvars > 1)."""
    if not isinstance(exp, tuple):
        exp = (exp,)
    exps = tuple(F(e) for e in exp)
    c = coeff if coeff is not None else tuple([1] + [0] * (k - 1))
    return PerfectedSeries(p, nvars, k, D, {exps: c})


def X(p=2, D=8, nvars=1, slot=0):
    exp = tuple(F(1) if i == slot else F(0) for i in range(nvars))
    return mono(p, exp, D=D, nvars=nvars)


def badseries(D=16):
    """sum_{i=1..D} X^(i + 1/2^i) over F_2."""
    terms = {(F(i) + F(1, 2 ** i),): (1,) for i in range(1, D + 1)}
    return PerfectedSeries(2, 1, 1, D, terms)


def test_mul_adds_fractional_exponents():
    a = mono(5, F(1, 5))
    prod = ps_mul(a, a)
    assert prod.terms == {(F(2, 5),): (1,)}


def test_char2_square_kills_cross_term():
    one_plus = ps_add(mono(2, 0), mono(2, F(1, 2)))
    sq = ps_mul(one_plus, one_plus)
    assert sq.terms == {(F(0),): (1,), (F(1),): (1,)}


def test_add_commutative_associative_random():
    rng = random.Random(5)

    def rand_series():
        terms = {}
        for _ in range(rng.randrange(1, 5)):
            e = F(rng.randrange(0, 16), 2 ** rng.randrange(0, 3))
            terms[(e,)] = (1,)
        return PerfectedSeries(2, 1, 1, 8, terms)

    for _ in range(20):
        a, b, c = rand_series(), rand_series(), rand_series()
        assert ps_add(a, b).terms == ps_add(b, a).terms
        assert ps_add(ps_add(a, b), c).terms == ps_add(a, ps_add(b, c)).terms


def test_degree_bound_drops_terms():
    a = mono(2, 5, D=8)
    b = mono(2, 6, D=8)
    assert ps_mul(a, b).is_zero()  # 11 > 8


def test_parameter_mismatch():
    with pytest.raises(ParameterMismatch):
        ps_add(mono(2, 1), mono(3, 1))


def test_exponent_validation():
    with pytest.raises(MalformedInput):
        mono(2, F(1, 3))  # denominator not a power of p
    with pytest.raises(MalformedInput):
        mono(2, -1)


def test_frobenius_relative_forward():
    assert ps_frobenius(X(), "forward").terms == {(F(2),): (1,)}
    a = mono(2, F(1, 2))
    assert ps_frobenius(a, "forward").terms == {(F(1),): (1,)}


def test_frobenius_inverse_then_forward():
    a = ps_add(mono(2, 1), mono(2, F(3, 2)))
    back = ps_frobenius(ps_frobenius(a, "inverse"), "forward")
    assert back.terms == a.terms


def test_frobenius_forward_then_inverse_truncates():
    # X^5 at D=8: forward gives X^10, dropped; the round trip loses it
    a = ps_add(mono(2, 3), mono(2, 5))
    rt = ps_frobenius(ps_frobenius(a, "forward"), "inverse")
    assert rt.terms == {(F(3),): (1,)}


def test_frobenius_absolute_on_f4():
    # F_4 = F_2[t]/(t^2+t+1); t squares to t+1, fixed by neither flavor's
    # relative version
    t_coeff = (0, 1)
    a = mono(2, 1, k=2, coeff=t_coeff)
    rel = ps_frobenius(a, "forward", "relative")
    assert rel.terms[(F(2),)] == (0, 1)
    ab = ps_frobenius(a, "forward", "absolute")
    assert ab.terms[(F(2),)] == (1, 1)  # t^2 = t + 1


def test_frobenius_absolute_round_trip():
    a = mono(2, 1, k=2, coeff=(0, 1))
    rt = ps_frobenius(ps_frobenius(a, "forward", "absolute"),
                      "inverse", "absolute")
    assert rt.terms == a.terms


def test_truncate_power_ideal():
    assert not ps_truncate_ideal(mono(2, F(3, 2)), "power", 2).is_zero()
    assert ps_truncate_ideal(mono(2, F(5, 2)), "power", 2).is_zero()


def test_truncate_frobenius_ideal():
    assert not ps_truncate_ideal(X(), "frobenius", 1).is_zero()
    assert ps_truncate_ideal(mono(2, 2), "frobenius", 1).is_zero()


def test_compose_square():
    f = mono(2, 2, D=8)  # u^2
    g = mono(2, F(1, 2), D=8)
    assert ps_compose(f, [g]).terms == {(F(1),): (1,)}


def test_compose_cancellation():
    # f(u, v) = u - v composed on (g, g) = 0; char 2 so u + v works
    f = ps_add(X(nvars=2, slot=0), X(nvars=2, slot=1))
    g = ps_add(mono(2, 1), mono(2, F(1, 2)))
    assert ps_compose(f, [g, g]).is_zero()


def test_compose_matches_direct_expansion():
    # f(u) = u + u^3, g = X^(1/2) + X, p = 2, D = 4
    f = ps_add(mono(2, 1, D=4), mono(2, 3, D=4))
    g = ps_add(mono(2, F(1, 2), D=4), mono(2, 1, D=4))
    via_compose = ps_compose(f, [g])
    direct = ps_add(g, ps_mul(ps_mul(g, g), g))
    assert via_compose.terms == direct.terms


def test_compose_rejects_constant_term():
    f = X()
    g = mono(2, 0)
    with pytest.raises(NonzeroConstantTerm):
        ps_compose(f, [g])


def test_embed_disjoint_blocks():
    a = X(p=2)
    left = ps_embed(a, 2, 0)
    right = ps_embed(a, 2, 1)
    assert left.terms == {(F(1), F(0)): (1,)}
    assert right.terms == {(F(0), F(1)): (1,)}
    # product model: term maps over disjoint blocks multiply to the joined
    prod = ps_mul(left, right)
    assert prod.terms == {(F(1), F(1)): (1,)}


# ---- membership ----

def test_restricted_params_validation():
    with pytest.raises(MalformedInput):
        RestrictedParams(2, 2, 0)
    with pytest.raises(MalformedInput):
        RestrictedParams(1, 2, -1)


def test_ordinary_series_always_member():
    a = ps_add(mono(2, 1), mono(2, 7))
    for params in (RestrictedParams(1, 2, 0), RestrictedParams(1, 3, 2),
                   RestrictedParams(2, 3, 1)):
        ok, wit = membership_restricted(a, params)
        assert ok and wit is None


def test_badseries_rejected_both_methods():
    a = badseries()
    params = RestrictedParams(1, 2, 0)
    for method in ("definitional", "closed_form", "both"):
        ok, wit = membership_restricted(a, params, method=method)
        assert not ok
        assert wit["exp"] == [{"num": 25, "pexp": 3}]


def test_x_to_1_over_p_with_n0_1():
    a = mono(2, F(1, 2))
    ok, _ = membership_restricted(a, RestrictedParams(1, 2, 1))
    assert ok
    ok0, wit0 = membership_restricted(a, RestrictedParams(1, 2, 0))
    assert not ok0 and wit0["ord"] == 1


def test_definitional_closed_form_agree_random():
    rng = random.Random(60)
    for _ in range(300):
        p = rng.choice([2, 3])
        terms = {}
        for _ in range(rng.randrange(1, 6)):
            e = F(rng.randrange(0, 8 * p ** 3 + 1), p ** rng.randrange(0, 4))
            if e <= 8:
                terms[(e,)] = (1,)
        if not terms:
            continue
        a = PerfectedSeries(p, 1, 1, 8, terms)
        r = rng.randrange(1, 3)
        s = r + rng.randrange(1, 3)
        params = RestrictedParams(r, s, rng.randrange(0, 3))
        okd, _ = membership_restricted(a, params, method="definitional")
        okc, _ = membership_restricted(a, params, method="closed_form")
        assert okd == okc


def test_membership_monotone_in_n0():
    a = ps_add(mono(2, F(1, 4)), mono(2, 3))
    decisions = []
    for n0 in range(4):
        ok, _ = membership_restricted(a, RestrictedParams(1, 2, n0))
        decisions.append(ok)
    for earlier, later in zip(decisions, decisions[1:]):
        assert later or not earlier


def test_ecd_ordinary_member():
    a = ps_add(mono(2, 1), mono(2, 2))
    ok, wit = membership_ECd(a, F(1), F(1), F(0))
    assert ok and wit is None


def test_ecd_x_to_half():
    a = mono(2, F(1, 2))
    ok, _ = membership_ECd(a, F(1), F(2), F(1))
    assert ok  # 2 <= 2 * (1/2 + 1)


def test_ecd_badseries_rejected():
    ok, wit = membership_ECd(badseries(), F(1), F(2), F(0))
    assert not ok
    assert wit is not None


def test_ecd_monotone_in_C():
    a = mono(2, F(1, 4))
    member_small, _ = membership_ECd(a, F(1), F(1, 2), F(0))
    member_large, _ = membership_ECd(a, F(1), F(16), F(0))
    assert member_large or not member_small


# ---- rigidity ----

def test_rigidity_positive_instance():
    # both composition slots carry the same series: every congruence is
    # 0 mod anything and the doubled evaluation vanishes
    u = X(nvars=2, slot=0, D=16)
    v = X(nvars=2, slot=1, D=16)
    f = ps_add(u, v)  # u - v in char 2
    g = X(D=16)
    rep = rigidity_check(f, [g, g], [], 1, [1, 3, 9], powered_block="g")
    assert rep["congruences"] == [True, True, True]
    assert rep["ratio_ok"] and rep["evaluation_zero"]


def test_rigidity_negative_instance():
    # f = u, g = [X]: X^{q^n} is in (X)^{d_n} only while d_n <= q^n.
    # Strict ratio decrease forces d_1 > q, so the first failure is n = 1.
    f = X(D=24)
    g = X(D=24)
    rep = rigidity_check(f, [g], [], 2, [1, 5, 21], powered_block="g")
    assert rep["congruences"] == [True, False, False]
    assert rep["ratio_ok"]
    assert not rep["evaluation_zero"]


def test_rigidity_ratio_violation_flagged():
    f = ps_add(X(nvars=2, slot=0, D=16), X(nvars=2, slot=1, D=16))
    g = X(D=16)
    rep = rigidity_check(f, [g, g], [], 1, [2, 4, 8], powered_block="g")
    assert not rep["ratio_ok"]  # q^n/d_n constant, not strictly decreasing


def test_rigidity_empty_dseq():
    with pytest.raises(SequenceTooShort):
        rigidity_check(X(), [X()], [], 1, [])


def test_rigidity_degree_bound_guard():
    with pytest.raises(DegreeBoundTooSmall):
        rigidity_check(X(D=4), [X(D=4)], [], 1, [1, 2, 50])


def test_rigidity_h_block_powered():
    # same positive shape but exercising the other reading: h powered
    u = X(nvars=2, slot=0, D=16)
    v = X(nvars=2, slot=1, D=16)
    f = ps_add(u, v)
    g = X(D=16)
    rep = rigidity_check(f, [g], [g], 1, [1, 3, 9], powered_block="h")
    assert rep["ratio_ok"]
    assert rep["congruences"][0] in (True, False)  # well-formed report


# ---- slope exponents ----

def test_slope_exponents_basic():
    assert slope_exponents(F(1, 2), F(1, 3)) == (1, 2, 3)
    assert slope_exponents(F(1), F(1, 2)) == (1, 1, 2)


def test_slope_exponents_nontrivial_numerators():
    a, r, s = slope_exponents(F(2, 3), F(1, 2))
    assert F(a, r) == F(2, 3) and F(a, s) == F(1, 2) and s > r


def test_slope_exponents_order_violation():
    with pytest.raises(SlopeOrderViolated):
        slope_exponents(F(1, 2), F(1, 2))
    with pytest.raises(SlopeOrderViolated):
        slope_exponents(F(1, 3), F(1, 2))


# ---- serialization ----

def test_json_round_trip():
    a = ps_add(mono(2, F(3, 4)), mono(2, 2))
    b = PerfectedSeries.from_json(a.to_json())
    assert b.terms == a.terms and b.D == a.D


def test_json_rejects_field_mismatch():
    obj = mono(2, 1).to_json()
    obj["field"]["p"] = 3
    with pytest.raises(MalformedInput):
        PerfectedSeries.from_json(obj)


def test_scale_and_neg_char2():
    a = mono(2, 1)
    assert ps_add(a, ps_neg(a)).is_zero()
    assert ps_scale(a, (0,)).is_zero()


def test_pow_repeated_squaring():
    a = ps_add(mono(3, 1, D=12), mono(3, 2, D=12))
    p4 = ps_pow(a, 4)
    direct = ps_mul(ps_mul(a, a), ps_mul(a, a))
    assert p4.terms == direct.terms
