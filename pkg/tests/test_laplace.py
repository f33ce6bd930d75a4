from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from so3inv.cyclonum import ev_root, sign
from so3inv.laplace import (
    Hkb,
    MembershipFailure,
    Yk,
    Ytilde,
    Zk,
    choose_b,
    laplace_transform,
    lemma1000_check,
    phi_relation_check,
    prop222a_check,
    prop222b_check,
    prop333_finite_check,
    tech_identity_check,
    twist_element,
    twist_ev,
)
from so3inv.qlaurent import ONE, ZERO, BivariatePoly, LaurentPoly, poch, q


def bivariates():
    return st.dictionaries(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.integers(-6, 6),
                           max_size=5).map(BivariatePoly)


def test_laplace_transform_on_monomials():
    f = BivariatePoly({(1, 2): 1})
    assert laplace_transform(f, 2) == q(1 - 2)
    assert laplace_transform(f, -3) == q(1 + Fraction(4, 3))
    with pytest.raises(ValueError):
        laplace_transform(f, 0)


@given(bivariates(), st.sampled_from([1, -1, 2, -2, 3]), st.sampled_from([5, 7]))
def test_gaussian_color_sum_equals_laplace_transform(f, d, r):
    assert lemma1000_check(f, d, r)


@pytest.mark.parametrize("k", range(0, 7))
@pytest.mark.parametrize("b", range(-4, 5))
def test_tech_identity(k, b):
    rep = tech_identity_check(k, b)
    assert rep.ok, rep.detail


def test_H_small_values():
    assert Hkb(0, 1) == q(Fraction(1, 2))
    assert Hkb(3, 0) == ZERO
    # b < 0 is the bar with sign (-1)^k
    for k in range(4):
        assert Hkb(k, -2) == Hkb(k, 2).bar() * (-1) ** k
    # b = 1 is a single chain: q^{(k+1)(k+2)/4}
    for k in range(4):
        assert Hkb(k, 1) == q(Fraction((k + 1) * (k + 2), 4))


def test_Z_at_zero():
    # sum_j (-1)^j qbinom(1, j) t^{j^2} = 1 - t
    assert Zk(0) == BivariatePoly({(0, 0): 1, (0, 1): -1})
    assert Ytilde(0, 3) == 1 - q(3)
    assert Yk(0, 2) == 1 - q(Fraction(1, 2))


@pytest.mark.parametrize("r", [5, 7, 9, 11])
def test_phi_relation(r):
    for k in range(4):
        for d in (1, -1, 2, -2, 4):
            if gcd(d, r) == 1:
                assert phi_relation_check(k, d, r)


def test_choose_b():
    assert choose_b(2, 5) == 3
    assert choose_b(-2, 5) == -3
    assert choose_b(1, 7) == 1
    for d in (1, 2, 3, -1, -2, -3, 4):
        for r in (5, 7, 11):
            b = choose_b(d, r)
            assert (b * d) % r == 1 and sign(b) == sign(d)


@pytest.mark.parametrize("r", [5, 7])
def test_color_sums(r):
    for k in range((r - 3) // 2 + 1):
        assert prop222a_check(k, r)
        for d in (1, -1, 2, -2, 3, 4):
            if gcd(d, r) == 1:
                assert prop222b_check(k, d, r)
    with pytest.raises(ValueError):
        prop222a_check((r - 1) // 2, r)


def test_finite_divisibility_range():
    for k in range(4):
        assert all(prop333_finite_check(k, range(-3, 4)).values())


@pytest.mark.parametrize("k", range(0, 5))
@pytest.mark.parametrize("d", [1, -1, 2, -2, 3, -3, 4, 6])
def test_twist_membership_and_value(k, d):
    t = twist_element(k, d)
    assert abs(d) % t.numerator.denom_exp == 0
    assert t.shift == Fraction((k + 1) * (k + 2), 4) + Fraction(3 * sign(d) - d, 4)
    for s, _ in t.den:
        assert gcd(s, abs(d)) > 1
    # evaluated against the chain sum: sn(b) sn(d) ev(twist) = ev(q^{(3sn-d)/4} H(k, -b))
    for r in (5, 7, 11):
        if gcd(r, d) != 1 or 2 * k > r - 3:
            continue
        b = choose_b(d, r)
        lhs = twist_ev(t, r) * (sign(b) * sign(d))
        rhs = ev_root(Hkb(k, -b).shift(Fraction(3 * sign(d) - d, 4)), r)
        assert lhs == rhs


def test_twist_rejects_zero():
    with pytest.raises(ValueError):
        twist_element(1, 0)
    assert issubclass(MembershipFailure, ArithmeticError)
