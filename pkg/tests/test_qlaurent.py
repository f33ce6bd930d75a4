from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from so3inv.qlaurent import (
    ONE,
    ZERO,
    BivariatePoly,
    ForbiddenDenominator,
    LaurentPoly,
    NotDivisible,
    braced,
    braced_fact,
    bracket,
    divides,
    exact_div,
    gaussian_binomial,
    phi_d,
    phitilde_b,
    poch,
    q,
    qbinom,
    qbinom0,
)


def laurent(denoms=(1, 2, 4)):
    return st.builds(
        lambda terms, D: LaurentPoly(dict(terms), D),
        st.lists(st.tuples(st.integers(-12, 12), st.integers(-6, 6)), max_size=5),
        st.sampled_from(denoms),
    )


@given(laurent(), laurent(), laurent())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(laurent(), laurent())
def test_bar_is_a_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()


@given(laurent(), laurent())
def test_exact_division_recovers_factor(a, b):
    if b.is_zero():
        return
    assert exact_div(a * b, b) == a


@given(laurent())
def test_text_round_trip(a):
    assert LaurentPoly.from_text(a.to_text()) == a


def test_monomials_collapse_to_smallest_unit():
    f = LaurentPoly({2: 1, 4: 3}, 4)
    assert f.denom_exp == 2
    assert f == LaurentPoly.monomial(1, Fraction(1, 2)) + LaurentPoly.monomial(3, 1)


def test_quantum_integers():
    assert bracket(1) == ONE
    assert bracket(3) == q(1) + 1 + q(-1)
    assert bracket(-2) == -bracket(2)
    assert braced(2) == braced(1) * bracket(2)
    assert braced_fact(3) == braced(1) * braced(2) * braced(3)


def test_gaussian_binomial_coefficients():
    assert gaussian_binomial(4, 2) == (1, 1, 2, 1, 1)
    assert gaussian_binomial(5, 0) == (1,)


@pytest.mark.parametrize("n", range(0, 8))
def test_qbinom_pascal_rule(n):
    # [n+1, k] = q^{k/2}[n, k] + q^{-(n+1-k)/2}[n, k-1] in the balanced normalization
    for k in range(1, n + 1):
        lhs = qbinom(n + 1, k)
        rhs = qbinom(n, k).shift(Fraction(-k, 2)) + qbinom(n, k - 1).shift(Fraction(n + 1 - k, 2))
        assert lhs == rhs


def test_qbinom_symmetry_and_zero_range():
    for n in range(7):
        for k in range(n + 1):
            assert qbinom(n, k) == qbinom(n, n - k) == qbinom(n, k).bar()
    assert qbinom0(3, 5) == ZERO


def test_pochhammer():
    assert poch(1, 0) == ONE
    assert poch(1, 2) == (1 - q(1)) * (1 - q(2))
    assert poch(3, 2) == (1 - q(3)) * (1 - q(4))


def test_non_divisible_reports_remainder():
    with pytest.raises(NotDivisible) as info:
        exact_div(q(2) + 1, q(1) - 1)
    assert not info.value.remainder.is_zero()
    assert not divides(q(1) - 1, q(2) + 1)
    assert divides(q(1) - 1, q(2) - 1)


def test_coefficients_respect_base():
    with pytest.raises(ForbiddenDenominator):
        LaurentPoly.const(Fraction(1, 3), 2)
    assert LaurentPoly.const(Fraction(1, 4), 2).coeff(0) == Fraction(1, 4)


def test_bivariate_specializations():
    f = BivariatePoly({(1, 2): 3, (0, -1): -1})
    assert phitilde_b(f, 2) == q(5) * 3 - q(-2)
    assert phi_d(f, 2) == q(2) * 3 - q(Fraction(-1, 2))
    assert phi_d(f, -2) == q(0) * 3 - q(Fraction(1, 2))
