from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from so3inv.cyclonum import CycNum
from so3inv.habiro import (
    GammaFraction,
    HabiroElement,
    NonUnitDivisor,
    PrecisionError,
    RingError,
    agree,
    helem_ev,
    laurent_taylor,
    padic_convergence,
    series_inverse,
    series_mul,
    taylor1,
)
from so3inv.invariants import IM_lens
from so3inv.qlaurent import LaurentPoly, poch, q

ALLOWED = {1: [], 2: [2, 4, 6], 3: [3, 6, 9]}


@st.composite
def fractions_over(draw, d):
    terms = draw(st.dictionaries(st.integers(-2 * d, 2 * d), st.integers(-4, 4), max_size=3))
    den = draw(st.dictionaries(st.sampled_from(ALLOWED[d]), st.integers(1, 2), max_size=2)) if ALLOWED[d] else {}
    return GammaFraction(d, LaurentPoly(terms, d), tuple(sorted(den.items())))


@st.composite
def elements(draw, d, N=None):
    n = draw(st.integers(0, 3))
    return HabiroElement(d, [draw(fractions_over(d)) for _ in range(n + 1)], N)


def pairs():
    return st.sampled_from([1, 2, 3]).flatmap(lambda d: st.tuples(elements(d), elements(d)))


@given(pairs(), st.sampled_from([5, 7]))
def test_evaluation_is_a_ring_homomorphism(pair, r):
    a, b = pair
    assert helem_ev(a + b, r) == helem_ev(a, r) + helem_ev(b, r)
    assert helem_ev(a * b, r) == helem_ev(a, r) * helem_ev(b, r)


@given(pairs())
def test_taylor_is_a_ring_homomorphism(pair):
    a, b = pair
    order = 4
    assert taylor1(a + b, order) == [x + y for x, y in zip(taylor1(a, order), taylor1(b, order))]
    assert taylor1(a * b, order) == series_mul(taylor1(a, order), taylor1(b, order), order)


@given(st.sampled_from([1, 2, 3]).flatmap(elements))
def test_precision_coherence(x):
    for N in (4, 6, 8):
        y = HabiroElement(x.d, x.terms, N)
        assert taylor1(y, 4) == taylor1(x, 4)
    for r in (3, 5, 7):
        if r % x.d and x.d % r:
            assert helem_ev(HabiroElement(x.d, x.terms, r - 1), r) == helem_ev(x, r)


def test_constant_one():
    one = HabiroElement.one()
    assert helem_ev(one, 5) == 1
    assert taylor1(one, 3) == [1, 0, 0, 0]


def test_all_ones_at_three():
    x = HabiroElement(1, [GammaFraction.const(1, 1) for _ in range(6)], None)
    xi = CycNum.t_power(3, 1)
    want = 1 + (1 - xi) + (1 - xi) * (1 - xi * xi)
    assert helem_ev(x, 3) == want


def test_taylor_examples():
    assert taylor1(HabiroElement.constant(1, q(1)), 2) == [1, 1, 0]
    half = HabiroElement.constant(2, q(Fraction(1, 2)))
    assert taylor1(half, 3) == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
    for n in range(1, 5):
        e = HabiroElement(1, [GammaFraction.const(1, 0)] * n + [GammaFraction.const(1, 1)], None)
        assert taylor1(e, n - 1) == [0] * n


def test_lens_element_inverse():
    x = IM_lens(2, 1)
    x6 = HabiroElement(2, x.terms, 6)
    prod = x6 * x6.inverse()
    assert agree(prod, HabiroElement(2, [GammaFraction.const(2, 1)], 6))
    assert helem_ev(prod, 5) == 1


def test_lens_element_value():
    # 1/(1 + q^{-1/2}) = q^{1/2}/Phi_2(q^{1/2})
    x = IM_lens(2, 1)
    assert x.terms[0].num == q(Fraction(1, 2)) and x.terms[0].den == ((2, 1),)
    assert taylor1(x, 2) == [Fraction(1, 2), Fraction(1, 8), Fraction(-1, 16)]


def test_only_degree_zero_units_invert():
    x = HabiroElement(1, [GammaFraction.const(1, 1), GammaFraction.const(1, 1)], 4)
    with pytest.raises(NonUnitDivisor):
        x.inverse()
    with pytest.raises(NonUnitDivisor):
        HabiroElement.constant(1, 1 - q(1)).inverse()
    with pytest.raises(NonUnitDivisor):
        HabiroElement.constant(1, 3).inverse()


def test_forbidden_denominators():
    with pytest.raises(RingError):
        GammaFraction(2, q(1), ((3, 1),))
    with pytest.raises(RingError):
        GammaFraction(2, q(Fraction(1, 3)))


def test_precision_errors():
    x = HabiroElement(1, [GammaFraction.const(1, 1)], 2)
    with pytest.raises(PrecisionError):
        helem_ev(x, 5)
    with pytest.raises(PrecisionError):
        taylor1(x, 4)
    with pytest.raises(ValueError):
        helem_ev(HabiroElement.one(3), 3)


def test_base_change_keeps_values():
    x = IM_lens(2, 1)
    y = x.with_base(6)
    for r in (5, 7, 11):
        assert helem_ev(x, r) == helem_ev(y, r)
    assert taylor1(x, 4) == taylor1(y, 4)


def test_series_helpers():
    s = laurent_taylor(poch(1, 2), 3)
    # (1-q)(1-q^2) = 2x^2 + x^3 with x = q - 1
    assert s == [0, 0, 2, 1]
    inv = series_inverse([Fraction(2), Fraction(1)] + [Fraction(0)] * 3)
    assert series_mul(inv, [2, 1, 0, 0, 0], 4) == [1, 0, 0, 0, 0]


def test_padic_sentinel_for_exact_series():
    target = CycNum.from_int(5, 3)
    assert padic_convergence([Fraction(3)] + [Fraction(0)] * 4, target, 5) == [float("inf")] * 5
    with pytest.raises(ValueError):
        padic_convergence([Fraction(1)], CycNum.from_int(15, 1), 15)


def test_json_shape():
    obj = IM_lens(3, 1).to_json()
    assert obj["d"] == 3 and obj["N"] is None
    assert obj["terms"][0]["den_factors"] == [[3, 1]]
