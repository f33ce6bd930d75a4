from fractions import Fraction
from math import gcd

import pytest

from so3inv.cyclonum import CycNum, ev_root, gauss_sum, jacobi
from so3inv.habiro import HabiroElement, agree, helem_ev
from so3inv.invariants import (
    F_L,
    F_U,
    IM_lens,
    IM_series,
    SurgeryPresentation,
    connected_sum_factor,
    high_terms_vanish,
    lens_presentation,
    lens_tau,
    lens_unified_sides,
    ohtsuki_series,
    poincare_sphere,
    smith_invariants,
    tau,
    tau_with_link,
    unified_check,
    unified_sides,
)
from so3inv.jones import FramedLink, figure8, hopf, left_trefoil, trefoil, unknot, whitehead
from so3inv.qlaurent import LaurentPoly, braced, bracket, q


def test_smith_invariants():
    assert smith_invariants([[2, 4], [6, 8]]) == [2, 4]
    assert smith_invariants([[3, 1], [1, 2]]) == [1, 5]
    assert smith_invariants([[0, 0], [0, 0]]) == [0, 0]
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]


def test_presentation_homology():
    sp = SurgeryPresentation(hopf((3, 2)))
    assert sp.torsion_order() == 5 and sp.first_betti() == 0
    assert SurgeryPresentation(unknot(0)).first_betti() == 1
    assert SurgeryPresentation(whitehead((2, -3))).homology_order() == 6
    with pytest.raises(ValueError):
        SurgeryPresentation(unknot(4), declared_homology=3)
    with pytest.raises(ValueError):
        SurgeryPresentation(hopf((1, 1))).homology_order()


def test_unknot_color_sum_at_three():
    assert F_L(unknot(1), 3) == 2


@pytest.mark.parametrize("r", [3, 5, 7])
def test_unknot_color_sum_closed_form(r):
    one = ev_root(braced(1), r)
    for s in (1, -1):
        want = gauss_sum(s, r) * ev_root(q(Fraction(-s, 2)), r).div(one, base=0) * (-2 * s)
        assert F_U(s, r) == want


@pytest.mark.parametrize("r", [3, 5, 7, 9, 11])
def test_unknot_color_sums_nonzero(r):
    assert not F_U(1, r).is_zero() and not F_U(-1, r).is_zero()


def test_tau_examples():
    assert tau(SurgeryPresentation(FramedLink(0, ())), 5) == 1
    assert tau(lens_presentation(2), 3) == 1


@pytest.mark.parametrize("r", [7])
def test_tau_connected_sum(r):
    a, b = lens_presentation(2), lens_presentation(3)
    assert tau(a.connected_sum(b), r) == tau(a, r) * tau(b, r)
    p = poincare_sphere()
    assert tau(a.connected_sum(p), r) == tau(a, r) * tau(p, r)


def test_tau_with_link():
    assert tau_with_link(unknot(0), [], {0: 4}, 7) == ev_root(bracket(4), 7)
    v = tau_with_link(hopf((2, 0)), [0], {1: 2}, 5)
    assert v.is_integral()
    assert tau_with_link(hopf((2, 0)), [0], {1: 1}, 5) == tau(lens_presentation(2), 5)
    with pytest.raises(ValueError):
        tau_with_link(hopf((2, 0)), [0], {}, 5)


def test_lens_closed_form():
    for r in (3, 5, 7):
        assert lens_tau(1, 1, r) == 1
    assert lens_tau(2, 1, 3) == 1
    with pytest.raises(ValueError):
        lens_tau(3, 1, 9)
    with pytest.raises(ValueError):
        lens_tau(4, 2, 5)


@pytest.mark.parametrize("framings,d,a", [((2, 2), 3, 2), ((3, 2), 5, 2)])
@pytest.mark.parametrize("r", [7, 11])
def test_lens_closed_form_against_surgery_chain(framings, d, a, r):
    # a two-component chain with framings (a1, a2) presents L(a1 a2 - 1, a2)
    assert tau(SurgeryPresentation(hopf(framings)), r) == lens_tau(d, a, r)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_lens_values_are_units(d):
    for r in (3, 5, 7, 11):
        if gcd(r, d) == 1:
            v = lens_tau(d, 1, r)
            assert v.is_integral() and v.inverse(base=1).is_integral()


# -- unified invariant --------------------------------------------------------------------


def test_surgery_series_matches_lens_element():
    for d in (2, 3, 5):
        k = 5
        a = IM_series(lens_presentation(d), k)
        b = HabiroElement(d, IM_lens(d, 1).terms, k)
        assert agree(a, b)


def test_empty_presentation():
    x = IM_series(SurgeryPresentation(FramedLink(0, ())), 3)
    assert helem_ev(x, 5) == 1


def test_truncation_stability():
    sp = poincare_sphere()
    a = IM_series(sp, 4)
    b = IM_series(sp, 5)
    assert agree(a, HabiroElement(1, b.terms, 4))


def test_connected_sum_of_unified_invariants():
    pairs = [(lens_presentation(2), lens_presentation(3), 2, 3),
             (lens_presentation(2), poincare_sphere(), 2, 1)]
    for m, n, d1, d2 in pairs:
        k = 4
        lhs = IM_series(m.connected_sum(n), k)
        rhs = IM_series(m, k) * IM_series(n, k) * connected_sum_factor(d1, d2)
        assert agree(lhs, HabiroElement(lhs.d, rhs.with_base(lhs.d).terms, k))


def test_hand_cell():
    lhs, rhs = lens_unified_sides(2, 1, 3)
    assert lhs == -1 and rhs == -1
    assert unified_check((2, 1), 3)


@pytest.mark.parametrize("r", [3, 5, 7])
def test_unified_poincare_sphere(r):
    sp = poincare_sphere()
    assert unified_check(sp, r)
    # d = 1: ev(I_M) = tau directly
    assert helem_ev(IM_series(sp, r - 1), r) == tau(sp, r)


@pytest.mark.parametrize("sp", [lens_presentation(3), poincare_sphere(), SurgeryPresentation(figure8(-1)),
                                SurgeryPresentation(whitehead((2, -1)))],
                         ids=["L(3,1)", "poincare", "figure8(-1)", "whitehead(2,-1)"])
@pytest.mark.parametrize("r", [5, 7])
def test_unified_check(sp, r):
    lhs, rhs = unified_sides(sp, r)
    assert lhs == rhs


@pytest.mark.parametrize("r", [5, 7])
def test_full_precision_agrees_with_default_truncation(r):
    sp = lens_presentation(3)
    full = unified_sides(sp, r, k_max=r - 1)
    assert full == unified_sides(sp, r)
    assert high_terms_vanish(IM_series(sp, r - 1), r)
    assert high_terms_vanish(IM_series(poincare_sphere(), r - 1), r)


def test_unified_requires_split_nonzero_framings():
    with pytest.raises(ValueError):
        IM_series(SurgeryPresentation(hopf((1, 1))), 2)
    with pytest.raises(ValueError):
        IM_series(SurgeryPresentation(unknot(0)), 2)
    with pytest.raises(ValueError):
        unified_sides(lens_presentation(3), 3)


# -- series -------------------------------------------------------------------------------------


def test_ohtsuki_series_of_poincare_sphere():
    # published values for the Poincare sphere, in powers of (q - 1)
    assert ohtsuki_series(IM_series(poincare_sphere(), 5), 5) == [1, -6, 45, -464, 6224, -102816]


def test_orientation_reversal_substitutes_inverse_q():
    # +1 surgery on the right-handed trefoil is the Poincare sphere reversed
    s = ohtsuki_series(IM_series(SurgeryPresentation(trefoil(1)), 3), 3)
    assert s == [1, 6, 39, 380]


def test_ohtsuki_series_of_lens_space():
    # q^{1/4}/(1 + q^{1/2}) expanded by hand
    assert ohtsuki_series(IM_lens(2, 1), 3) == [Fraction(1, 2), 0, Fraction(-1, 64), Fraction(1, 64)]
    assert ohtsuki_series(HabiroElement.one(), 2) == [1, 0, 0]
    for c in ohtsuki_series(IM_lens(3, 1), 5):
        assert all(p in (2, 3) for p in _primes(c.denominator))


def _primes(n):
    out, p = set(), 2
    while n > 1:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    return out
