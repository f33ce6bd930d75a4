"""Laplace transform, the Z(k) family and the twist factors of surgery formulas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

from .cyclonum import CycNum, cyclotomic_poly, divisors, ev_root, gauss_sum, odd_colors, sign
from .qlaurent import (
    ONE,
    ZERO,
    BivariatePoly,
    LaurentPoly,
    NotDivisible,
    braced,
    braced_fact,
    exact_div,
    phi_d,
    phitilde_b,
    poch,
    qbinom,
    qbinom0,
)


class MembershipFailure(ArithmeticError):
    """A twist factor left the ring it is supposed to lie in."""


def laplace_transform(f: BivariatePoly, d: int) -> LaurentPoly:
    """q^i (q^n)^a  ->  q^{i - a^2/d}; the t-variable of ``f`` stands for q^n."""
    if d == 0:
        raise ValueError("d must be nonzero")
    D = abs(d)
    s = sign(d)
    terms: dict[int, int] = {}
    for (i, a), c in f.terms.items():
        e = i * D - s * a * a
        terms[e] = terms.get(e, 0) + c
    return LaurentPoly(terms, D)


def _substitute_color(f: BivariatePoly, n: int) -> LaurentPoly:
    terms: dict[int, int] = {}
    for (i, a), c in f.terms.items():
        terms[i + a * n] = terms.get(i + a * n, 0) + c
    return LaurentPoly(terms)


def gaussian_weight(d: int, n: int) -> LaurentPoly:
    return LaurentPoly.monomial(1, Fraction(d * (n * n - 1), 4))


def color_sum(values, r: int) -> CycNum:
    """Sum of ev_xi(values(n)) over odd n in (0, 2r)."""
    total = CycNum.from_int(r, 0)
    for n in odd_colors(r):
        total = total + ev_root(values(n), r)
    return total


def lemma1000_sides(f: BivariatePoly, d: int, r: int) -> tuple[CycNum, CycNum]:
    """(weighted color sum of f, gamma_d * ev(L_d(f)))."""
    lhs = color_sum(lambda n: gaussian_weight(d, n) * _substitute_color(f, n), r)
    rhs = gauss_sum(d, r) * ev_root(laplace_transform(f, d), r)
    return lhs, rhs


def lemma1000_check(f: BivariatePoly, d: int, r: int) -> bool:
    lhs, rhs = lemma1000_sides(f, d, r)
    return lhs == rhs


# -- Z(k) and its specializations ------------------------------------------------


@lru_cache(maxsize=None)
def Zk(k: int) -> BivariatePoly:
    """sum_j (-1)^j qbinom(2k+1, j) t^{(j-k)^2}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    out = BivariatePoly()
    for j in range(2 * k + 2):
        c = qbinom(2 * k + 1, j)
        if j % 2:
            c = -c
        out = out + BivariatePoly.from_laurent(c, (j - k) ** 2)
    return out


@lru_cache(maxsize=None)
def Yk(k: int, d: int) -> LaurentPoly:
    return phi_d(Zk(k), d)


@lru_cache(maxsize=None)
def Ytilde(k: int, b: int) -> LaurentPoly:
    return phitilde_b(Zk(k), b)


@lru_cache(maxsize=None)
def _qinv_poch(n: int) -> LaurentPoly:
    return poch(1, n)


@lru_cache(maxsize=None)
def Hkb(k: int, b: int) -> LaurentPoly:
    """Quotient Ytilde(k, b) {k}!/{2k+1}! up to the sign -sn(b), as a chain sum."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if b == 0:
        return ZERO
    if b < 0:
        h = Hkb(k, -b).bar()
        return -h if k % 2 else h
    top = k + 1
    full = _qinv_poch(top)
    total = ZERO
    # chains 0 = n_1 <= n_2 <= ... <= n_b <= n_{b+1} = k+1
    for inner in itertools.combinations_with_replacement(range(top + 1), b - 1):
        chain = (0,) + inner + (top,)
        den = ONE
        for lo, hi in zip(chain, chain[1:]):
            den = den * _qinv_poch(hi - lo)
        term = exact_div(full, den).shift(sum(n * n for n in inner))
        total = total + term
    return total.shift(Fraction((k + 1) * (k + 2), 4))


@lru_cache(maxsize=None)
def _fact_ratio(k: int) -> LaurentPoly:
    """{2k+1}!/{k}!"""
    out = ONE
    for j in range(k + 1, 2 * k + 2):
        out = out * braced(j)
    return out


@dataclass
class IdentityReport:
    ok: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def tech_identity_check(k: int, b: int) -> IdentityReport:
    """Ytilde(k, b) {k}!/{2k+1}! == -sn(b) H(k, b); b = 0 compares 0 with 0."""
    try:
        lhs = exact_div(Ytilde(k, b), _fact_ratio(k))
    except NotDivisible as exc:
        return IdentityReport(False, f"not divisible, remainder {exc.remainder}")
    rhs = Hkb(k, b) * (-sign(b))
    if lhs == rhs:
        return IdentityReport(True)
    return IdentityReport(False, f"difference {(lhs - rhs).to_text()}")


def phi_relation_check(k: int, d: int, r: int) -> bool:
    """ev(phi_d(Z(k))) == ev(phitilde_b(Z(k))) for db = 1 mod r."""
    b = pow(d, -1, r)
    return ev_root(Yk(k, d), r) == ev_root(Ytilde(k, b), r)


def choose_b(d: int, r: int) -> int:
    """Least |b| with d b = 1 mod r and sign(b) = sign(d)."""
    b = pow(d % r, -1, r)
    if d > 0:
        return b if b else r
    return b - r if b else -r


def _weighted_basis(k: int, n: int) -> LaurentPoly:
    return qbinom0(n + k, 2 * k + 1) * braced_fact(k) * braced(n)


def prop222a_sides(k: int, r: int) -> tuple[CycNum, CycNum]:
    if r % 2 == 0 or 2 * k > r - 3:
        raise ValueError(f"need odd r and k <= (r-3)/2, got k={k}, r={r}")
    lhs = color_sum(lambda n: _weighted_basis(k, n), r)
    rhs = ev_root(poch(k + 2, r - k - 2).shift(Fraction((k + 1) * (k + 2), 4)), r) * 2
    return lhs, rhs


def prop222a_check(k: int, r: int) -> bool:
    lhs, rhs = prop222a_sides(k, r)
    return lhs == rhs


def prop222b_sides(k: int, d: int, r: int) -> tuple[CycNum, CycNum]:
    if r % 2 == 0 or 2 * k > r - 3:
        raise ValueError(f"need odd r and k <= (r-3)/2, got k={k}, r={r}")
    if d == 0 or gcd(d, r) != 1:
        raise ValueError(f"need d coprime to r, got d={d}, r={r}")
    b = choose_b(d, r)
    lhs = color_sum(lambda n: gaussian_weight(d, n) * _weighted_basis(k, n), r)
    rhs = gauss_sum(d, r) * ev_root(Hkb(k, -b), r) * (-2 * sign(b))
    return lhs, rhs


def prop222b_check(k: int, d: int, r: int) -> bool:
    lhs, rhs = prop222b_sides(k, d, r)
    return lhs == rhs


def prop333_finite_check(k: int, b_range: Iterable[int]) -> dict[int, bool]:
    """phitilde_b(Z(k) (q;q)_k) divisible by (q;q)_{2k+1}, for each b."""
    num = _qinv_poch(k)
    den = _qinv_poch(2 * k + 1)
    out = {}
    for b in b_range:
        try:
            exact_div(Ytilde(k, b) * num, den)
            out[b] = True
        except NotDivisible:
            out[b] = False
    return out


# -- twist factors --------------------------------------------------------------------


@dataclass(frozen=True)
class TwistElement:
    """sn(d) q^{(3 sn(d) - d)/4} Y(k, -d) {k}!/{2k+1}!  in factored form.

    value = q^{shift} * numerator / prod_s Phi_s(q^{1/|d|})^{e_s}, where
    ``shift`` = (k+1)(k+2)/4 + (3 sn(d) - d)/4, the numerator is a Laurent
    polynomial in q^{1/|d|} and every s shares a factor with d.
    """

    k: int
    d: int
    shift: Fraction
    numerator: LaurentPoly
    den: tuple[tuple[int, int], ...] = field(default=())

    def denominator(self) -> LaurentPoly:
        out = ONE
        for s, e in self.den:
            out = out * cyclotomic_poly(s, abs(self.d)) ** e
        return out

    def fraction(self) -> tuple[LaurentPoly, LaurentPoly]:
        """(numerator with the shift applied, denominator)."""
        return self.numerator.shift(self.shift), self.denominator()


def _poch_cyclotomic_exponents(k: int, D: int) -> dict[int, int]:
    """Exponents of Phi_s(x) in prod_{j=k+1}^{2k+1} (x^{jD} - 1)."""
    out: dict[int, int] = {}
    for j in range(k + 1, 2 * k + 2):
        for s in divisors(j * D):
            out[s] = out.get(s, 0) + 1
    return out


@lru_cache(maxsize=None)
def twist_element(k: int, d: int) -> TwistElement:
    """Per-component factor of the unified invariant, with a ring-membership certificate.

    {2k+1}!/{k}! = (-1)^{k+1} q^{-(k+1)(3k+2)/4} (q^{k+1};q)_{k+1}, so the factor is
    sn(d) (-1)^{k+1} q^{(3sn-d)/4 + (k+1)(3k+2)/4} Y(k,-d) / (q^{k+1};q)_{k+1}.
    The forced power q^{(k+1)(k+2)/4 + (3sn-d)/4} is split off; what remains must
    be Y(k,-d) q^{k(k+1)/2} times a unit over cyclotomics in x = q^{1/|d|} whose
    indices coprime to d all cancel.
    """
    if d == 0 or k < 0:
        raise ValueError("need d != 0 and k >= 0")
    D = abs(d)
    sn = sign(d)
    shift = Fraction((k + 1) * (k + 2), 4) + Fraction(3 * sn - d, 4)
    num = Yk(k, -d).shift(k * (k + 1) // 2)
    if D % num.denom_exp:
        raise MembershipFailure(f"numerator needs q^(1/{num.denom_exp}), ring has q^(1/{D})")
    # (q^{k+1};q)_{k+1} = prod (1 - x^{jD}) = (-1)^{k+1} prod_s Phi_s(x)^{e_s},
    # whose sign cancels the (-1)^{k+1} above
    if sn < 0:
        num = -num
    den = _poch_cyclotomic_exponents(k, D)
    kept = []
    for s in sorted(den):
        e = den[s]
        phi = cyclotomic_poly(s, D)
        while e and _divides(phi, num):
            num = exact_div(num, phi)
            e -= 1
        if e and gcd(s, D) == 1:
            raise MembershipFailure(f"Phi_{s}(q^(1/{D}))^{e} left in the denominator for k={k}, d={d}")
        if e:
            kept.append((s, e))
    return TwistElement(k, d, shift, num, tuple(kept))


def _divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    try:
        exact_div(f, g)
        return True
    except NotDivisible:
        return False


def twist_ev(t: TwistElement, r: int) -> CycNum:
    """ev_xi of a twist factor (needs gcd(r, d) = 1; base |d| allowed)."""
    num, den = t.fraction()
    base = abs(t.d)
    return ev_root(num, r).div(ev_root(den, r), base=base)
