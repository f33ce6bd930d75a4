"""SO(3) invariants of surgered 3-manifolds and the unified invariant."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod
from typing import Callable, Sequence

from .cycloexp import CycExpansion, cyclotomic_coeffs
from .cyclonum import CycNum, dedekind, ev_root, jacobi, odd_colors, sign
from .habiro import GammaFraction, HabiroElement, helem_ev, prefactor_series, series_mul, taylor1
from .jones import FramedLink, colored_jones, colored_jones_at_root, unknot
from .habiro import _phi_of_power
from .laplace import twist_element
from .qlaurent import ONE, LaurentPoly, bracket, exact_div, poch


class IntegralityViolation(ArithmeticError):
    """An invariant that must be integral came out with denominators."""


class HalfPowerResidue(ArithmeticError):
    """A term of the unified invariant needs a finer power of q than q^{1/d}."""


# -- presentations -----------------------------------------------------------------------


def smith_invariants(A: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, zeros included)."""
    M = [list(map(int, row)) for row in A]
    n = len(M)
    m = len(M[0]) if n else 0
    out = []
    t = 0
    while t < min(n, m):
        entries = [(abs(M[i][j]), i, j) for i in range(t, n) for j in range(t, m) if M[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        while True:
            p = M[t][t]
            changed = False
            for i in range(t + 1, n):
                f = M[i][t] // p
                if f:
                    M[i] = [a - f * b for a, b in zip(M[i], M[t])]
                if M[i][t]:
                    M[t], M[i] = M[i], M[t]
                    changed = True
                    break
            if changed:
                continue
            for j in range(t + 1, m):
                f = M[t][j] // p
                if f:
                    for row in M:
                        row[j] -= f * row[t]
                if M[t][j]:
                    for row in M:
                        row[t], row[j] = row[j], row[t]
                    changed = True
                    break
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if M[i][j] % p), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        out.append(abs(M[t][t]))
        t += 1
    return out + [0] * (min(n, m) - len(out))


@dataclass(frozen=True)
class SurgeryPresentation:
    link: FramedLink
    declared_homology: int | None = None

    def __post_init__(self):
        if self.declared_homology is not None and self.declared_homology != self.torsion_order():
            raise ValueError(f"declared |H_1| = {self.declared_homology}, "
                             f"linking matrix gives {self.torsion_order()}")

    @property
    def linking_matrix(self) -> list[list[int]]:
        return self.link.linking_matrix()

    @property
    def is_split(self) -> bool:
        return self.link.is_algebraically_split()

    def first_betti(self) -> int:
        return sum(1 for x in smith_invariants(self.linking_matrix) if x == 0)

    def torsion_order(self) -> int:
        return prod(x for x in smith_invariants(self.linking_matrix) if x)

    def homology_order(self) -> int:
        """d = prod |d_i| for a diagonal presentation with nonzero framings."""
        if not self.is_split:
            raise ValueError("presentation is not algebraically split")
        if any(f == 0 for f in self.link.framings):
            raise ValueError("zero framing: not a rational homology sphere")
        return prod(abs(f) for f in self.link.framings)

    def connected_sum(self, other: "SurgeryPresentation") -> "SurgeryPresentation":
        return SurgeryPresentation(self.link.distant_union(other.link))


def connected_sum_factor(d1: int, d2: int) -> LaurentPoly:
    """q^{(d1-1)(d2-1)/4}: I_{M#N} = this * I_M * I_N, since q^{(1-d)/4} I_M is multiplicative."""
    return LaurentPoly.monomial(1, Fraction((d1 - 1) * (d2 - 1), 4))


def lens_presentation(d: int) -> SurgeryPresentation:
    return SurgeryPresentation(unknot(d))


def poincare_sphere() -> SurgeryPresentation:
    """-1 surgery on the left-handed trefoil."""
    from .jones import left_trefoil

    return SurgeryPresentation(left_trefoil(-1), 1)


# -- F_L and tau ------------------------------------------------------------------------------


JonesAtRoot = Callable[[FramedLink, Sequence[int], int], CycNum]


def _exact_at_root(link: FramedLink, colors: Sequence[int], r: int) -> CycNum:
    return ev_root(colored_jones(link, colors), r)


def _check_root(r: int) -> None:
    if r < 3 or r % 2 == 0:
        raise ValueError(f"root order must be odd and at least 3, got {r}")


def color_sum(link: FramedLink, r: int, fixed: dict[int, int] | None = None,
              jones: JonesAtRoot = colored_jones_at_root) -> CycNum:
    """Sum over odd colors n_i < 2r of ev(J_L(n) prod [n_i]); ``fixed`` pins some colors."""
    _check_root(r)
    fixed = fixed or {}
    free = [i for i in range(link.n_components) if i not in fixed]
    total = CycNum.from_int(r, 0)
    brackets = {n: ev_root(bracket(n), r) for n in odd_colors(r)}
    for choice in itertools.product(odd_colors(r), repeat=len(free)):
        colors = [0] * link.n_components
        for i, n in zip(free, choice):
            colors[i] = n
        for i, n in fixed.items():
            colors[i] = n
        weight = CycNum.from_int(r, 1)
        for n in choice:
            weight = weight * brackets[n]
        total = total + jones(link, colors, r) * weight
    return total


def F_L(link: FramedLink, r: int, jones: JonesAtRoot = colored_jones_at_root) -> CycNum:
    return color_sum(link, r, None, jones)


@lru_cache(maxsize=None)
def F_U(sgn: int, r: int) -> CycNum:
    return F_L(unknot(sgn), r, _exact_at_root)


def _normalize(value: CycNum, sigma: tuple[int, int], r: int) -> CycNum:
    den = F_U(1, r) ** sigma[0] * F_U(-1, r) ** sigma[1]
    return value.div(den, base=0)


def tau(sp: SurgeryPresentation, r: int, jones: JonesAtRoot = colored_jones_at_root,
        check: bool = True) -> CycNum:
    """F_L / (F_{U+}^{sigma+} F_{U-}^{sigma-}); integral whenever gcd(r, |Tor H_1|) = 1."""
    _check_root(r)
    link = sp.link
    if link.n_components == 0:
        return CycNum.from_int(r, 1)
    val = _normalize(F_L(link, r, jones), link.signature_counts(), r)
    if val.is_integral():
        return CycNum(r, val.coeffs, 1, reduced=True)
    if check and gcd(r, sp.torsion_order()) == 1:
        raise IntegralityViolation(f"tau not in Z[xi] at r = {r}: {val}")
    return val


def tau_with_link(link: FramedLink, surgery: Sequence[int], extra_colors: dict[int, int], r: int,
                  jones: JonesAtRoot = colored_jones_at_root, check: bool = True) -> CycNum:
    """Invariant of (M, L'') with the components outside ``surgery`` carrying fixed colors."""
    _check_root(r)
    surgery = list(surgery)
    others = [i for i in range(link.n_components) if i not in surgery]
    if sorted(others) != sorted(extra_colors):
        raise ValueError("every non-surgery component needs a color")
    A = link.linking_matrix()
    sub = [[A[i][j] for j in surgery] for i in surgery]
    from .jones import inertia

    sigma = inertia(sub)
    val = _normalize(color_sum(link, r, dict(extra_colors), jones), sigma, r)
    if check and sub:
        split = all(A[i][j] == 0 for i in others for j in others if i != j)
        betti = sum(1 for x in smith_invariants(sub) if x == 0)
        torsion = prod(x for x in smith_invariants(sub) if x)
        if split and betti == 0 and gcd(r, torsion) == 1 and not val.is_integral():
            raise IntegralityViolation(f"colored invariant not in Z[xi] at r = {r}: {val}")
    if val.is_integral():
        return CycNum(r, val.coeffs, 1, reduced=True)
    return val


def lens_tau(d: int, a: int, r: int) -> CycNum:
    """Closed form (d/r) ev(q^{-3 s(d,a)} {1/d}/{1}) for L(d, a)."""
    _check_root(r)
    if d <= 0 or gcd(a, d) != 1 or gcd(r, d) != 1:
        raise ValueError(f"need d > 0, gcd(a, d) = 1 and gcd(r, d) = 1; got d={d}, a={a}, r={r}")
    e = -3 * dedekind(d, a)
    num = LaurentPoly.monomial(1, e + Fraction(1, 2 * d)) - LaurentPoly.monomial(1, e - Fraction(1, 2 * d))
    val = ev_root(num, r).div(ev_root(LaurentPoly.monomial(1, Fraction(1, 2))
                                      - LaurentPoly.monomial(1, Fraction(-1, 2)), r), base=1)
    return val * jacobi(d, r)


# -- unified invariant -----------------------------------------------------------------------


def IM_lens(d: int, a: int = 1) -> HabiroElement:
    """q^{3s(d,1) - 3s(d,a)} (1 - q^{-1/d}) / (1 - q^{-1}), exact."""
    if d <= 0 or gcd(a, d) != 1:
        raise ValueError("need d > 0 coprime to a")
    e = 3 * dedekind(d, 1) - 3 * dedekind(d, a)
    if (e * d).denominator != 1:
        raise HalfPowerResidue(f"q^{e} is not a power of q^(1/{d})")
    # (1 - x^{-1})/(1 - x^{-d}) = x^{d-1} / prod_{1 < s | d} Phi_s(x), x = q^{1/d}
    num = LaurentPoly.monomial(1, e + Fraction(d - 1, d))
    den = tuple((s, 1) for s in range(2, d + 1) if d % s == 0)
    return HabiroElement(d, [GammaFraction(d, num, den)], None)


def _twist_fraction(k: int, di: int, d: int) -> tuple[Fraction, LaurentPoly, dict[int, int]]:
    t = twist_element(k, di)
    m = d // abs(di)
    den: dict[int, int] = {}
    for s, e in t.den:
        for s2 in _phi_of_power(s, m):
            den[s2] = den.get(s2, 0) + e
    return t.shift, t.numerator, den


def IM_series(sp: SurgeryPresentation, k_max: int, expansion: CycExpansion | None = None) -> HabiroElement:
    """Unified invariant truncated to multi-indices k_i <= k_max (precision N = k_max)."""
    link = sp.link
    m = link.n_components
    if m == 0:
        return HabiroElement.one(1)
    if not sp.is_split:
        raise ValueError("the unified invariant needs an algebraically split presentation")
    framings = link.framings
    if any(f == 0 for f in framings):
        raise ValueError("all framings must be nonzero")
    d = prod(abs(f) for f in framings)
    if expansion is None or expansion.k_max < k_max:
        expansion = cyclotomic_coeffs(link.zero_framed(), k_max)
    terms = [GammaFraction.const(d, 0) for _ in range(k_max + 1)]
    base_shift = Fraction(d - 1, 4)
    for k, coeff in sorted(expansion.table.items()):
        if max(k) > k_max or not coeff:
            continue
        n = max(k)
        g = exact_div(coeff, poch(1, n))
        shift = base_shift
        num = g
        den: dict[int, int] = {}
        for ki, di in zip(k, framings):
            s, tn, tden = _twist_fraction(ki, di, d)
            shift += s
            num = num * tn
            for s2, e in tden.items():
                den[s2] = den.get(s2, 0) + e
        num = num.shift(shift)
        if d % num.denom_exp:
            raise HalfPowerResidue(f"term {k} needs q^(1/{num.denom_exp}) over base {d}")
        terms[n] = terms[n] + GammaFraction(d, num.with_base(d), tuple(sorted(den.items()))).reduced()
    return HabiroElement(d, terms, k_max)


def _surgery_ev(element: HabiroElement, r: int) -> CycNum:
    """ev_xi of a surgery series; slots beyond its precision vanish at xi by construction."""
    total = CycNum.from_int(r, 0, element.d)
    for n, f in enumerate(element.terms[:r]):
        if not f.is_zero():
            total = total + f.ev(r) * ev_root(poch(1, n), r)
    return total


def unified_sides(sp: SurgeryPresentation, r: int, k_max: int | None = None,
                  jones: JonesAtRoot = colored_jones_at_root,
                  element: HabiroElement | None = None) -> tuple[CycNum, CycNum]:
    """((d/r) tau_M(xi), ev_xi(q^{(1-d)/4} I_M)).

    I_M is truncated at k_i <= (r-3)/2 by default: every dropped term carries
    {2k+1}!/({k}!{1}) from its cyclotomic coefficient and vanishes at xi.
    """
    _check_root(r)
    d = sp.homology_order() if sp.link.n_components else 1
    if gcd(r, d) != 1:
        raise ValueError(f"order {r} not coprime to d = {d}")
    need = (r - 3) // 2
    if element is None:
        element = IM_series(sp, need if k_max is None else k_max)
    if element.N is not None and element.N < need:
        raise ValueError(f"precision {element.N} below (r-3)/2 = {need}")
    lhs = tau(sp, r, jones) * jacobi(d, r)
    rhs = _surgery_ev(element, r) * ev_root(LaurentPoly.monomial(1, Fraction(1 - d, 4)), r)
    return lhs, rhs


def unified_check(target: SurgeryPresentation | tuple[int, int], r: int, **kw) -> bool:
    """Accepts a split presentation or a lens pair (d, a)."""
    if isinstance(target, tuple):
        lhs, rhs = lens_unified_sides(*target, r)
    else:
        lhs, rhs = unified_sides(target, r, **kw)
    return lhs == rhs


def lens_unified_sides(d: int, a: int, r: int) -> tuple[CycNum, CycNum]:
    lhs = lens_tau(d, a, r) * jacobi(d, r)
    rhs = helem_ev(IM_lens(d, a), r) * ev_root(LaurentPoly.monomial(1, Fraction(1 - d, 4)), r)
    return lhs, rhs


def high_terms_vanish(element: HabiroElement, r: int) -> bool:
    """Terms of degree (r-3)/2 < n < r evaluate to zero (only meaningful for surgery series)."""
    cut = (r - 3) // 2
    for n, f in enumerate(element.terms[:r]):
        if n > cut and not f.is_zero():
            if not (f.ev(r) * ev_root(poch(1, n), r)).is_zero():
                return False
    return True


def ohtsuki_series(element: HabiroElement, order: int) -> list[Fraction]:
    """Taylor expansion of q^{(1-d)/4} I_M at q = 1; coefficients must lie in Z[1/2d]."""
    from .qlaurent import _radical_divides

    d = element.d
    s = series_mul(prefactor_series(Fraction(1 - d, 4), order), taylor1(element, order), order)
    for c in s:
        if not _radical_divides(c.denominator, 2 * d):
            raise IntegralityViolation(f"coefficient {c} outside Z[1/{2 * d}]")
    return s


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("SO3INV_WORKERS", "1")))
    except ValueError:
        return 1
