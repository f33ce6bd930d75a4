"""Truncated elements of the cyclotomic completion and their two read-outs.

An element is stored as  sum_{n<=N} f_n (q;q)_n  where each f_n is a fraction
whose numerator is a Laurent polynomial in x = q^{1/d} and whose denominator
is a product of cyclotomic polynomials Phi_s(x) with gcd(s, d) > 1.  Such
fractions can be evaluated at any root of unity of order coprime to d and
expanded around q = 1, which is all this module needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .cyclonum import (
    CycNum,
    cyclotomic,
    cyclotomic_poly,
    divisors,
    ev_root,
    one_minus_xi_valuation,
    totient,
    _prime_of_power,
)
from .qlaurent import (
    ONE,
    ZERO,
    LaurentPoly,
    NotDivisible,
    _radical_divides,
    exact_div,
    poch,
)


class NonUnitDivisor(ArithmeticError):
    """Division by an element that is not a recognizable unit."""


class PrecisionError(ValueError):
    """Requested read-out needs more terms than the element carries."""


class RingError(ArithmeticError):
    """A value left the coefficient ring it must stay in."""


def _divides(g: LaurentPoly, f: LaurentPoly) -> LaurentPoly | None:
    try:
        return exact_div(f, g)
    except NotDivisible:
        return None


@lru_cache(maxsize=None)
def _phi_in(s: int, d: int) -> LaurentPoly:
    return cyclotomic_poly(s, d)


@lru_cache(maxsize=None)
def _phi_of_power(s: int, m: int) -> tuple[int, ...]:
    """Indices s' with Phi_s(x^m) = prod Phi_{s'}(x)."""
    return tuple(t for t in divisors(s * m) if t // gcd(t, m) == s)


# -- fractions ------------------------------------------------------------------


@dataclass(frozen=True)
class GammaFraction:
    d: int
    num: LaurentPoly
    den: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("base must be positive")
        if self.num and self.d % self.num.denom_exp:
            raise RingError(f"numerator uses q^(1/{self.num.denom_exp}), base is {self.d}")
        for s, e in self.den:
            if gcd(s, self.d) == 1 or e <= 0:
                raise RingError(f"Phi_{s} cannot be a denominator over base {self.d}")

    @classmethod
    def const(cls, d: int, c) -> "GammaFraction":
        return cls(d, LaurentPoly.const(c, d))

    @classmethod
    def of(cls, d: int, f: LaurentPoly) -> "GammaFraction":
        return cls(d, f.with_base(_join_base(d, f.base)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def den_poly(self) -> LaurentPoly:
        out = ONE
        for s, e in self.den:
            out = out * _phi_in(s, self.d) ** e
        return out

    def _lift(self, den: dict) -> LaurentPoly:
        """Numerator over the (larger) denominator ``den``."""
        mine = dict(self.den)
        num = self.num
        for s, e in den.items():
            extra = e - mine.get(s, 0)
            if extra:
                num = num * _phi_in(s, self.d) ** extra
        return num

    def __add__(self, other: "GammaFraction") -> "GammaFraction":
        self._same(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        den = dict(self.den)
        for s, e in other.den:
            den[s] = max(den.get(s, 0), e)
        num = self._lift(den) + other._lift(den)
        return GammaFraction(self.d, num, tuple(sorted(den.items()))).reduced()

    def __neg__(self):
        return GammaFraction(self.d, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return GammaFraction(self.d, self.num * other, self.den).reduced()
        self._same(other)
        den = dict(self.den)
        for s, e in other.den:
            den[s] = den.get(s, 0) + e
        return GammaFraction(self.d, self.num * other.num, tuple(sorted(den.items()))).reduced()

    def _same(self, other):
        if self.d != other.d:
            raise ValueError(f"mixing bases {self.d} and {other.d}")

    def reduced(self) -> "GammaFraction":
        if self.num.is_zero():
            return GammaFraction(self.d, self.num)
        num = self.num
        den = []
        for s, e in self.den:
            phi = _phi_in(s, self.d)
            while e:
                q = _divides(phi, num)
                if q is None:
                    break
                num, e = q, e - 1
            if e:
                den.append((s, e))
        return GammaFraction(self.d, num, tuple(den))

    def with_base(self, d2: int) -> "GammaFraction":
        """Same value over base d2, a multiple of d (q^{1/d} = y^{d2/d})."""
        if d2 % self.d:
            raise ValueError(f"{d2} is not a multiple of {self.d}")
        m = d2 // self.d
        if m == 1:
            return self
        den: dict[int, int] = {}
        for s, e in self.den:
            for t in _phi_of_power(s, m):
                den[t] = den.get(t, 0) + e
        num = self.num.with_base(_join_base(d2, self.num.base))
        return GammaFraction(d2, num, tuple(sorted(den.items())))

    def unit_inverse(self) -> "GammaFraction":
        """Inverse, provided the numerator is a unit times allowed cyclotomics."""
        if self.num.is_zero():
            raise NonUnitDivisor("zero is not a unit")
        lo = self.num.min_exp()
        g = self.num.shift(-lo)
        D = self.d
        found: dict[int, int] = {}
        deg = int(g.max_exp() * D)
        s = 2
        while deg > 0 and s <= 2 * deg * deg + 2:
            if gcd(s, D) > 1 and totient(s) <= deg:
                phi = _phi_in(s, D)
                while True:
                    q = _divides(phi, g)
                    if q is None:
                        break
                    g = q
                    found[s] = found.get(s, 0) + 1
                    deg -= totient(s)
            s += 1
        if deg != 0:
            raise NonUnitDivisor(f"numerator has a factor outside the allowed cyclotomics: {g.to_text()}")
        c = g.coeff(0)
        inv_c = Fraction(1) / Fraction(c)
        if not _radical_divides(inv_c.denominator, D) or not _radical_divides(abs(Fraction(c).numerator), D):
            raise NonUnitDivisor(f"constant {c} is not a unit of Z[1/{D}]")
        num = self.den_poly() * LaurentPoly.monomial(inv_c, -lo, D)
        return GammaFraction(D, num, tuple(sorted(found.items())))

    def ev(self, r: int) -> CycNum:
        if gcd(r, self.d) != 1:
            raise ValueError(f"order {r} not coprime to base {self.d}")
        val = ev_root(self.num, r)
        if self.den:
            val = val.div(ev_root(self.den_poly(), r), base=self.d)
        return CycNum(r, val.coeffs, self.d, reduced=True)

    def taylor(self, order: int) -> list[Fraction]:
        """Expansion in powers of (q - 1), coefficients checked to lie in Z[1/d]."""
        num = laurent_taylor(self.num, order)
        if self.den:
            den = laurent_taylor(self.den_poly(), order)
            num = series_mul(num, series_inverse(den), order)
        for c in num:
            if not _radical_divides(Fraction(c).denominator, self.d):
                raise RingError(f"Taylor coefficient {c} outside Z[1/{self.d}]")
        return num

    def to_json(self) -> dict:
        return {"num": self.num.to_text(), "den_factors": [[s, e] for s, e in self.den]}


def _join_base(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# -- power series in (q - 1) -------------------------------------------------------------


def _binomial_series(alpha: Fraction, order: int) -> list[Fraction]:
    out = [Fraction(1)]
    c = Fraction(1)
    for n in range(1, order + 1):
        c = c * (alpha - n + 1) / n
        out.append(c)
    return out


def laurent_taylor(f: LaurentPoly, order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for e, c in f.items():
        for n, b in enumerate(_binomial_series(Fraction(e), order)):
            out[n] += c * b
    return out


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def series_inverse(a: Sequence[Fraction]) -> list[Fraction]:
    if not a[0]:
        raise ZeroDivisionError("series with zero constant term")
    order = len(a) - 1
    inv = [Fraction(1) / a[0]]
    for n in range(1, order + 1):
        s = sum((a[i] * inv[n - i] for i in range(1, n + 1)), Fraction(0))
        inv.append(-s / a[0])
    return inv


@lru_cache(maxsize=None)
def _poch_series(n: int, order: int) -> tuple[Fraction, ...]:
    return tuple(laurent_taylor(poch(1, n), order))


# -- elements ------------------------------------------------------------------------------


@dataclass
class HabiroElement:
    """sum_{n <= N} f_n (q;q)_n modulo ((q;q)_{N+1}); N = None means the sum is exact."""

    d: int
    terms: list[GammaFraction] = field(default_factory=list)
    N: int | None = None

    def __post_init__(self):
        for f in self.terms:
            if f.d != self.d:
                raise ValueError("term base differs from element base")
        if self.N is not None:
            self.terms = self.terms[: self.N + 1]

    @classmethod
    def constant(cls, d: int, f: LaurentPoly | GammaFraction | int, N: int | None = None) -> "HabiroElement":
        if isinstance(f, int):
            f = LaurentPoly.const(f)
        if isinstance(f, LaurentPoly):
            f = GammaFraction.of(d, f)
        return cls(d, [f], N)

    @classmethod
    def one(cls, d: int = 1) -> "HabiroElement":
        return cls.constant(d, 1)

    def term(self, n: int) -> GammaFraction:
        if n < len(self.terms):
            return self.terms[n]
        return GammaFraction.const(self.d, 0)

    def _prec(self, other: "HabiroElement") -> int | None:
        if self.N is None:
            return other.N
        if other.N is None:
            return self.N
        return min(self.N, other.N)

    def with_base(self, d2: int) -> "HabiroElement":
        return HabiroElement(d2, [f.with_base(d2) for f in self.terms], self.N)

    def _align(self, other: "HabiroElement") -> tuple["HabiroElement", "HabiroElement"]:
        if self.d == other.d:
            return self, other
        d2 = _join_base(self.d, other.d)
        return self.with_base(d2), other.with_base(d2)

    def __add__(self, other: "HabiroElement") -> "HabiroElement":
        a, b = self._align(other)
        N = a._prec(b)
        size = max(len(a.terms), len(b.terms))
        if N is not None:
            size = min(size, N + 1)
        return HabiroElement(a.d, [a.term(n) + b.term(n) for n in range(size)], N)

    def __neg__(self):
        return HabiroElement(self.d, [-f for f in self.terms], self.N)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            other = HabiroElement.constant(self.d, other)
        a, b = self._align(other)
        N = a._prec(b)
        size = len(a.terms) + len(b.terms) - 1 if a.terms and b.terms else 0
        if N is not None:
            size = min(size, N + 1)
        out = [GammaFraction.const(a.d, 0) for _ in range(size)]
        # (q;q)_i (q;q)_j = (q;q)_{max} (q;q)_{min}
        for i, f in enumerate(a.terms):
            if f.is_zero():
                continue
            for j, g in enumerate(b.terms):
                n = max(i, j)
                if n >= size or g.is_zero():
                    continue
                out[n] = out[n] + (f * g) * poch(1, min(i, j))
        return HabiroElement(a.d, out, N)

    __rmul__ = __mul__

    def inverse(self) -> "HabiroElement":
        if any(not f.is_zero() for f in self.terms[1:]):
            raise NonUnitDivisor("only elements concentrated in degree 0 can be inverted")
        if not self.terms:
            raise NonUnitDivisor("zero is not a unit")
        return HabiroElement(self.d, [self.terms[0].unit_inverse()], self.N)

    def __truediv__(self, other: "HabiroElement") -> "HabiroElement":
        a, b = self._align(other)
        return a * b.inverse()

    def ev(self, r: int) -> CycNum:
        return helem_ev(self, r)

    def taylor1(self, order: int) -> list[Fraction]:
        return taylor1(self, order)

    def to_json(self) -> dict:
        return {"d": self.d, "N": self.N, "terms": [f.to_json() for f in self.terms]}


def helem_ev(x: HabiroElement, r: int) -> CycNum:
    """Evaluation at a primitive r-th root of unity, exact when N >= r - 1."""
    if r < 1 or r % 2 == 0:
        raise ValueError("order must be odd")
    if gcd(r, x.d) != 1:
        raise ValueError(f"order {r} not coprime to base {x.d}")
    if x.N is not None and x.N < r - 1:
        raise PrecisionError(f"precision {x.N} < r - 1 = {r - 1}")
    total = CycNum.from_int(r, 0, x.d)
    for n, f in enumerate(x.terms[:r]):
        if f.is_zero():
            continue
        total = total + f.ev(r) * ev_root(poch(1, n), r)
    return total


def taylor1(x: HabiroElement, order: int) -> list[Fraction]:
    """Expansion around q = 1 to (q-1)^order, coefficients in Z[1/d]."""
    if x.N is not None and x.N < order:
        raise PrecisionError(f"precision {x.N} < order {order}")
    out = [Fraction(0)] * (order + 1)
    for n, f in enumerate(x.terms[: order + 1]):
        if f.is_zero():
            continue
        s = series_mul(f.taylor(order), _poch_series(n, order), order)
        out = [a + b for a, b in zip(out, s)]
    return out


def prefactor_series(e: Fraction, order: int) -> list[Fraction]:
    """Expansion of q^e around q = 1."""
    return _binomial_series(Fraction(e), order)


def agree(a: HabiroElement, b: HabiroElement, max_r: int | None = None) -> bool:
    """Equality test by evaluations at admissible orders and by Taylor coefficients."""
    a, b = a._align(b)
    N = a._prec(b)
    if N is None:
        N = max(len(a.terms), len(b.terms)) + 2
    top = N + 1 if max_r is None else min(max_r, N + 1)
    for r in range(1, top + 1, 2):
        if gcd(r, a.d) == 1 and helem_ev(a, r) != helem_ev(b, r):
            return False
    return taylor1(a, N) == taylor1(b, N)


# -- p-adic diagnostic ------------------------------------------------------------------------


def series_at_root(series: Sequence[Fraction], r: int, upto: int) -> CycNum:
    """sum_{n <= upto} a_n (xi - 1)^n in Q(xi)."""
    x = CycNum(r, [-1, 1], 0)
    total = CycNum.from_int(r, 0, 0)
    power = CycNum.from_int(r, 1, 0)
    for n in range(upto + 1):
        if series[n]:
            total = total + power * series[n]
        power = power * x
    return total


def padic_convergence(series: Sequence[Fraction], target: CycNum, p: int, e: int = 1) -> list[float]:
    """(1 - xi)-adic valuations of (partial sum up to N) - target, N = 0..len-1."""
    r = p ** e
    if _prime_of_power(r) != p:
        raise ValueError("p must be prime")
    if target.r != r:
        raise ValueError(f"target lives at order {target.r}, expected {r}")
    tgt = CycNum(r, target.coeffs, 0, reduced=True)
    return [one_minus_xi_valuation(series_at_root(series, r, N) - tgt) for N in range(len(series))]
