"""Exact Laurent polynomials in a fractional power of q, and q-combinatorics.

A :class:`LaurentPoly` stores ``{e: c}`` meaning ``sum c * q**(e/D)`` with a
single unit denominator ``D`` per value.  Coefficients are Python ints, or
:class:`fractions.Fraction` whose denominators divide a power of ``base``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import re
from typing import Iterable, Iterator, Mapping, Union

Number = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_div` when the divisor does not divide exactly."""

    def __init__(self, message: str, remainder: "LaurentPoly | None" = None):
        super().__init__(message)
        self.remainder = remainder


class ForbiddenDenominator(ArithmeticError):
    pass


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _radical_divides(den: int, base: int) -> bool:
    """True when every prime factor of ``den`` divides ``base``."""
    if den == 1:
        return True
    if base <= 1:
        return False
    g = gcd(den, base)
    while g > 1:
        while den % g == 0:
            den //= g
        g = gcd(den, base)
    return den == 1


def _norm_coeff(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def check_coeff(c: Number, base: int) -> Number:
    c = _norm_coeff(c)
    if isinstance(c, Fraction) and not _radical_divides(c.denominator, base):
        raise ForbiddenDenominator(f"coefficient {c} not in Z[1/{base}]")
    return c


class LaurentPoly:
    """Immutable exact Laurent polynomial in ``q**(1/denom_exp)``."""

    __slots__ = ("denom_exp", "terms", "base", "_hash")

    def __init__(
        self,
        terms: Mapping[int, Number] | None = None,
        denom_exp: int = 1,
        base: int = 1,
        *,
        _trusted: bool = False,
    ):
        if denom_exp <= 0:
            raise ValueError("denom_exp must be positive")
        if base <= 0:
            raise ValueError("base must be positive")
        self.base = base
        self._hash = None
        if _trusted:
            self.terms = terms
            self.denom_exp = denom_exp
            return
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                clean[int(e)] = check_coeff(c, base)
        # smallest unit denominator
        g = denom_exp
        for e in clean:
            g = gcd(g, e)
            if g == 1:
                break
        if g > 1:
            clean = {e // g: c for e, c in clean.items()}
            denom_exp //= g
        self.terms = clean
        self.denom_exp = denom_exp

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, base: int = 1) -> "LaurentPoly":
        return cls({}, 1, base)

    @classmethod
    def const(cls, c: Number, base: int = 1) -> "LaurentPoly":
        return cls({0: c}, 1, base)

    @classmethod
    def monomial(cls, c: Number = 1, exponent: Number = 0, base: int = 1) -> "LaurentPoly":
        """``c * q**exponent`` with a rational exponent."""
        ex = Fraction(exponent)
        return cls({ex.numerator: c}, ex.denominator, base)

    @classmethod
    def from_exponents(cls, pairs: Iterable[tuple[Number, Number]], base: int = 1) -> "LaurentPoly":
        """Build from ``(exponent, coeff)`` pairs with rational exponents."""
        pairs = [(Fraction(e), c) for e, c in pairs]
        D = 1
        for e, _ in pairs:
            D = _lcm(D, e.denominator)
        out: dict[int, Number] = {}
        for e, c in pairs:
            k = int(e * D)
            out[k] = out.get(k, 0) + c
        return cls(out, D, base)

    # -- basic accessors ------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[Fraction, Number]]:
        """(rational exponent, coefficient) in increasing exponent order."""
        D = self.denom_exp
        for e in sorted(self.terms):
            yield Fraction(e, D), self.terms[e]

    def min_exp(self) -> Fraction:
        return Fraction(min(self.terms), self.denom_exp)

    def max_exp(self) -> Fraction:
        return Fraction(max(self.terms), self.denom_exp)

    def coeff(self, exponent: Number) -> Number:
        ex = Fraction(exponent) * self.denom_exp
        if ex.denominator != 1:
            return 0
        return self.terms.get(int(ex), 0)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def rescaled(self, D: int) -> dict[int, Number]:
        """Term map over the unit ``q**(1/D)``; ``D`` must be a multiple of denom_exp."""
        k, rem = divmod(D, self.denom_exp)
        if rem:
            raise ValueError(f"{D} is not a multiple of {self.denom_exp}")
        if k == 1:
            return self.terms
        return {e * k: c for e, c in self.terms.items()}

    def with_base(self, base: int) -> "LaurentPoly":
        return LaurentPoly(self.terms, self.denom_exp, base)

    # -- ring operations ------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other, self.base)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D = _lcm(self.denom_exp, other.denom_exp)
        out = dict(self.rescaled(D))
        for e, c in other.rescaled(D).items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out, D, _lcm(self.base, other.base))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.denom_exp, self.base, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly.zero(self.base)
            return LaurentPoly({e: c * other for e, c in self.terms.items()}, self.denom_exp, self.base)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        D = _lcm(self.denom_exp, other.denom_exp)
        a = self.rescaled(D)
        b = other.rescaled(D)
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, Number] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                k = ea + eb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly(out, D, _lcm(self.base, other.base))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("negative powers only for monomials")
            (e, c), = self.terms.items()
            inv = Fraction(1, 1) / c
            return LaurentPoly({-e * (-n): inv ** (-n)}, self.denom_exp, self.base)
        result = LaurentPoly.const(1, self.base)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exponent: Number) -> "LaurentPoly":
        """Multiply by ``q**exponent``."""
        ex = Fraction(exponent)
        D = _lcm(self.denom_exp, ex.denominator)
        s = int(ex * D)
        return LaurentPoly({e + s: c for e, c in self.rescaled(D).items()}, D, self.base)

    def bar(self) -> "LaurentPoly":
        """The involution q -> 1/q."""
        return LaurentPoly({-e: c for e, c in self.terms.items()}, self.denom_exp, self.base, _trusted=True)

    def scale_exponents(self, factor: Number) -> "LaurentPoly":
        """Substitute q -> q**factor."""
        fr = Fraction(factor)
        if fr == 0:
            return LaurentPoly.const(sum(self.terms.values(), 0), self.base)
        D = self.denom_exp * fr.denominator
        return LaurentPoly({e * fr.numerator: c for e, c in self.terms.items()}, D, self.base)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.denom_exp == other.denom_exp and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.denom_exp, frozenset(self.terms.items())))
        return self._hash

    # -- text form ---------------------------------------------------------
    def to_text(self) -> str:
        if not self.terms:
            return "0"
        D = self.denom_exp
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            parts.append(f"{c}*q^({e}/{D})")
        return " + ".join(parts)

    @classmethod
    def from_text(cls, text: str, base: int = 1) -> "LaurentPoly":
        text = text.strip()
        if text == "0":
            return cls.zero(base)
        pairs = []
        for chunk in text.split(" + "):
            m = _MONO_RE.fullmatch(chunk.strip())
            if not m:
                raise ValueError(f"bad monomial {chunk!r}")
            c = Fraction(m.group(1))
            pairs.append((Fraction(int(m.group(2)), int(m.group(3))), c))
        return cls.from_exponents(pairs, base)

    def __repr__(self):
        return f"LaurentPoly({self.to_text()})"

    def evaluate(self, x: complex) -> complex:
        """Numeric value with q**(1/D) -> x; display only."""
        return sum(complex(c) * x ** e for e, c in self.terms.items())


_MONO_RE = re.compile(r"(-?\d+(?:/\d+)?)\*q\^\((-?\d+)/(\d+)\)")


ONE = LaurentPoly.const(1)
ZERO = LaurentPoly.zero()


def q(exponent: Number = 1) -> LaurentPoly:
    return LaurentPoly.monomial(1, exponent)


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Return ``h`` with ``f == g * h`` or raise :class:`NotDivisible`."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    base = _lcm(f.base, g.base)
    if f.is_zero():
        return LaurentPoly.zero(base)
    D = _lcm(f.denom_exp, g.denom_exp)
    ft = f.rescaled(D)
    gt = g.rescaled(D)
    if len(gt) == 1:
        (eg, cg), = gt.items()
        out = {}
        for e, c in ft.items():
            out[e - eg] = c if cg == 1 else (-c if cg == -1 else Fraction(c) / cg)
        try:
            return LaurentPoly(out, D, base)
        except ForbiddenDenominator as exc:
            raise NotDivisible(str(exc)) from None
    flo, fhi = min(ft), max(ft)
    glo, ghi = min(gt), max(gt)
    n, m = fhi - flo, ghi - glo
    if n < m:
        raise NotDivisible("degree of divisor exceeds dividend", f)
    rem = [0] * (n + 1)
    for e, c in ft.items():
        rem[e - flo] = c
    gd = [0] * (m + 1)
    for e, c in gt.items():
        gd[e - glo] = c
    gnz = [(j, c) for j, c in enumerate(gd) if c]
    lead = gd[m]
    quo = [0] * (n - m + 1)
    unit = lead in (1, -1)
    for i in range(n - m, -1, -1):
        c = rem[i + m]
        if not c:
            continue
        if unit:
            qc = c * lead
        else:
            qc = Fraction(c) / lead
            if qc.denominator == 1:
                qc = qc.numerator
        quo[i] = qc
        for j, gc in gnz:
            rem[i + j] -= qc * gc
    if any(rem[:m]):
        r = {k + flo: c for k, c in enumerate(rem[:m]) if c}
        raise NotDivisible("nonzero remainder", LaurentPoly(r, D, base if _all_ok(r, base) else _den_base(r)))
    out = {i + flo - glo: c for i, c in enumerate(quo) if c}
    try:
        return LaurentPoly(out, D, base)
    except ForbiddenDenominator as exc:
        raise NotDivisible(f"quotient leaves the coefficient ring: {exc}") from None


def _all_ok(terms, base):
    return all(not isinstance(c, Fraction) or _radical_divides(c.denominator, base) for c in terms.values())


def _den_base(terms):
    b = 1
    for c in terms.values():
        if isinstance(c, Fraction):
            b = _lcm(b, c.denominator)
    return b


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    try:
        exact_div(f, g)
    except NotDivisible:
        return False
    return True


# ---------------------------------------------------------------------------
# q-combinatorics.  {n} = q^{n/2} - q^{-n/2}, [n] = {n}/{1}.


@lru_cache(maxsize=None)
def braced(n: int) -> LaurentPoly:
    """{n} = q^{n/2} - q^{-n/2}."""
    if n == 0:
        return ZERO
    return LaurentPoly({n: 1, -n: -1}, 2)


@lru_cache(maxsize=None)
def bracket(n: int) -> LaurentPoly:
    """Quantum integer [n] = {n}/{1}; [-n] = -[n]."""
    if n < 0:
        return -bracket(-n)
    return LaurentPoly({n - 1 - 2 * j: 1 for j in range(n)}, 2)


@lru_cache(maxsize=None)
def braced_fact(n: int) -> LaurentPoly:
    """{n}! = {1}{2}...{n}."""
    if n < 0:
        raise ValueError("factorial of negative index")
    if n == 0:
        return ONE
    return braced_fact(n - 1) * braced(n)


@lru_cache(maxsize=None)
def bracket_fact(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("factorial of negative index")
    if n == 0:
        return ONE
    return bracket_fact(n - 1) * bracket(n)


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int) -> tuple[int, ...]:
    """Coefficient list of the Gaussian binomial [n choose k]_q in q**0..q**(k(n-k))."""
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    # [n,k] = [n-1,k-1] + q^k [n-1,k]
    a = gaussian_binomial(n - 1, k - 1)
    b = gaussian_binomial(n - 1, k)
    out = [0] * (k * (n - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


@lru_cache(maxsize=None)
def qbinom(n: int, k: int) -> LaurentPoly:
    """Balanced q-binomial {n}!/({k}!{n-k}!); symmetric under q -> 1/q."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"qbinom({n}, {k}) out of range")
    coeffs = gaussian_binomial(n, k)
    s = k * (n - k)
    # q^{-k(n-k)/2} * sum c_i q^i, in half-units
    return LaurentPoly({2 * i - s: c for i, c in enumerate(coeffs) if c}, 2)


def qbinom0(n: int, k: int) -> LaurentPoly:
    """Like :func:`qbinom` but zero outside 0 <= k <= n (n >= 0)."""
    if k < 0 or k > n or n < 0:
        return ZERO
    return qbinom(n, k)


@lru_cache(maxsize=None)
def poch(m: int, n: int) -> LaurentPoly:
    """(q^m; q)_n = prod_{i<n} (1 - q^{m+i})."""
    if n < 0:
        raise ValueError("negative Pochhammer length")
    out = ONE
    for i in range(n):
        out = out * LaurentPoly({0: 1, m + i: -1})
    return out


def qcombinator(kind: str, *args: int) -> LaurentPoly:
    """Dispatch on ``kind`` in {braced, bracket, braced_fact, qbinom, poch}."""
    table = {
        "braced": braced,
        "bracket": bracket,
        "braced_fact": braced_fact,
        "qbinom": qbinom,
        "poch": poch,
    }
    try:
        fn = table[kind]
    except KeyError:
        raise ValueError(f"unknown q-combinator {kind!r}") from None
    return fn(*args)


# ---------------------------------------------------------------------------


class BivariatePoly:
    """Integer polynomial in q^{+-1}, t^{+-1}: ``{(q_exp, t_exp): c}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        self.terms = {(int(a), int(b)): c for (a, b), c in (terms or {}).items() if c}

    @classmethod
    def t(cls, n: int = 1) -> "BivariatePoly":
        return cls({(0, n): 1})

    @classmethod
    def from_laurent(cls, f: LaurentPoly, t_exp: int = 0) -> "BivariatePoly":
        """Embed an integer-exponent LaurentPoly times ``t**t_exp``."""
        if f.denom_exp != 1:
            raise ValueError("only integer powers of q embed")
        return cls({(e, t_exp): c for e, c in f.terms.items()})

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BivariatePoly(out)

    def __neg__(self):
        return BivariatePoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BivariatePoly({k: c * other for k, c in self.terms.items()})
        out: dict[tuple[int, int], int] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BivariatePoly({self.terms})"

    def specialize(self, kind: str, value: int) -> LaurentPoly:
        """``phi_d``: t -> q^{1/d};  ``phitilde_b``: t -> q^b."""
        if kind == "phi_d":
            return phi_d(self, value)
        if kind == "phitilde_b":
            return phitilde_b(self, value)
        raise ValueError(f"unknown specialization {kind!r}")


def phi_d(p: BivariatePoly, d: int) -> LaurentPoly:
    """t -> q^{1/d}; result over the unit q^{1/|d|}."""
    if d == 0:
        raise ValueError("phi_d needs d != 0")
    D = abs(d)
    s = 1 if d > 0 else -1
    out: dict[int, int] = {}
    for (a, b), c in p.terms.items():
        k = a * D + s * b
        out[k] = out.get(k, 0) + c
    return LaurentPoly(out, D)


def phitilde_b(p: BivariatePoly, b: int) -> LaurentPoly:
    """t -> q^b."""
    out: dict[int, int] = {}
    for (a, e), c in p.terms.items():
        k = a + b * e
        out[k] = out.get(k, 0) + c
    return LaurentPoly(out, 1)
