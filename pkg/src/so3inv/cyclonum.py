"""Arithmetic in Z[1/d][xi] for xi a primitive root of unity of odd order r.

Elements are stored as coefficient tuples of a polynomial in ``t`` reduced
modulo the cyclotomic polynomial Phi_r(t).  The reduced form is unique, so
equality is coefficient equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from .qlaurent import LaurentPoly, _radical_divides

Number = Union[int, Fraction]


class NotInRing(ArithmeticError):
    """A result has denominators outside the declared ring Z[1/d]."""

    def __init__(self, message: str, value: "CycNum | None" = None):
        super().__init__(message)
        self.value = value


class NotInvertible(ArithmeticError):
    pass


# -- cyclotomic polynomials ------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(s: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_s(t), lowest degree first."""
    if s < 1:
        raise ValueError("cyclotomic index must be positive")
    num = [-1] + [0] * (s - 1) + [1]  # t^s - 1
    for m in range(1, s):
        if s % m == 0:
            num = _poly_divexact_int(num, cyclotomic(m))
    return tuple(num)


def _poly_divexact_int(a: list[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    n, m = len(a) - 1, len(b) - 1
    out = [0] * (n - m + 1)
    lead = b[m]
    for i in range(n - m, -1, -1):
        c = a[i + m]
        if c:
            qc = c // lead
            out[i] = qc
            for j, bc in enumerate(b):
                a[i + j] -= qc * bc
    if any(a[:m]):
        raise ArithmeticError("inexact integer polynomial division")
    return out


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic(n)) - 1


def cyclotomic_poly(s: int, d: int = 1) -> LaurentPoly:
    """Phi_s(q^{1/d}) as a LaurentPoly."""
    return LaurentPoly({i * 1: c for i, c in enumerate(cyclotomic(s)) if c}, d)


def _reduce(coeffs: list, r: int) -> tuple:
    """Reduce a coefficient list (lowest first) modulo Phi_r."""
    phi = cyclotomic(r)
    n = len(phi) - 1
    if len(coeffs) > r:
        folded = [0] * r
        for i, c in enumerate(coeffs):
            if c:
                folded[i % r] += c
        coeffs = folded
    else:
        coeffs = list(coeffs)
    nz = [(j, c) for j, c in enumerate(phi[:n]) if c]
    for i in range(len(coeffs) - 1, n - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            base = i - n
            for j, pc in nz:
                coeffs[base + j] -= c * pc
    coeffs += [0] * (n - len(coeffs))
    return tuple(_norm(c) for c in coeffs[:n])


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return a // gcd(a, b) * b


class CycNum:
    """Element of Z[1/base][xi], xi of odd order ``r``; base 0 means Q(xi)."""

    __slots__ = ("r", "base", "coeffs")

    def __init__(self, r: int, coeffs: Iterable[Number] = (), base: int = 1, *, reduced: bool = False):
        if r < 1 or r % 2 == 0:
            raise ValueError(f"order must be odd and positive, got {r}")
        self.r = r
        self.base = base
        self.coeffs = tuple(coeffs) if reduced else _reduce(list(coeffs), r)
        if base:
            for c in self.coeffs:
                if isinstance(c, Fraction) and not _radical_divides(c.denominator, base):
                    raise NotInRing(f"coefficient {c} not in Z[1/{base}]", None)

    @classmethod
    def from_int(cls, r: int, c: Number, base: int = 1) -> "CycNum":
        return cls(r, [c], base)

    @classmethod
    def t_power(cls, r: int, k: int, c: Number = 1, base: int = 1) -> "CycNum":
        return cls(r, [0] * (k % r) + [c], base)

    def _other(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.r != self.r:
                raise ValueError(f"mixing orders {self.r} and {other.r}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_int(self.r, other, self.base or 1)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CycNum(self.r, tuple(_norm(a + b) for a, b in zip(self.coeffs, o.coeffs)),
                      _lcm(self.base, o.base), reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.r, tuple(-a for a in self.coeffs), self.base, reduced=True)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.r, tuple(_norm(a * other) for a in self.coeffs), self.base, reduced=True)
        o = self._other(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum(self.r, prod, _lcm(self.base, o.base))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycNum.from_int(self.r, 1, self.base or 1)
        b = self
        while n:
            if n & 1:
                out = out * b
            n >>= 1
            if n:
                b = b * b
        return out

    def bar(self) -> "CycNum":
        """Complex conjugation xi -> xi^{-1}."""
        r = self.r
        out = [0] * r
        for i, c in enumerate(self.coeffs):
            out[(-i) % r] += c
        return CycNum(r, out, self.base)

    def galois(self, k: int) -> "CycNum":
        """xi -> xi^k for k coprime to r."""
        r = self.r
        out = [0] * r
        for i, c in enumerate(self.coeffs):
            out[(i * k) % r] += c
        return CycNum(r, out, self.base)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_integral(self) -> bool:
        return all(not isinstance(c, Fraction) for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycNum.from_int(self.r, other, 0)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.r == other.r and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.r, self.coeffs))

    def inverse(self, base: int | None = None) -> "CycNum":
        """Inverse in Q(xi), screened against Z[1/base] (default: own base)."""
        if self.is_zero():
            raise NotInvertible("zero has no inverse")
        inv = _inverse_mod_phi(list(self.coeffs), self.r)
        target = self.base if base is None else base
        try:
            return CycNum(self.r, inv, target, reduced=True)
        except NotInRing:
            raise NotInvertible(f"inverse leaves Z[1/{target}]") from None

    def div(self, other: "CycNum", base: int | None = None) -> "CycNum":
        """Exact quotient in Q(xi), required to lie in Z[1/base]."""
        o = self._other(other)
        target = _lcm(self.base, o.base) if base is None else base
        inv = CycNum(self.r, _inverse_mod_phi(list(o.coeffs), self.r), 0, reduced=True)
        out = self * inv
        try:
            return CycNum(self.r, out.coeffs, target, reduced=True)
        except NotInRing as exc:
            raise NotInRing(str(exc), CycNum(self.r, out.coeffs, 0, reduced=True)) from None

    def __truediv__(self, other):
        return self.div(other)

    def to_json(self) -> dict:
        return {"r": self.r, "d": self.base, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycNum":
        return cls(obj["r"], [Fraction(c) for c in obj["coeffs"]], obj["d"])

    def to_complex(self) -> complex:
        """Numeric value at xi = exp(2 pi i / r); for display only."""
        import cmath

        x = cmath.exp(2j * cmath.pi / self.r)
        return sum(complex(float(c)) * x ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycNum(r={self.r}, {' + '.join(terms) or '0'})"


def _poly_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [], _poly_trim(a)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = Fraction(b[-1])
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] / lead
        out[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] -= c * bc
    return out, _poly_trim(a[: len(b) - 1])


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _inverse_mod_phi(a: list, r: int) -> tuple:
    """Extended Euclid in Q[t]: a^{-1} mod Phi_r."""
    a = _poly_trim(list(a))
    if not a:
        raise NotInvertible("zero has no inverse")
    phi = list(cyclotomic(r))
    r0, r1 = phi, a
    s0, s1 = [], [Fraction(1)]
    while len(_poly_trim(list(r1))) > 1:
        qt, rem = _poly_divmod(r0, r1)
        if not rem:
            raise NotInvertible("element shares a factor with Phi_r")
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(qt, s1))
    c = Fraction(r1[0])
    inv = [x / c for x in s1]
    return _reduce(inv, r)


# -- evaluation ------------------------------------------------------------


def ev_root(f: LaurentPoly, r: int) -> CycNum:
    """Substitute q^{1/D} -> xi^b with D*b = 1 mod r, xi of order r."""
    D = f.denom_exp
    if gcd(D, r) != 1:
        raise ValueError(f"evaluation undefined: gcd({D}, {r}) != 1")
    b = pow(D, -1, r) if r > 1 else 0
    acc: list = [0] * r
    for e, c in f.terms.items():
        acc[(e * b) % r] += c
    return CycNum(r, acc, f.base)


def odd_colors(r: int) -> range:
    """Odd n with 0 < n < 2r."""
    return range(1, 2 * r, 2)


def gauss_sum(d: int, r: int) -> CycNum:
    """gamma_d(xi) = sum over odd 0<n<2r of xi^{d(n^2-1)/4}."""
    if r % 2 == 0:
        raise ValueError("r must be odd")
    acc = [0] * r
    for n in odd_colors(r):
        acc[(d * ((n * n - 1) // 4)) % r] += 1
    return CycNum(r, acc)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _sawtooth(x: Fraction) -> Fraction:
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind(d: int, a: int) -> Fraction:
    """Dedekind sum s(d, a) with the sawtooth ((x)) = 0 at integers."""
    if d <= 0:
        raise ValueError("d must be positive")
    if gcd(a, d) != 1:
        raise ValueError(f"gcd({a}, {d}) != 1")
    return sum((_sawtooth(Fraction(i, d)) * _sawtooth(Fraction(i * a, d)) for i in range(1, d)), Fraction(0))


def sign(x: int) -> int:
    return (x > 0) - (x < 0)


def gauss_ratio(d: int, r: int) -> CycNum:
    """gamma_d / gamma_{sn d}, checked against (|d|/r) ev(q^{(sn d - d)/4})."""
    if d == 0:
        raise ValueError("d must be nonzero")
    if gcd(d, r) != 1 or r % 2 == 0:
        raise ValueError(f"need odd r coprime to d, got d={d}, r={r}")
    sn = sign(d)
    num = gauss_sum(d, r)
    den = gauss_sum(sn, r)
    try:
        ratio = num.div(den, base=1)
    except (NotInRing, NotInvertible) as exc:
        raise ArithmeticError(f"gauss ratio not in Z[xi]: {exc}") from None
    closed = ev_root(LaurentPoly.monomial(1, Fraction(sn - d, 4)), r) * jacobi(abs(d), r)
    if ratio != closed:
        raise ArithmeticError(f"gauss ratio identity failed for d={d}, r={r}")
    return ratio


def one_minus_xi_valuation(x: CycNum) -> float:
    """(1 - xi)-adic valuation in Z_(p)[xi] for r = p^e; inf for zero."""
    r = x.r
    p = _prime_of_power(r)
    if x.is_zero():
        return float("inf")
    inv = CycNum(r, [1, -1], 0).inverse(base=0)
    v = 0
    cur = CycNum(r, x.coeffs, 0, reduced=True)
    while True:
        nxt = cur * inv
        if any(isinstance(c, Fraction) and c.denominator % p == 0 for c in nxt.coeffs):
            return v
        cur = nxt
        v += 1


def _prime_of_power(r: int) -> int:
    if r < 3:
        raise ValueError("need an odd prime power")
    p = next(k for k in range(2, r + 1) if r % k == 0)
    m = r
    while m % p == 0:
        m //= p
    if m != 1:
        raise ValueError(f"{r} is not a prime power")
    return p
