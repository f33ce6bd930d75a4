"""Cyclotomic expansion of the colored Jones polynomial.

J_L(n_1..n_m) = sum_k C(k) prod_i qbinom(n_i + k_i, 2k_i + 1) {k_i}!

The coefficient table C is recovered from J at colors 1..k_max+1 by a
triangular solve, one axis at a time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .cyclonum import CycNum, ev_root
from .jones import FramedLink, colored_jones
from .qlaurent import (
    ONE,
    ZERO,
    LaurentPoly,
    NotDivisible,
    braced,
    braced_fact,
    exact_div,
    qbinom0,
)


@lru_cache(maxsize=None)
def basis_factor(n: int, k: int) -> LaurentPoly:
    """qbinom(n + k, 2k + 1) {k}!  (zero when k >= n)."""
    return qbinom0(n + k, 2 * k + 1) * braced_fact(k)


@lru_cache(maxsize=None)
def divisor(k: int) -> LaurentPoly:
    """{2k+1}! / ({k}! {1})."""
    return exact_div(braced_fact(2 * k + 1), braced_fact(k) * braced(1))


@dataclass
class CycExpansion:
    arity: int
    k_max: int
    table: dict[tuple[int, ...], LaurentPoly] = field(default_factory=dict)

    def entry(self, k: Sequence[int]) -> LaurentPoly:
        return self.table.get(tuple(k), ZERO)

    def resum(self, colors: Sequence[int]) -> LaurentPoly:
        total = ZERO
        for k, c in self.table.items():
            if not c:
                continue
            term = c
            for n, ki in zip(colors, k):
                term = term * basis_factor(n, ki)
                if not term:
                    break
            total = total + term
        return total

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "k_max": self.k_max,
            "table": {",".join(map(str, k)): v.to_text() for k, v in sorted(self.table.items())},
        }


def _solve_axis(values: dict, axis: int, k_max: int) -> dict:
    """Invert the unitriangular matrix qbinom(n+k, 2k+1) along one axis.

    Keys along ``axis`` go in as colors n = 1..k_max+1 and come out as k = 0..k_max.
    """
    out = {}
    others = sorted({key[:axis] + key[axis + 1:] for key in values})
    for rest in others:
        def key(i):
            return rest[:axis] + (i,) + rest[axis:]

        solved: list[LaurentPoly] = []
        for k in range(k_max + 1):
            n = k + 1
            acc = values[key(n)]
            for j in range(k):
                if solved[j]:
                    acc = acc - solved[j] * qbinom0(n + j, 2 * j + 1)
            solved.append(acc)  # diagonal entry qbinom(2k+1, 2k+1) = 1
        for k, v in enumerate(solved):
            out[key(k)] = v
    return out


def cyclotomic_coeffs(link: FramedLink, k_max: int,
                      jones: Callable[[FramedLink, Sequence[int]], LaurentPoly] = colored_jones) -> CycExpansion:
    """Coefficients C(k) for all k_i <= k_max from J at colors <= k_max + 1."""
    m = link.n_components
    values = {n: jones(link, n) for n in itertools.product(range(1, k_max + 2), repeat=m)}
    for axis in range(m):
        values = _solve_axis(values, axis, k_max)
    table = {}
    for k, v in values.items():
        den = ONE
        for ki in k:
            den = den * braced_fact(ki)
        table[k] = exact_div(v, den)
    return CycExpansion(m, k_max, table)


@dataclass
class DivisibilityEntry:
    k: tuple[int, ...]
    ok: bool
    quotient: LaurentPoly | None
    remainder: LaurentPoly | None = None

    def to_json(self) -> dict:
        out = {"k": list(self.k), "ok": self.ok}
        if self.quotient is not None:
            out["quotient"] = self.quotient.to_text()
        if self.remainder is not None:
            out["remainder"] = self.remainder.to_text()
        return out


@dataclass
class DivisibilityCertificate:
    entries: list[DivisibilityEntry]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[DivisibilityEntry]:
        return [e for e in self.entries if not e.ok]

    def to_json(self) -> dict:
        return {"ok": self.ok, "entries": [e.to_json() for e in self.entries]}


def _in_half_integral_ring(f: LaurentPoly) -> bool:
    return 2 % f.denom_exp == 0 and f.is_integral()


def habiro_divisibility_check(e: CycExpansion) -> DivisibilityCertificate:
    out = []
    for k, v in sorted(e.table.items()):
        kk = max(k) if k else 0
        try:
            quo = exact_div(v, divisor(kk))
        except NotDivisible as exc:
            out.append(DivisibilityEntry(k, False, None, exc.remainder))
            continue
        out.append(DivisibilityEntry(k, _in_half_integral_ring(quo), quo))
    return DivisibilityCertificate(out)


def vanishing_eval_check(r: int, k: int) -> bool:
    """ev_xi({2k+1}!/({k}!{1})) == 0 when k > (r-3)/2."""
    if r < 3 or r % 2 == 0:
        raise ValueError("r must be odd and at least 3")
    if 2 * k <= r - 3:
        raise ValueError(f"k = {k} is not above (r-3)/2 for r = {r}")
    return ev_root(divisor(k), r).is_zero()


def truncated_eval(e: CycExpansion, colors: Sequence[int], r: int) -> CycNum:
    """ev_xi(J_L(colors)) from the expansion truncated at k_i <= (r-3)/2."""
    cut = (r - 3) // 2
    if e.k_max < cut:
        raise ValueError(f"k_max = {e.k_max} below (r-3)/2 = {cut}")
    total = CycNum.from_int(r, 0)
    for k, c in e.table.items():
        if not c or max(k, default=0) > cut:
            continue
        term = c
        for n, ki in zip(colors, k):
            term = term * basis_factor(n, ki)
        total = total + ev_root(term, r)
    return total
