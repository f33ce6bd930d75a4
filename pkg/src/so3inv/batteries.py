"""Verification batteries shared by the command line and the acceptance suite.

Each battery returns a :class:`Battery` holding one :class:`Case` per checked
instance, so failures can be reported individually and serialized.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cycloexp import cyclotomic_coeffs, habiro_divisibility_check, truncated_eval, vanishing_eval_check
from .cyclonum import ev_root, gauss_ratio, gauss_sum, jacobi
from .habiro import RingError, padic_convergence
from .invariants import (
    IM_lens,
    IM_series,
    IntegralityViolation,
    SurgeryPresentation,
    lens_presentation,
    lens_tau,
    lens_unified_sides,
    ohtsuki_series,
    poincare_sphere,
    tau,
    tau_with_link,
    unified_sides,
    worker_count,
)
from .jones import (
    FramedLink,
    borromean,
    colored_jones,
    figure8,
    halfpower_check,
    hopf,
    jones_skein_check,
    left_trefoil,
    trefoil,
    unknot,
    whitehead,
)
from .laplace import (
    MembershipFailure,
    Zk,
    lemma1000_check,
    prop222a_check,
    prop222b_check,
    tech_identity_check,
    twist_element,
)
from .qlaurent import BivariatePoly, bracket

ROOTS = (3, 5, 7, 9, 11)


@dataclass
class Case:
    label: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"label": self.label, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Battery:
    name: str
    cases: list[Case] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.cases) and all(c.ok for c in self.cases)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.cases.append(Case(label, bool(ok), detail))

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.ok]

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "count": len(self.cases),
                "cases": [c.to_json() for c in self.cases]}


def _map(fn, items: list) -> list:
    """Order-preserving map, spread over a process pool when SO3INV_WORKERS > 1."""
    n = worker_count()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- tech identity and twist membership ------------------------------------------------


def tech_identity(kmax: int = 6, bmax: int = 4) -> Battery:
    """All k <= kmax and |b| <= bmax; b = 0 is included and compares 0 with 0."""
    out = Battery("tech_identity")
    for k in range(kmax + 1):
        for b in range(-bmax, bmax + 1):
            rep = tech_identity_check(k, b)
            out.add(f"k={k} b={b}", rep.ok, rep.detail)
    return out


def twist(kmax: int = 4, bmax: int = 3) -> Battery:
    out = tech_identity(kmax, bmax)
    out.name = "twist"
    for k in range(kmax + 1):
        for d in range(-bmax, bmax + 1):
            if d == 0:
                continue
            try:
                twist_element(k, d)
                out.add(f"membership k={k} d={d}", True)
            except MembershipFailure as exc:
                out.add(f"membership k={k} d={d}", False, str(exc))
    return out


# -- Gauss sums, Laplace transform, color sums ---------------------------------------------


def _random_bivariate(rng: random.Random, terms: int = 4) -> BivariatePoly:
    f = BivariatePoly()
    for _ in range(terms):
        c = rng.randint(-5, 5) or 1
        f = f + BivariatePoly({(rng.randint(-3, 3), rng.randint(-3, 3)): c})
    return f


def gauss(seed: int = 1, samples: int = 3) -> Battery:
    out = Battery("gauss")
    rng = random.Random(seed)
    for d in (1, -1, 2, -2, 3):
        for r in (5, 7):
            for i in range(samples):
                f = _random_bivariate(rng)
                out.add(f"laplace d={d} r={r} sample={i}", lemma1000_check(f, d, r))
            out.add(f"laplace d={d} r={r} Z(1)", lemma1000_check(Zk(1), d, r))
    for d in (1, -1, 2, -2, 3, -3, 4, 5):
        for r in ROOTS:
            if gcd(d, r) != 1:
                continue
            g = gauss_sum(d, r)
            out.add(f"|gamma|^2 d={d} r={r}", g * g.bar() == r)
            try:
                gauss_ratio(d, r)
                out.add(f"gauss ratio d={d} r={r}", True)
            except ArithmeticError as exc:
                out.add(f"gauss ratio d={d} r={r}", False, str(exc))
    for r in (5, 7):
        for k in range((r - 3) // 2 + 1):
            out.add(f"color sum r={r} k={k}", prop222a_check(k, r))
            for d in (1, -1, 2, -2, 3):
                out.add(f"weighted color sum r={r} k={k} d={d}", prop222b_check(k, d, r))
    return out


# -- lens spaces ------------------------------------------------------------------------------------


def lens(ds=(2, 3, 4, 5), roots=ROOTS) -> Battery:
    out = Battery("lens")
    for d in ds:
        for r in roots:
            if gcd(d, r) != 1:
                continue
            a = tau(lens_presentation(d), r)
            b = lens_tau(d, 1, r)
            out.add(f"d={d} r={r}", a == b, "" if a == b else f"{a} != {b}")
    if 2 in ds and 3 in roots:
        out.add("hand cell d=2 r=3 is 1", lens_tau(2, 1, 3) == 1)
    return out


# -- cyclotomic expansion ----------------------------------------------------------------------


def habiro(kmax: int = 5, kmax_links: int = 3) -> Battery:
    out = Battery("habiro")
    cases = [(trefoil(), kmax), (figure8(), kmax), (whitehead(), kmax_links), (borromean(), kmax_links)]
    for link, km in cases:
        cert = habiro_divisibility_check(cyclotomic_coeffs(link, km))
        for e in cert.entries:
            out.add(f"{link.name} k={e.k}", e.ok)
    return out


# -- integrality -------------------------------------------------------------------------------


def integrality_battery() -> list[tuple[str, FramedLink]]:
    return [
        ("unknot +1", unknot(1)),
        ("unknot -1", unknot(-1)),
        ("unknot +2", unknot(2)),
        ("unknot -2", unknot(-2)),
        ("unknot +3", unknot(3)),
        ("trefoil +1", trefoil(1)),
        ("trefoil -1", trefoil(-1)),
        ("poincare sphere", left_trefoil(-1)),
        ("figure8 +1", figure8(1)),
        ("figure8 -1", figure8(-1)),
        ("whitehead (2,-1)", whitehead((2, -1))),
    ]


def _tau_cell(cell: tuple[str, FramedLink, int]) -> Case:
    name, link, r = cell
    try:
        v = tau(SurgeryPresentation(link), r)
    except IntegralityViolation as exc:
        return Case(f"{name} r={r}", False, str(exc))
    return Case(f"{name} r={r}", v.is_integral())


def integrality(roots=ROOTS) -> Battery:
    out = Battery("integrality")
    cells = []
    for name, link in integrality_battery():
        d = SurgeryPresentation(link).torsion_order()
        cells += [(name, link, r) for r in roots if gcd(r, d) == 1]
    out.cases.extend(_map(_tau_cell, cells))
    # meridian of the surgery curve of L(2,1), colored 2
    v = tau_with_link(hopf((2, 0)), [0], {1: 2}, 5)
    out.add("L(2,1) with meridian colored 2, r=5", v.is_integral())
    return out


# -- unified invariant --------------------------------------------------------------------------


def unified(roots=(3, 5, 7)) -> Battery:
    out = Battery("unified")
    targets = [("L(2,1)", lens_presentation(2)), ("L(3,1)", lens_presentation(3)),
               ("L(5,1)", lens_presentation(5)), ("poincare sphere", poincare_sphere())]
    for name, sp in targets:
        d = sp.homology_order()
        for r in roots:
            if gcd(r, d) != 1:
                continue
            lhs, rhs = unified_sides(sp, r)
            out.add(f"{name} surgery series r={r}", lhs == rhs, "" if lhs == rhs else f"{lhs} != {rhs}")
            if name.startswith("L("):
                lhs2, rhs2 = lens_unified_sides(d, 1, r)
                out.add(f"{name} closed form r={r}", lhs2 == rhs2 == lhs)
    if 3 in roots:
        lhs, rhs = lens_unified_sides(2, 1, 3)
        out.add("hand cell L(2,1) r=3 both sides -1", lhs == -1 and rhs == -1)
    return out


# -- evaluation and series layer ---------------------------------------------------------------


def _series_links() -> list[FramedLink]:
    return [trefoil(), figure8(), whitehead(), borromean()]


def padic(order: int = 10) -> Battery:
    out = Battery("padic")
    cells = [("poincare sphere", IM_series(poincare_sphere(), order), 5, tau(poincare_sphere(), 5)),
             ("L(2,1)", IM_lens(2, 1), 3, lens_tau(2, 1, 3) * jacobi(2, 3))]
    for name, element, p, tgt in cells:
        vals = padic_convergence(ohtsuki_series(element, order), tgt, p)
        mono = all(a <= b for a, b in zip(vals, vals[1:]))
        out.add(f"{name} p={p}", mono and vals[-1] > vals[2], f"valuations {vals}")
    return out


def series(order: int = 6) -> Battery:
    out = Battery("series")
    for r in ROOTS:
        for k in range((r - 3) // 2 + 1, r + 2):
            out.add(f"vanishing r={r} k={k}", vanishing_eval_check(r, k))
    for link in _series_links():
        m = link.n_components
        top = 6 if m == 1 else 3 if m == 2 else 2
        exp = cyclotomic_coeffs(link, 2)
        for r in (5, 7):
            for colors in itertools.product(range(1, top + 1), repeat=m):
                direct = ev_root(colored_jones(link, colors), r)
                out.add(f"truncated {link.name} {colors} r={r}", truncated_eval(exp, colors, r) == direct)
    for name, element in [("L(2,1)", IM_lens(2, 1)), ("L(3,1)", IM_lens(3, 1)),
                          ("L(3,1) surgery", IM_series(lens_presentation(3), order)),
                          ("poincare sphere", IM_series(poincare_sphere(), order))]:
        try:
            element.taylor1(order)
            ohtsuki_series(element, order)
            out.add(f"coefficient rings {name}", True)
        except (RingError, IntegralityViolation) as exc:
            out.add(f"coefficient rings {name}", False, str(exc))
    out.cases.extend(padic().cases)
    return out


# -- evaluator anchors -----------------------------------------------------------------------------


def anchors() -> Battery:
    out = Battery("anchors")
    for n in range(1, 9):
        out.add(f"unknot n={n}", colored_jones(unknot(), [n]) == bracket(n))
    for K in (trefoil, figure8):
        for n in range(1, 5):
            base = colored_jones(K(0), [n])
            for f in (-2, -1, 1, 2):
                want = base.shift(Fraction(f * (n * n - 1), 4))
                out.add(f"framing {K.__name__} n={n} f={f}", colored_jones(K(f), [n]) == want)
    triples = [
        (FramedLink(2, (1, 1, 1)), FramedLink(2, (1,)), FramedLink(2, (1, 1))),
        (FramedLink(3, (1, -2, 1, -2)), FramedLink(3, (-1, -2, 1, -2)), FramedLink(3, (-2, 1, -2))),
        (FramedLink(2, (1, 1)), FramedLink(2, ()), FramedLink(2, (1,))),
    ]
    for i, (lp, lm, l0) in enumerate(triples):
        rep = jones_skein_check(lp, lm, l0)
        out.add(f"skein triple {i}", rep.ok, rep.detail)
    for n in range(1, 5):
        for m in range(1, 5):
            out.add(f"hopf ({n},{m})", colored_jones(hopf(), [n, m]) == bracket(n * m))
    for n in range(1, 5):
        out.add(f"delete color 1 hopf n={n}", colored_jones(hopf(), [n, 1]) == bracket(n))
        out.add(f"delete color 1 whitehead n={n}", colored_jones(whitehead(), [n, 1]) == bracket(n))
        for m in range(1, 4):
            out.add(f"delete color 1 borromean ({n},{m})",
                    colored_jones(borromean(), [n, m, 1]) == bracket(n) * bracket(m))
    for n in range(1, 5):
        J = colored_jones(trefoil(), [n])
        for s in (2, -2):
            stab = FramedLink(3, (1, 1, 1, s))
            out.add(f"markov trefoil n={n} stab={s}", colored_jones(stab, [n]) == J)
        J8 = colored_jones(figure8(), [n])
        out.add(f"markov figure8 n={n}", colored_jones(FramedLink(4, (1, -2, 1, -2, -3)), [n]) == J8)
    for link, top in ((whitehead(), 3), (borromean(), 2)):
        for colors in itertools.product(range(1, top + 1), repeat=link.n_components):
            out.add(f"half-power window {link.name} {colors}", halfpower_check(link, colors))
    return out


# -- registry ---------------------------------------------------------------------------------


CRITERIA = {
    1: ("tech identity, k <= 6, |b| <= 4", lambda: tech_identity(6, 4)),
    2: ("cyclotomic expansion divisibility", lambda: habiro(5, 3)),
    3: ("lens spaces: surgery sum vs closed form", lens),
    4: ("integrality of tau and of a colored invariant", integrality),
    5: ("unified invariant evaluates to tau", unified),
    6: ("Gauss sums, Laplace transform, color sums", gauss),
    7: ("vanishing, truncated expansion, series rings, p-adic convergence", series),
    8: ("colored Jones evaluator anchors", anchors),
}

BATTERIES = {
    "twist": twist,
    "gauss": gauss,
    "lens": lens,
    "habiro": habiro,
    "unified": unified,
    "padic": padic,
    "integrality": integrality,
    "series": series,
    "anchors": anchors,
}
