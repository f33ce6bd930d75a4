import itertools
from fractions import Fraction

import pytest

from so3inv.cyclonum import ev_root
from so3inv.jones import (
    LIBRARY,
    FramedLink,
    LinkError,
    borromean,
    colored_jones,
    colored_jones_at_root,
    figure8,
    halfpower_check,
    hopf,
    inertia,
    jones_skein_check,
    left_trefoil,
    trefoil,
    unknot,
    unlink,
    whitehead,
)
from so3inv.kernels import HAVE_NUMBA
from so3inv.qlaurent import ONE, ZERO, LaurentPoly, braced, bracket


# -- independent oracles -------------------------------------------------------------------


def kauffman_bracket(link: FramedLink) -> LaurentPoly:
    """State sum over smoothings of the braid closure, A = q^{1/4}, unknot = -A^2 - A^-2."""
    A = LaurentPoly.monomial(1, Fraction(1, 4))
    Ainv = LaurentPoly.monomial(1, Fraction(-1, 4))
    delta = -(LaurentPoly.monomial(1, Fraction(1, 2)) + LaurentPoly.monomial(1, Fraction(-1, 2)))
    w, word = link.width, link.word
    total = ZERO
    for states in itertools.product((0, 1), repeat=len(word)):
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        for lvl, (g, s) in enumerate(zip(word, states)):
            i = abs(g) - 1
            for j in range(w):
                if j not in (i, i + 1):
                    union((lvl, j), (lvl + 1, j))
            if (s == 0) == (g > 0):
                union((lvl, i), (lvl + 1, i))
                union((lvl, i + 1), (lvl + 1, i + 1))
            else:
                union((lvl, i), (lvl, i + 1))
                union((lvl + 1, i), (lvl + 1, i + 1))
        for j in range(w):
            union((len(word), j), (0, j))
        loops = len({find((lvl, j)) for lvl in range(len(word) + 1) for j in range(w)})
        term = ONE
        for s in states:
            term = term * (A if s == 0 else Ainv)
        total = total + term * delta ** (loops - 1)
    return total * delta


def bracket_oracle(link: FramedLink) -> LaurentPoly:
    writhe = sum(1 if g > 0 else -1 for g in link.word)
    b = kauffman_bracket(link)
    return b if (link.n_components + writhe) % 2 == 0 else -b


def cyclotomic_closed_form(n: int, twist: int | None) -> LaurentPoly:
    """Figure-eight (twist None) or trefoil sums  sum_k c_k prod_j {n+j}{n-j}, times [n]."""
    total = ZERO
    for k in range(n):
        if twist is None:
            term = ONE
        else:
            term = LaurentPoly.monomial((-1) ** k, Fraction(twist * k * (k + 3), 2))
        for j in range(1, k + 1):
            term = term * braced(n + j) * braced(n - j)
        total = total + term
    return total * bracket(n)


ORACLE_LINKS = [
    unknot(), trefoil(), left_trefoil(), figure8(), hopf(), whitehead(), borromean(),
    FramedLink(2, (1,)), FramedLink(2, (-1,)), FramedLink(3, (1, 1, 2, -1, 2, 2)),
    FramedLink(3, (1, 2, 1, 2)), FramedLink(4, (1, -2, 3, 1, -2, 3)),
]


@pytest.mark.parametrize("link", ORACLE_LINKS, ids=lambda L: f"{L.width}:{L.word}")
def test_color_two_matches_kauffman_bracket(link):
    J = colored_jones(link.with_blackboard_framing(), [2] * link.n_components)
    assert J == bracket_oracle(link)


@pytest.mark.parametrize("n", range(1, 8))
def test_figure_eight_closed_form(n):
    assert colored_jones(figure8(), [n]) == cyclotomic_closed_form(n, None)


@pytest.mark.parametrize("n", range(1, 8))
def test_trefoil_closed_forms_and_chirality(n):
    assert colored_jones(left_trefoil(), [n]) == cyclotomic_closed_form(n, 1)
    assert colored_jones(trefoil(), [n]) == cyclotomic_closed_form(n, -1)


def test_frozen_values():
    # color 3 of the figure-eight, written out
    J = colored_jones(figure8(), [3])
    assert J == bracket(3) * (1 + braced(4) * braced(2) + braced(4) * braced(2) * braced(5) * braced(1))


# -- anchors --------------------------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 9))
def test_unknot_is_quantum_integer(n):
    assert colored_jones(unknot(), [n]) == bracket(n)
    assert colored_jones(unlink(2), [n, 2]) == bracket(n) * bracket(2)


@pytest.mark.parametrize("n,m", list(itertools.product(range(1, 5), repeat=2)))
def test_hopf_link(n, m):
    assert colored_jones(hopf(), [n, m]) == bracket(n * m)


@pytest.mark.parametrize("knot", [trefoil, figure8, left_trefoil])
def test_framing_changes_by_monomial(knot):
    for n in range(1, 5):
        base = colored_jones(knot(0), [n])
        for f in (-2, -1, 1, 3):
            assert colored_jones(knot(f), [n]) == base.shift(Fraction(f * (n * n - 1), 4))


def test_color_one_deletes_component():
    for n in range(1, 5):
        assert colored_jones(whitehead(), [1, n]) == bracket(n)
        assert colored_jones(borromean(), [n, 1, 2]) == bracket(n) * bracket(2)


@pytest.mark.parametrize("n", range(1, 5))
def test_markov_stabilization(n):
    J = colored_jones(trefoil(), [n])
    assert colored_jones(FramedLink(3, (1, 1, 1, 2)), [n]) == J
    assert colored_jones(FramedLink(3, (1, 1, 1, -2)), [n]) == J
    # conjugating by sigma_2
    assert colored_jones(FramedLink(3, (2, 1, 1, 1, 2, -2)), [n]) == J


def test_markov_conjugation():
    a = colored_jones(FramedLink(3, (1, -2, 1, -2)), [3])
    b = colored_jones(FramedLink(3, (-2, 1, -2, 1)), [3])
    assert a == b


def test_skein_relation():
    assert jones_skein_check(FramedLink(2, (1, 1, 1)), FramedLink(2, (1,)), FramedLink(2, (1, 1)))
    assert jones_skein_check(FramedLink(3, (1, -2, 1, -2)), FramedLink(3, (-1, -2, 1, -2)),
                             FramedLink(3, (-2, 1, -2)))


def test_skein_checker_rejects_wrong_values():
    rep = jones_skein_check(trefoil(), unknot(), hopf(), values=[bracket(2), bracket(2), bracket(2)])
    assert not rep.ok and rep.detail


def test_half_power_window():
    for colors in itertools.product(range(1, 4), repeat=2):
        assert halfpower_check(whitehead(), colors)
    assert not halfpower_check(whitehead(), (2, 2), value=LaurentPoly.monomial(1, Fraction(1, 4)))
    with pytest.raises(LinkError):
        halfpower_check(hopf(), (2, 2))


# -- link data --------------------------------------------------------------------------------


def test_components_and_linking():
    assert whitehead().n_components == 2
    assert whitehead().is_algebraically_split()
    assert hopf((2, 0)).linking_matrix() == [[2, 1], [1, 0]]
    assert borromean().linking_matrix() == [[0] * 3] * 3
    assert trefoil().blackboard_framings() == (3,)


def test_inertia_is_exact():
    assert inertia([[2, 1], [1, 0]]) == (1, 1)
    assert inertia([[1, 0], [0, -3]]) == (1, 1)
    assert inertia([[0, 0], [0, 0]]) == (0, 0)
    assert inertia([[2, 1], [1, 2]]) == (2, 0)


def test_mirror_conjugates():
    for n in range(1, 5):
        assert colored_jones(trefoil(2).mirror(), [n]) == colored_jones(trefoil(2), [n]).bar()


@pytest.mark.parametrize("name", sorted(LIBRARY))
def test_json_round_trip(name):
    link = LIBRARY[name]()
    assert FramedLink.from_json(link.to_json()) == link


def test_bad_links_are_rejected():
    with pytest.raises(LinkError):
        FramedLink(2, (3,))
    with pytest.raises(LinkError):
        FramedLink(2, (1, 1), (0,))
    with pytest.raises(LinkError):
        colored_jones(trefoil(), [0])
    with pytest.raises(LinkError):
        FramedLink.from_json({"word": [1]})


# -- evaluated path ------------------------------------------------------------------------------

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
EVAL_CASES = [(unknot(3), (5,)), (trefoil(-1), (4,)), (figure8(1), (7,)), (hopf((1, 2)), (3, 5)),
              (whitehead((1, -1)), (3, 4)), (borromean(), (2, 3, 2))]


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("r", [3, 5, 7, 9])
@pytest.mark.parametrize("link,colors", EVAL_CASES, ids=lambda x: str(x) if isinstance(x, tuple) else x.name)
def test_evaluated_path_matches_exact(link, colors, r, backend):
    assert colored_jones_at_root(link, colors, r, backend) == ev_root(colored_jones(link, colors), r)
