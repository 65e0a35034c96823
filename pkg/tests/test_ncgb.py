from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from hopflift import catalog
from hopflift.cyclotomic import make_root
from hopflift.freealg import CycField, NCPoly, leading_word
from hopflift.ncgb import UNKNOWN, NonFlatError, buchberger


def _gens(n=4):
    F = CycField(n)
    x1, x2 = NCPoly.gen(1, F, 2), NCPoly.gen(2, F, 2)
    return F, x1, x2


def quantum_plane():
    F, x1, x2 = _gens()
    q = make_root(4, 1)
    return buchberger([x1 * x1, x2 * x2, x1 * x2 - (x2 * x1).scale(q)], bound=6), F


def test_quantum_plane():
    G, _F = quantum_plane()
    assert G.complete
    assert G.dimension() == 4
    assert G.normal_words() == ["", "a", "b", "ab"]
    assert G.hilbert() == [1, 2, 1]


def test_quantum_plane_reversed_precedence():
    F, x1, x2 = _gens()
    q = make_root(4, 1)
    G = buchberger([x1 * x1, x2 * x2, x1 * x2 - (x2 * x1).scale(q)], bound=6, order="21")
    assert G.dimension() == 4
    assert sorted(G.normal_words()) == ["", "a", "b", "ba"]


def test_single_skew_commutation_has_no_self_overlap():
    F, x1, x2 = _gens()
    q = make_root(4, 1)
    g = x1 * x2 - (x2 * x1).scale(q)
    G = buchberger([g], bound=6)
    assert len(G.basis()) == 1
    assert not G.complete
    assert G.dimension() == UNKNOWN


def test_incomplete_at_small_bound():
    F, x1, x2 = _gens()
    G = buchberger([x1 ** 3, x2 ** 3, x1 * x2 * x1 - x2 * x1 * x2], bound=4)
    assert not G.complete


def test_ufo7a_nichols_dimension_frozen():
    case = catalog.load("ufo7a")
    R = case.realization
    G = buchberger([r.expr for r in case.relations], ring=CycField(R.n), theta=2, braiding=R.braiding)
    assert G.complete
    assert G.dimension() == 144
    h = G.hilbert()
    assert h == h[::-1]


def test_non_flat_deformation_detected():
    F, x1, x2 = _gens()
    # x1^2 = 1 and x1^2 = x1 collapse degree
    with pytest.raises(NonFlatError):
        buchberger([x1 * x1 - 1, x1 * x1 - x1 - x2], allow_restart=False)


# ---------------------------------------------------------------- properties


def _random_reduce(p: NCPoly, G, rng: random.Random) -> NCPoly:
    """Reduce with a random choice of term and occurrence at every step."""
    basis = []
    for g in G.basis():
        lw = leading_word(g, G.order)
        basis.append((lw, g.scale(g.terms[lw].inv())))
    while True:
        options = []
        for w in p.terms:
            for lw, g in basis:
                start = w.find(lw)
                while start != -1:
                    options.append((w, start, lw, g))
                    start = w.find(lw, start + 1)
        if not options:
            return p
        w, i, lw, g = rng.choice(options)
        F = p.ring
        left = NCPoly.word(w[:i], F, p.theta)
        right = NCPoly.word(w[i + len(lw):], F, p.theta)
        p = p - (left * g * right).scale(p.terms[w])


@st.composite
def polys(draw, max_len=6):
    F = CycField(4)
    terms = {}
    for _ in range(draw(st.integers(1, 4))):
        w = draw(st.text(alphabet="ab", max_size=max_len))
        terms[w] = F.scalar(draw(st.integers(-3, 3))) * make_root(4, draw(st.integers(0, 3)))
    return NCPoly(terms, F, 2)


_QP = quantum_plane()[0]


def _b2_basis():
    # nilpotent algebra with overlaps of several lengths
    F, x1, x2 = _gens()
    return buchberger([x1 ** 3, x2 ** 2, x1 * x2 * x1 - x2 * x1 * x1 - x1 * x1 * x2], cap=12)


_B2 = _b2_basis()


@settings(max_examples=60, deadline=None)
@given(polys(), st.integers(0, 10 ** 6))
def test_church_rosser(p, seed):
    for G in (_QP, _B2):
        nf = G.normal_form(p)
        assert _random_reduce(p, G, random.Random(seed)).terms == nf.terms
        assert _random_reduce(p, G, random.Random(seed + 1)).terms == nf.terms


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="ab", max_size=4), st.text(alphabet="ab", max_size=4), st.integers(0, 2))
def test_ideal_membership(s, t, k):
    for G in (_QP, _B2):
        gens = [g for g in G.generators]
        g = gens[k % len(gens)]
        F = g.ring
        m = NCPoly.word(s, F, 2) * g * NCPoly.word(t, F, 2)
        assert G.normal_form(m).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_normal_form_is_linear(p, q):
    G = _B2
    assert G.normal_form(p + q).terms == (G.normal_form(p) + G.normal_form(q)).terms


def test_basis_is_reduced():
    for G in (_QP, _B2):
        leads = [leading_word(g, G.order) for g in G.basis()]
        for g in G.basis():
            lw = leading_word(g, G.order)
            assert g.terms[lw] == g.ring.one
            for w in g.terms:
                for other in leads:
                    if w == lw and other == lw:
                        continue
                    assert other not in w
