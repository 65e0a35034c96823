from __future__ import annotations

from hypothesis import given, settings, strategies as st

from hopflift.braided import (
    BraidingMatrix,
    TensorElem,
    braided_commutator,
    coproduct,
    coproduct_word,
    counit,
    is_primitive_mod,
    root_vector,
)
from hopflift.cyclotomic import make_root
from hopflift.freealg import CycField, NCPoly


@st.composite
def braidings(draw, theta=None):
    th = theta or draw(st.integers(1, 3))
    n = draw(st.integers(2, 12))
    exps = [[draw(st.integers(0, n - 1)) for _ in range(th)] for _ in range(th)]
    return BraidingMatrix(exps, n)


@st.composite
def braided_words(draw, max_len=5):
    B = draw(braidings())
    alphabet = "abc"[: B.theta]
    w = draw(st.text(alphabet=alphabet, min_size=0, max_size=max_len))
    return B, w


def _split_left(vec, B):
    out = {}
    for (a, b), c in vec.items():
        for (a1, a2), c2 in coproduct_word(a, B).items():
            k = (a1, a2, b)
            out[k] = out.get(k, 0) + c * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


def _split_right(vec, B):
    out = {}
    for (a, b), c in vec.items():
        for (b1, b2), c2 in coproduct_word(b, B).items():
            k = (a, b1, b2)
            out[k] = out.get(k, 0) + c * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


@settings(max_examples=80, deadline=None)
@given(braided_words())
def test_coassociative(bw):
    B, w = bw
    d = coproduct_word(w, B)
    assert _split_left(d, B) == _split_right(d, B)


@settings(max_examples=80, deadline=None)
@given(braided_words())
def test_counit(bw):
    B, w = bw
    p = NCPoly.word(w, B.field, B.theta)
    t = coproduct(p, B)
    assert counit(t, "left").terms == p.terms
    assert counit(t, "right").terms == p.terms


@settings(max_examples=60, deadline=None)
@given(braidings(), st.data())
def test_multiplicative(B, data):
    alphabet = "abc"[: B.theta]
    u = data.draw(st.text(alphabet=alphabet, max_size=3))
    v = data.draw(st.text(alphabet=alphabet, max_size=2))
    F = B.field
    lhs = coproduct(NCPoly.word(u + v, F, B.theta), B)
    rhs = coproduct(NCPoly.word(u, F, B.theta), B) * coproduct(NCPoly.word(v, F, B.theta), B)
    assert lhs == rhs


def test_power_of_a_letter_is_primitive_exactly_at_its_order():
    B = BraidingMatrix([[4, 1], [3, 6]], 12)  # q11 = z12^4 has order 3
    F = B.field
    x1 = NCPoly.gen(1, F, 2)
    assert is_primitive_mod(x1 ** 3, None, B)
    assert not is_primitive_mod(x1 ** 2, None, B)


def test_commutator_primitive_when_edge_is_trivial():
    # q12 q21 = 1: [x1, x2]_c is primitive in T(V)
    B = BraidingMatrix([[6, 5], [7, 4]], 12)
    F = B.field
    x1, x2 = NCPoly.gen(1, F, 2), NCPoly.gen(2, F, 2)
    assert is_primitive_mod(braided_commutator(x1, x2, B), None, B)
    B2 = BraidingMatrix([[6, 5], [6, 4]], 12)
    assert not is_primitive_mod(braided_commutator(x1, x2, B2), None, B2)


def test_root_vector_bracketing():
    B = BraidingMatrix([[4, 1], [0, 6]], 12)
    F = B.field
    x1, x2 = NCPoly.gen(1, F, 2), NCPoly.gen(2, F, 2)
    x12 = braided_commutator(x1, x2, B)
    assert root_vector("12", B).terms == x12.terms
    x112 = braided_commutator(x1, x12, B)
    assert root_vector("112", B).terms == x112.terms
    x122 = braided_commutator(x12, x2, B)
    assert root_vector("122", B).terms == x122.terms


def test_tensor_product_rule():
    B = BraidingMatrix([[0, 1], [0, 0]], 4)
    F = CycField(4)
    x1, x2 = NCPoly.gen(1, F, 2), NCPoly.gen(2, F, 2)
    one = NCPoly.const(1, F, 2)
    # (1 (x) x1)(x2 (x) 1) = chi(x1, x2) x2 (x) x1
    s = TensorElem.pure(one, x1, B) * TensorElem.pure(x2, one, B)
    assert s.terms == {("b", "a"): make_root(4, 1)}
