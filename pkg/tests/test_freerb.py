from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture
from oracles import PolyMatrixRB
from rbx.dendriform import DendriformAlgebra
from rbx.freerb import (
    Bracket,
    DepthCapExceeded,
    FreeRBElement,
    FreeRotaBaxter,
    StructureAlgebra,
    TensorAlgebra,
    WordError,
    enumerate_words,
    enveloping_relations,
    evaluate_in,
    format_element,
    rb_apply,
    validate_word,
    word_involution,
    word_product,
    word_stats,
)
from rbx.linalg import zeros
from rbx.rota_baxter import induced_dendriform
from rbx.wordparse import ParseError, parse_expression, parse_word

SWAP = TensorAlgebra({"a": {"b": 1}, "b": {"a": 1}})


def W(text, fr=None):
    return parse_expression(text, fr)


def g(*symbols):
    return tuple(symbols)


# words and statistics -------------------------------------------------------------

def test_word_stats_examples():
    assert word_stats(parse_word("a")) == (1, 0, 0, 0)
    assert word_stats(parse_word("a[b]c")) == (3, 0, 0, 1)
    assert word_stats(parse_word("[a[b]]")) == (1, 1, 1, 2)
    assert word_stats(parse_word("[a]b[c]")) == (3, 1, 1, 1)


def test_parse_word_structure():
    assert parse_word("a[b]c") == (g("a"), Bracket((g("b"),)), g("c"))


def test_alternation_enforced():
    with pytest.raises(WordError):
        validate_word((Bracket((g("a"),)), Bracket((g("b"),))))
    with pytest.raises(WordError):
        validate_word((g("a"), g("b")))
    with pytest.raises(WordError):
        validate_word(())
    with pytest.raises(WordError):
        FreeRBElement.word(Bracket((g("a"),)), Bracket((g("a"),)))


def test_enumeration_counts():
    words = enumerate_words("ab", 2, 3)
    assert len(words) == len(set(words)) == 1822
    for w in words:
        validate_word(w)
        breadth, _, _, d = word_stats(w)
        assert breadth <= 3 and d <= 2
    assert len(enumerate_words("ab", 0, 3)) == 2
    # depth <= 1: a, b, [a], [b], then breadth 2 and 3 alternations
    assert len(enumerate_words("a", 1, 2)) == 1 + 1 + 2


# the product -------------------------------------------------------------------

def test_concatenation_cases():
    assert word_product(W("a"), W("[b]")) == W("a[b]")
    assert word_product(W("[a]"), W("b")) == W("[a]b")


def test_bracket_case_verbatim():
    out = word_product(W("[a]"), W("[b]"))
    assert out == FreeRBElement({parse_word("[[a]b]"): 1, parse_word("[a[b]]"): 1})
    assert str(out) == "[[a]b] + [a[b]]"
    assert str(W("[a] . [b]")) == "[[a]b] + [a[b]]"


def test_tensor_generators_concatenate():
    out = word_product(W("v"), W("w"))
    assert out == FreeRBElement({(g("v", "w"),): 1})
    assert str(out) == "v w"
    assert word_product(W("u[a]v"), W("w")) == FreeRBElement({(g("u"), Bracket((g("a"),)), g("v", "w")): 1})


def test_structure_algebra_base():
    fx = fixture("dual_numbers")
    base = StructureAlgebra(["one", "eps"], fx.algebra.mul, fx.algebra.inv)
    fr = FreeRotaBaxter(base)
    assert fr.product(W("eps", fr), W("eps", fr)) == 0
    assert fr.product(W("one", fr), W("eps", fr)) == W("eps", fr)
    with pytest.raises(ParseError):
        W("one eps", fr)
    with pytest.raises(ParseError):
        W("zeta", fr)


def test_depth_cap_raises_with_pair():
    fr = FreeRotaBaxter(depth_cap=2)
    x, y = W("[[a]]"), W("[b]")
    with pytest.raises(DepthCapExceeded) as err:
        fr.product(x, y)
    assert err.value.left == parse_word("[[a]]")
    assert err.value.right == parse_word("[b]")
    assert err.value.cap == 2 and err.value.depth > 2
    with pytest.raises(DepthCapExceeded):
        FreeRotaBaxter(depth_cap=1).rb(W("[a]"))


def test_rb_apply():
    assert rb_apply(W("a")) == W("[a]")
    assert rb_apply(FreeRBElement()) == 0
    assert rb_apply(W("2*a - b")) == W("2*[a] - [b]")


def test_rb_identity_small_instance():
    fr = FreeRotaBaxter()
    a, b = W("a"), W("b")
    lhs = fr.product(fr.rb(a), fr.rb(b))
    rhs = fr.rb(fr.product(a, fr.rb(b)) + fr.product(fr.rb(a), b))
    assert lhs == rhs == W("[a[b]] + [[a]b]")


# involution ----------------------------------------------------------------------

def test_involution_examples():
    fr = FreeRotaBaxter(SWAP)
    assert fr.star(W("a[b]", fr)) == W("[a]b", fr)
    assert word_involution(W("a[b]")) == W("[b]a")
    assert fr.star(fr.star(W("[a]", fr))) == W("[a]", fr)
    assert fr.star(W("a b c", fr)) == W("c a b", fr)
    assert word_involution(W("a b c")) == W("c b a")
    assert W("[a]^*", fr) == W("[b]", fr)


def test_involution_with_coefficients():
    fr = FreeRotaBaxter(TensorAlgebra({"a": {"a": -1}}))
    # a* = -a: [(a b)*] a* = [b (-a)](-a)
    assert fr.star(W("a[a b]", fr)) == W("[b a]a", fr)
    assert fr.star(W("a[b]", fr)) == W("-[b]a", fr)


# exhaustive and randomised identities ---------------------------------------------------

def generator_count(word) -> int:
    return sum(len(l) if isinstance(l, tuple) else generator_count(l.word) for l in word)


WORDS = enumerate_words("ab", 2, 3)
SMALL = [w for w in WORDS if generator_count(w) <= 2]
MEDIUM = [w for w in WORDS if generator_count(w) <= 3]


def test_exhaustive_subset_sizes():
    assert len(SMALL) == 30 and len(MEDIUM) == 126


def test_associativity_on_small_words():
    fr = FreeRotaBaxter(SWAP, depth_cap=6)
    elems = [FreeRBElement({w: 1}) for w in SMALL]
    for x, y in itertools.product(elems, repeat=2):
        xy = fr.product(x, y)
        for z in elems:
            assert fr.product(xy, z) == fr.product(x, fr.product(y, z))


def test_rb_identity_and_anti_automorphism_on_medium_words():
    fr = FreeRotaBaxter(SWAP, depth_cap=6)
    elems = [FreeRBElement({w: 1}) for w in MEDIUM]
    stars = [fr.star(x) for x in elems]
    for (x, xs), (y, ys) in itertools.product(zip(elems, stars), repeat=2):
        Rx, Ry = fr.rb(x), fr.rb(y)
        assert fr.product(Rx, Ry) == fr.rb(fr.product(x, Ry) + fr.product(Rx, y))
        assert fr.star(fr.product(x, y)) == fr.product(ys, xs)
    for x, xs in zip(elems, stars):
        assert fr.star(xs) == x
        assert fr.rb(xs) == fr.star(fr.rb(x))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(WORDS), st.sampled_from(WORDS), st.sampled_from(WORDS))
def test_associativity_random_full_set(x, y, z):
    fr = FreeRotaBaxter(SWAP, depth_cap=12)
    x, y, z = (FreeRBElement({w: 1}) for w in (x, y, z))
    assert fr.product(fr.product(x, y), z) == fr.product(x, fr.product(y, z))


def homomorphism_setup(seed):
    target = PolyMatrixRB(6)
    rng = random.Random(seed)
    A = np.array([Fraction(rng.randint(-2, 2)) for _ in range(target.dim)], dtype=object)
    return target, target.operator_matrix(), {"a": A, "b": target.transpose(A)}


def test_evaluation_is_a_morphism():
    target, R, assign = homomorphism_setup(1)
    fr = FreeRotaBaxter(SWAP, depth_cap=8)
    rng = random.Random(2)
    sample = rng.sample(MEDIUM, 40)
    for wx, wy in zip(sample, reversed(sample)):
        x, y = FreeRBElement({wx: 1}), FreeRBElement({wy: 1})
        ex = evaluate_in(fr, x, target, R, assign)
        ey = evaluate_in(fr, y, target, R, assign)
        assert np.all(evaluate_in(fr, fr.product(x, y), target, R, assign) == target.product(ex, ey))
        assert np.all(evaluate_in(fr, fr.rb(x), target, R, assign) == R.dot(ex))
        assert np.all(evaluate_in(fr, fr.star(x), target, R, assign) == target.transpose(ex))


def test_target_algebra_is_rota_baxter():
    target, R, _ = homomorphism_setup(3)
    rng = random.Random(4)
    for _ in range(5):
        u = np.array([Fraction(rng.randint(-3, 3)) for _ in range(target.dim)], dtype=object)
        v = np.array([Fraction(rng.randint(-3, 3)) for _ in range(target.dim)], dtype=object)
        lhs = target.product(R.dot(u), R.dot(v))
        rhs = R.dot(target.product(u, R.dot(v)) + target.product(R.dot(u), v))
        assert np.all(lhs == rhs)
        assert np.all(target.transpose(target.product(u, v)) == target.product(target.transpose(v), target.transpose(u)))


# parsing and printing ------------------------------------------------------------------

def test_parse_coefficients():
    x = W("2/3*[a] + b")
    assert x == FreeRBElement({parse_word("[a]"): Fraction(2, 3), parse_word("b"): 1})
    assert str(x) == "2/3*[a] + b"
    assert W("-a + 0") == -W("a")
    assert W("a - a") == 0 and str(W("a - a")) == "0"


@pytest.mark.parametrize(
    "text",
    ["[a][b]", "a +", "[a", "a]", "2 a", "1/0*a", "a & b", "", "3*"],
)
def test_parse_errors(text):
    with pytest.raises((ParseError, WordError)):
        W(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        W("a[b][c]")
    assert err.value.position == 4


def test_tensor_mode_merges_adjacent_generators():
    assert W("a b") == FreeRBElement({(g("a", "b"),): 1})
    assert W("a b[c]") == FreeRBElement({(g("a", "b"), Bracket((g("c"),))): 1})


@st.composite
def elements(draw):
    words = draw(st.lists(st.sampled_from(MEDIUM), min_size=0, max_size=4))
    coeffs = draw(
        st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=5), min_size=len(words), max_size=len(words))
    )
    return FreeRBElement(list(zip(words, coeffs)))


@settings(max_examples=80, deadline=None)
@given(elements())
def test_print_parse_round_trip(x):
    assert W(str(x)) == x


def test_tensor_word_round_trip():
    x = W("3*a b[c a] - 1/2*[b]a a")
    assert W(str(x)) == x


# enveloping relations -----------------------------------------------------------------------

def test_relations_zero_products():
    d = DendriformAlgebra(2, zeros((2, 2, 2)), zeros((2, 2, 2)), names=("x", "y"))
    rel = enveloping_relations(d)
    expected = []
    for p, q in itertools.product("xy", repeat=2):
        expected.append(-FreeRBElement({((p,), Bracket(((q,),))): 1}))
        expected.append(-FreeRBElement({(Bracket(((p,),)), (q,)): 1}))
    assert rel.generators == expected
    assert rel.involution_images == [] and rel.stable


def test_relations_dual_numbers():
    fx = fixture("dual_numbers")
    d = induced_dendriform(fx.algebra, fx.bimodule, fx.op.matrix)
    rel = enveloping_relations(d)
    first = rel.generators[0]
    assert rel.labels[0] == "1<1 - 1[1]"
    assert first == FreeRBElement({(("eps",),): 1, (("1",), Bracket((("1",),))): -1})
    assert rel.stable


@pytest.mark.parametrize("name", ["dual_numbers", "upper_triangular", "zero_product"])
def test_relation_images_match_generators(name):
    fx = fixture(name)
    d = induced_dendriform(fx.algebra, fx.bimodule, fx.op.matrix)
    rel = enveloping_relations(d)
    assert rel.stable
    n = d.dim
    # the involution permutes basis vectors on every fixture, so (x<y - x[y])* is
    # exactly the generator y*>x* - [y*]x*
    perm = {i: next(k for k in range(n) if d.inv[k, i] != 0) for i in range(n)}
    assert all(d.inv[perm[i], i] == 1 for i in range(n))
    for i, j in itertools.product(range(n), repeat=2):
        prec_idx = 2 * (i * n + j)
        succ_idx = 2 * (perm[j] * n + perm[i]) + 1
        assert rel.involution_images[prec_idx] == rel.generators[succ_idx]
        assert rel.certificates[prec_idx] == {succ_idx: 1}
        # and (x>y - [x]y)* = y*<x* - y*[x*]
        back = 2 * (perm[j] * n + perm[i])
        assert rel.involution_images[prec_idx + 1] == rel.generators[back]


def test_relations_without_involution_skip_certificates():
    d = DendriformAlgebra(1, zeros((1, 1, 1)), zeros((1, 1, 1)))
    rel = enveloping_relations(d)
    assert len(rel.generators) == 2 and rel.certificates == []


def test_format_element_order_is_stable():
    x = W("b + [a] - 2*a[b]")
    assert format_element(x) == "[a] - 2*a[b] + b"
    assert str(W(format_element(x))) == format_element(x)
