from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import fixture, random_array
from rbx.algebra import InvolutiveAlgebra, ShapeError, regular_bimodule
from rbx.cochains import s_action, sign
from rbx.hochschild import (
    eigen_basis,
    gerstenhaber_bracket,
    hochschild_cohomology,
    hochschild_differential,
    involutive_basis,
    is_involutive,
    split_cochain,
)
from rbx.io import FIXTURES
from rbx.linalg import identity, zeros


def as_array(x):
    return np.asarray(x, dtype=object)


def random_cochain(rng, n, d, e):
    return random_array(rng, (d,) * n + (e,))


def all_zero(x):
    return bool(np.all(as_array(x) == 0))


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_differential_matches_loop_oracle(fx, n):
    a, m = fx.algebra, fx.bimodule
    rng = random.Random(100 + n)
    for _ in range(3):
        f = random_cochain(rng, n, a.dim, m.dim)
        got = hochschild_differential(a, m, f)
        want = oracles.hochschild_differential(a.mul, m.left, m.right, f, a.dim, m.dim)
        assert np.all(got == want)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_differential_squares_to_zero(fx, n):
    a, m = fx.algebra, fx.bimodule
    rng = random.Random(n)
    for _ in range(3):
        f = random_cochain(rng, n, a.dim, m.dim)
        assert all_zero(hochschild_differential(a, m, hochschild_differential(a, m, f)))


def test_degree_zero_is_commutator(dual):
    a, m = dual.algebra, dual.bimodule
    u = as_array([Fraction(2), Fraction(-1)])
    df = hochschild_differential(a, m, u)
    for i in range(a.dim):
        x = a.basis(i)
        assert np.all(df[i] == m.act_left(x, u) - m.act_right(u, x))
    # commutative algebra: everything is central
    assert all_zero(df)


def test_zero_cochain_and_central_element():
    a = fixture("upper_triangular").algebra
    m = regular_bimodule(a)
    assert all_zero(hochschild_differential(a, m, zeros((3, 3, 3))))
    unit = as_array([1, 0, 1])  # E11 + E22
    assert all_zero(hochschild_differential(a, m, unit))
    assert not all_zero(hochschild_differential(a, m, as_array([1, 0, 0])))


def test_differential_rejects_wrong_shape(dual):
    with pytest.raises(ShapeError):
        hochschild_differential(dual.algebra, dual.bimodule, zeros((3, 2)))


# Gerstenhaber bracket ---------------------------------------------------------

def oracle_bracket(f, g, dim):
    m, n = f.ndim - 1, g.ndim - 1
    out = None
    for i in range(1, m + 1):
        t = sign((i - 1) * (n - 1)) * oracles.compose(f, i, g, dim)
        out = t if out is None else out + t
    for i in range(1, n + 1):
        t = -sign((m - 1) * (n - 1)) * sign((i - 1) * (m - 1)) * oracles.compose(g, i, f, dim)
        out = t if out is None else out + t
    return out


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (0, 2), (2, 0)])
def test_bracket_matches_composition_oracle(m, n):
    rng = random.Random(10 * m + n)
    d = 2
    f, g = random_cochain(rng, m, d, d), random_cochain(rng, n, d, d)
    assert np.all(gerstenhaber_bracket(f, g) == oracle_bracket(f, g, d))


def test_bracket_degree_one_is_commutator():
    rng = random.Random(3)
    f, g = random_cochain(rng, 1, 3, 3), random_cochain(rng, 1, 3, 3)
    # cochain c[p, k] is the transpose of the matrix of the map
    F, G = f.T, g.T
    assert np.all(gerstenhaber_bracket(f, g).T == F.dot(G) - G.dot(F))


def test_bracket_of_identity_vanishes():
    assert all_zero(gerstenhaber_bracket(identity(3), identity(3)))


def test_bracket_of_product_with_itself_vanishes_iff_associative(fx):
    mu = fx.algebra.mul
    assert all_zero(gerstenhaber_bracket(mu, mu))
    d = fx.algebra.dim
    for slot in [(0, 0, 0), (0, 1, 0), (d - 1, 0, d - 1)]:
        bad = mu.copy()
        bad[slot] = bad[slot] + 1
        e = [oracles.basis_vec(d, i) for i in range(d)]
        associative = all(
            oracles.bilinear(bad, oracles.bilinear(bad, x, y, d), z, d)
            == oracles.bilinear(bad, x, oracles.bilinear(bad, y, z, d), d)
            for x in e
            for y in e
            for z in e
        )
        assert all_zero(gerstenhaber_bracket(bad, bad)) == associative


def test_bracket_shape_errors():
    with pytest.raises(ShapeError):
        gerstenhaber_bracket(zeros((2, 3)), zeros((3, 3)))
    with pytest.raises(ShapeError):
        gerstenhaber_bracket(zeros(2), zeros(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(0, 10**6))
def test_graded_antisymmetry(m, n, seed):
    rng = random.Random(seed)
    f, g = random_cochain(rng, m, 2, 2), random_cochain(rng, n, 2, 2)
    assert np.all(gerstenhaber_bracket(f, g) == -sign((m - 1) * (n - 1)) * gerstenhaber_bracket(g, f))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2), st.integers(0, 10**6))
def test_graded_jacobi(m, n, p, seed):
    rng = random.Random(seed)
    f, g, h = (random_cochain(rng, k, 2, 2) for k in (m, n, p))
    b = gerstenhaber_bracket
    total = (
        sign((m - 1) * (p - 1)) * b(f, b(g, h))
        + sign((n - 1) * (m - 1)) * b(g, b(h, f))
        + sign((p - 1) * (n - 1)) * b(h, b(f, g))
    )
    assert all_zero(total)


@pytest.mark.parametrize("name", FIXTURES)
def test_bracket_closure_on_involutive_cochains(name):
    a = fixture(name).algebra
    rng = random.Random(name)
    bases = {n: involutive_basis(n, a.inv, a.inv) for n in (1, 2, 3)}

    def random_involutive(n):
        out = zeros((a.dim,) * n + (a.dim,))
        for b in bases[n]:
            out = out + rng.randint(-2, 2) * b
        return out

    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]:
        for _ in range(3):
            f, g = random_involutive(m), random_involutive(n)
            assert is_involutive(f, a.inv, a.inv) and is_involutive(g, a.inv, a.inv)
            assert is_involutive(gerstenhaber_bracket(f, g), a.inv, a.inv)


# involution S and splitting -------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_s_action_matches_oracle_and_is_an_involution(fx, n):
    a, m = fx.algebra, fx.bimodule
    rng = random.Random(n)
    f = random_cochain(rng, n, a.dim, m.dim)
    sf = s_action(f, a.inv, m.inv)
    assert np.all(sf == oracles.s_action(f, a.inv.tolist(), m.inv.tolist()))
    assert np.all(s_action(sf, a.inv, m.inv) == f)


def test_s_action_degree_zero_and_one():
    a = fixture("zero_product").algebra  # swap involution
    v = as_array([Fraction(1), Fraction(3)])
    assert list(s_action(v, a.inv, a.inv)) == [-3, -1]
    f = as_array([[1, 2], [0, 5]])  # f(x) = x + 2y, f(y) = 5y
    sf = s_action(f, a.inv, a.inv)
    # (S1 f)(x) = f(y)^* = 5x, (S1 f)(y) = f(x)^* = 2x + y
    assert sf.tolist() == [[5, 0], [2, 1]]


def test_fixed_point_in_degree_one():
    a = fixture("zero_product").algebra
    f = as_array([[1, 2], [2, 1]])  # commutes with the swap
    assert is_involutive(f, a.inv, a.inv)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_split_recomposes(fx, n):
    a, m = fx.algebra, fx.bimodule
    f = random_cochain(random.Random(n), n, a.dim, m.dim)
    plus, minus = split_cochain(f, a.inv, m.inv)
    assert np.all(plus + minus == f)
    assert np.all(s_action(plus, a.inv, m.inv) == plus)
    assert np.all(s_action(minus, a.inv, m.inv) == -minus)
    assert is_involutive(plus, a.inv, m.inv)
    p2, m2 = split_cochain(plus, a.inv, m.inv)
    assert np.all(p2 == plus) and all_zero(m2)
    p3, m3 = split_cochain(minus, a.inv, m.inv)
    assert all_zero(p3) and np.all(m3 == minus)


def test_zero_cochain_is_involutive(fx):
    a, m = fx.algebra, fx.bimodule
    assert is_involutive(zeros((a.dim, a.dim, m.dim)), a.inv, m.inv)


def test_product_is_involutive(fx):
    assert is_involutive(fx.algebra.mul, fx.algebra.inv, fx.algebra.inv)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_basis_counts_trivial_involution(d):
    ident = identity(d)
    assert involutive_basis(0, ident, ident) == []
    assert len(involutive_basis(1, ident, ident)) == d * d
    assert len(involutive_basis(2, ident, ident)) == d * d * (d + 1) // 2
    assert len(eigen_basis(1, ident, ident, -1)) == 0


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_eigenspace_dims_match_projector_rank(fx, n):
    a, m = fx.algebra, fx.bimodule
    s = oracles.s_matrix(n, a.inv.tolist(), m.inv.tolist())
    size = len(s)
    for sgn in (1, -1):
        proj = [[Fraction((i == j) + sgn * s[i][j], 2) for j in range(size)] for i in range(size)]
        assert len(eigen_basis(n, a.inv, m.inv, sgn)) == oracles.bareiss_rank(proj)


# cohomology --------------------------------------------------------------------

def hochschild_oracle(a, m, max_degree):
    diffs, s_mats, sizes = {}, {}, {}
    for n in range(max_degree + 2):
        shape = (a.dim,) * n + (m.dim,)
        sizes[n] = a.dim**n * m.dim
        s_mats[n] = oracles.s_matrix(n, a.inv.tolist(), m.inv.tolist())
        if n <= max_degree:
            diffs[n] = oracles.matrix_of(
                lambda f: oracles.hochschild_differential(a.mul, m.left, m.right, f, a.dim, m.dim),
                shape,
                a.dim ** (n + 1) * m.dim,
            )
    return {
        "ordinary": oracles.full_cohomology(diffs, sizes),
        "involutive": oracles.projected_cohomology(diffs, s_mats, 1),
        "skew": oracles.projected_cohomology(diffs, s_mats, -1),
    }


@pytest.mark.parametrize("name", FIXTURES)
def test_cohomology_matches_rank_oracle_and_splits(name):
    fx = fixture(name)
    expected = hochschild_oracle(fx.algebra, fx.bimodule, 3)
    got = {v: hochschild_cohomology(fx.algebra, fx.bimodule, 3, v).dims() for v in ("ordinary", "involutive", "skew")}
    for v in got:
        assert got[v] == {n: expected[v][n] for n in range(4)}
    for n in range(4):
        assert got["ordinary"][n] == got["involutive"][n] + got["skew"][n]


def test_dual_numbers_center():
    fx = fixture("dual_numbers")
    report = hochschild_cohomology(fx.algebra, fx.bimodule, 1)
    assert report[0].cohomology == 2
    # sigma = id: the skew part of degree 1 is zero
    assert hochschild_cohomology(fx.algebra, fx.bimodule, 1, "skew")[1].cochains == 0


def test_report_invariants_and_representatives(fx):
    report = hochschild_cohomology(fx.algebra, fx.bimodule, 2)
    for deg in report.degrees:
        assert deg.cohomology == len(deg.representatives) >= 0
        for z in deg.representatives:
            assert all_zero(hochschild_differential(fx.algebra, fx.bimodule, z))
            coords = deg.class_coordinates(z)
            assert sum(1 for c in coords if c != 0) == 1


def test_unknown_variant(dual):
    with pytest.raises(ValueError):
        hochschild_cohomology(dual.algebra, dual.bimodule, 1, "bogus")


def test_noncommuting_involution_detected():
    # the identity is not an anti-automorphism of a noncommutative algebra,
    # so the eigenspaces are not subcomplexes
    from rbx.complexes import ComplexError

    a = fixture("upper_triangular").algebra
    broken = InvolutiveAlgebra(3, a.mul, identity(3), a.names)
    m = regular_bimodule(broken)
    with pytest.raises(ComplexError):
        hochschild_cohomology(broken, m, 2, "involutive")
