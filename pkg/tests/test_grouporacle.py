"""Exact free-group convolution oracle and its measured norm ratios."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qrd.fusion import FamilyError
from qrd.grouporacle import (
    FreeGroupModel,
    haagerup_check,
    measured_rd_constant,
    word_inv,
)


@pytest.fixture(scope="module")
def model():
    return FreeGroupModel(2, radius=6)


def random_kernel(rng, words, density=0.5):
    out = {}
    for w in words:
        if rng.random() < density:
            out[w] = Fraction(int(rng.integers(-5, 6)))
    return {w: c for w, c in out.items() if c != 0}


def test_sphere_sizes(model):
    assert [len(model.sphere(n)) for n in range(5)] == [1, 4, 12, 36, 108]


def test_sphere_words_are_reduced(model):
    for n in range(5):
        for w in model.sphere(n):
            assert len(w) == n
            assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def test_sphere_out_of_range(model):
    with pytest.raises(FamilyError):
        model.sphere(model.radius + 1)


def test_word_inverse(model):
    for w in model.sphere(3):
        assert model.multiply(w, word_inv(w)) == ()
        assert model.multiply(word_inv(w), w) == ()


def test_convolution_unit(model):
    rng = np.random.default_rng(0)
    a = random_kernel(rng, model.ball(3))
    delta = {(): Fraction(1)}
    assert model.convolve(a, delta) == a
    assert model.convolve(delta, a) == a


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_convolution_associative(seed):
    model = FreeGroupModel(2, radius=6)
    rng = np.random.default_rng(seed)
    ball = model.ball(2)
    a = random_kernel(rng, ball)
    b = random_kernel(rng, ball)
    c = random_kernel(rng, ball)
    lhs = model.convolve(model.convolve(a, b), c)
    rhs = model.convolve(a, model.convolve(b, c))
    assert lhs == rhs


def test_convolution_matches_operator_matrix(model):
    rng = np.random.default_rng(1)
    a = random_kernel(rng, model.ball(2))
    b = random_kernel(rng, model.ball(2))
    conv = model.convolve(a, b)
    ball = model.ball(4)
    vec_b = np.array([float(b.get(w, 0)) for w in ball])
    vec_ab = np.array([float(conv.get(w, 0)) for w in ball])
    mat = model.conv_operator_matrix(a, R=4)
    assert np.allclose(mat @ vec_b, vec_ab, atol=1e-12)


def test_l2_and_sobolev_norms(model):
    a = {(): Fraction(3), (1,): Fraction(4)}
    assert model.l2_norm(a) == pytest.approx(5.0)
    # (1+0)^2 * 9 + (1+1)^2 * 16 = 73 at s = 1
    assert model.sobolev_norm(a, 1.0) == pytest.approx(math.sqrt(73))
    assert model.sobolev_norm(a, 0.0) == pytest.approx(5.0)


def test_weight_kernel_exact(model):
    a = {(): Fraction(1), (1, 2): Fraction(1, 3)}
    w = model.weight_kernel(a, 2)
    assert w[()] == 1
    assert w[(1, 2)] == Fraction(9, 3)
    with pytest.raises(FamilyError):
        model.weight_kernel(a, -1)


def test_length_weight_kernel_drops_unit(model):
    a = {(): Fraction(5), (1,): Fraction(2)}
    assert model.length_weight_kernel(a, 1) == {(1,): Fraction(2)}
    assert model.length_weight_kernel(a, 0) == a


def test_block_matrix_requires_sphere_support(model):
    with pytest.raises(FamilyError):
        model.block_conv_matrix({(1, 2): Fraction(1)}, n=1, k=1, l=2)


def test_block_matrix_action_agrees_with_convolution(model):
    rng = np.random.default_rng(2)
    n, k, l = 2, 2, 2
    a = random_kernel(rng, model.sphere(n), density=0.8)
    x = random_kernel(rng, model.sphere(k), density=0.8)
    mat = model.block_conv_matrix(a, n, k, l)
    vec = np.array([float(x.get(w, 0)) for w in model.sphere(k)])
    conv = model.convolve(a, x)
    expected = np.array(
        [float(conv.get(w, 0)) for w in model.sphere(l)]
    )
    assert np.allclose(mat @ vec, expected, atol=1e-12)


def test_haagerup_ratio_bounded(model):
    for (n, k, l) in [(1, 1, 2), (2, 1, 1), (2, 2, 2), (1, 2, 3)]:
        rep = haagerup_check(model, n, k, l, trials=25, seed=0)
        assert rep.max_ratio <= 1 + 1e-12


def test_haagerup_sphere_one_indicator_value(model):
    # the sphere-1 indicator on (k, l) = (1, 2) realizes sqrt(2g - 1)/sqrt(2g)
    rep = haagerup_check(model, 1, 1, 2, trials=0, seed=0)
    assert rep.witness_is_indicator
    assert rep.max_ratio == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_haagerup_inadmissible_triple_zero_block(model):
    rep = haagerup_check(model, 1, 1, 3, trials=5, seed=0)
    assert rep.max_ratio == 0.0


def test_measured_rd_constant_monotone_in_t(model):
    c1 = measured_rd_constant(model, 1.0, trials=10, seed=0)
    c2 = measured_rd_constant(model, 2.0, trials=10, seed=0)
    assert c1 >= c2 > 0
    # convolution by the unit delta shows the constant is at least 1
    assert c1 >= 1.0


def test_derivation_matrix_diagonal_commutator(model):
    rng = np.random.default_rng(3)
    a = random_kernel(rng, model.ball(2))
    ball = model.ball(4)
    conv = model.conv_operator_matrix(a, R=4)
    lengths = np.array([float(len(w)) for w in ball])
    L = np.diag(lengths)
    direct = model.derivation_matrix(a, order=1, R=4)
    assert np.allclose(direct, L @ conv - conv @ L, atol=1e-12)


def test_derivation_matrix_second_order(model):
    rng = np.random.default_rng(4)
    a = random_kernel(rng, model.ball(2))
    ball = model.ball(4)
    conv = model.conv_operator_matrix(a, R=4)
    lengths = np.diag([float(len(w)) for w in ball])
    once = lengths @ conv - conv @ lengths
    twice = lengths @ once - once @ lengths
    direct = model.derivation_matrix(a, order=2, R=4)
    assert np.allclose(direct, twice, atol=1e-12)
