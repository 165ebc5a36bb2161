import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import horner_compose, naive_product, random_tail
from qbiuni.series import (
    NonzeroInnerConstant,
    NormalizedFunction,
    NotNormalized,
    Series,
    ZeroConstantTerm,
    add,
    comp_inverse,
    compose,
    div,
    evaluate,
    mul,
    normalized,
    series_exp,
)

N = 8

coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def series_st(order=N, c0=None):
    def build(cs):
        if c0 is not None:
            cs = [c0] + cs[1:]
        return Series(cs, order)
    return st.lists(coeff, min_size=order + 1, max_size=order + 1).map(build)


def test_add_cancellation_and_identity():
    s = add(Series([1, 1], 3), Series([1, -1], 3))
    assert s.coeffs.tolist() == [2, 0, 0, 0]
    a = Series([1, 2, 3, 4])
    assert np.array_equal(add(a, Series([0], 3)).coeffs, a.coeffs)


def test_add_takes_min_order():
    assert add(Series([1, 2, 3]), Series([1, 2, 3, 4, 5])).order == 2


def test_add_matches_elementwise(rng):
    a, b = rng.normal(size=9) + 1j * rng.normal(size=9), rng.normal(size=9)
    assert np.array_equal(add(Series(a), Series(b)).coeffs, a + b)


def test_mul_examples():
    assert mul(Series([1, 1], 4), Series([1, -1], 4)).coeffs.tolist() == [1, 0, -1, 0, 0]
    a = Series([1, 2, 3])
    assert np.array_equal(mul(a, Series([1], 2)).coeffs, a.coeffs)


def test_mul_matches_naive_convolution(rng):
    for _ in range(20):
        a, b = random_tail(rng, N + 1, 3), random_tail(rng, N + 1, 3)
        got = mul(Series(a), Series(b)).coeffs
        assert np.allclose(got, naive_product(a, b, N), atol=1e-14, rtol=0)


@given(series_st(), series_st())
def test_mul_commutative(a, b):
    assert np.allclose(mul(a, b).coeffs, mul(b, a).coeffs, atol=1e-13, rtol=0)


@given(series_st(), series_st(), series_st())
def test_mul_associative(a, b, c):
    lhs, rhs = mul(mul(a, b), c).coeffs, mul(a, mul(b, c)).coeffs
    scale = max(1.0, np.abs(lhs).max())
    assert np.allclose(lhs, rhs, atol=1e-13 * scale, rtol=0)


def test_div_geometric():
    g = div(Series([1], 6), Series([1, -1], 6))
    assert g.coeffs.tolist() == [1] * 7


def test_div_self_is_one():
    a = Series([2, 1 + 1j, -3, 0.5])
    assert np.allclose((a / a).coeffs, [1, 0, 0, 0], atol=1e-15)


def test_div_zero_constant_raises():
    with pytest.raises(ZeroConstantTerm):
        div(Series([1, 1]), Series([1e-13, 1]))


@given(series_st(), st.lists(coeff, min_size=N + 1, max_size=N + 1),
       st.floats(0.1, 10), st.floats(0, 2 * np.pi))
def test_div_round_trip(a, bc, r0, ph):
    b = Series([r0 * cmath.exp(1j * ph)] + bc[1:], N)
    q = div(a, b)
    back = mul(q, b)
    # error is relative to the size of the intermediate quotient
    scale = max(1.0, np.abs(q.coeffs).max() * np.abs(b.coeffs).max())
    assert np.allclose(back.coeffs, a.coeffs, atol=1e-12 * scale, rtol=0)


def test_div_round_trip_moderate(rng):
    for _ in range(200):
        a = Series(random_tail(rng, N + 1, 10))
        b0 = (0.1 + 9.9 * rng.random()) * np.exp(2j * np.pi * rng.random())
        b = Series([b0, *random_tail(rng, N, 10)])
        q = div(a, b)
        assert np.allclose(mul(q, b).coeffs, a.coeffs, atol=1e-12 * max(1, np.abs(q.coeffs).max()), rtol=0)


def test_compose_identity_outer():
    f = Series([0, 1, 0.3, -0.2j, 0.1])
    assert np.allclose(compose(Series.identity(4), f).coeffs, f.coeffs)


def test_compose_substitution():
    geo = Series([1] * 9)
    s = compose(geo, Series([0, 0, 1], 8))
    assert s.coeffs.tolist() == [1, 0, 1, 0, 1, 0, 1, 0, 1]


def test_compose_rejects_nonzero_inner():
    with pytest.raises(NonzeroInnerConstant):
        compose(Series([1, 1]), Series([0.5, 1]))


def test_compose_matches_horner(rng):
    for _ in range(50):
        outer = Series(random_tail(rng, N + 1, 2))
        inner = Series([0, *random_tail(rng, N, 1)])
        assert np.allclose(compose(outer, inner).coeffs, horner_compose(outer, inner),
                           atol=1e-12, rtol=0)


def test_comp_inverse_identity():
    g = comp_inverse(normalized([], 6))
    assert g.coeffs.tolist() == [0, 1, 0, 0, 0, 0, 0]


def test_comp_inverse_low_coefficients():
    a2, a3 = 0.7 - 0.2j, -0.4 + 1.1j
    g = comp_inverse(normalized([a2, a3], 6))
    assert g[2] == -a2
    assert abs(g[3] - (2 * a2**2 - a3)) < 1e-15


def test_comp_inverse_round_trip(rng):
    for _ in range(50):
        f = normalized(random_tail(rng, N - 1), N)
        g = comp_inverse(f)
        ident = compose(f, g).coeffs
        assert np.allclose(ident, Series.identity(N).coeffs, atol=1e-12, rtol=0)


def test_comp_inverse_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        comp_inverse(Series([0, 2, 1]))


@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_inverse_identity_symbolic(a2, a3):
    g = comp_inverse(normalized([a2, a3], 5))
    assert g[2] == -a2
    assert abs(g[3] - (2 * a2**2 - a3)) <= 1e-15 * max(1, abs(a2) ** 2, abs(a3))


def test_normalized_function_validation():
    with pytest.raises(NotNormalized):
        NormalizedFunction(Series([0, 1.5, 1]))
    f = normalized([0.2, 0.1], 4)
    assert f.a(2) == 0.2 and f.a(4) == 0


def test_evaluate_examples(rng):
    assert evaluate(Series([1, 1]), 0) == 1
    geo = div(Series([1], 30), Series([1, -1], 30))
    # tail of the truncated geometric series is 0.5**31 / 0.5
    assert abs(evaluate(geo, 0.5) - 2) < 1e-8
    for _ in range(10):
        s = Series(random_tail(rng, 6))
        assert evaluate(s, 0) == s[0]


def test_series_is_immutable():
    s = Series([1, 2])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5


def test_series_exp_matches_pointwise(rng):
    s = Series([0, *random_tail(rng, 15, 0.5)])
    e = series_exp(s)
    z = 0.05 + 0.02j
    assert abs(evaluate(e, z) - cmath.exp(evaluate(s, z))) < 1e-12


@settings(max_examples=50)
@given(series_st(order=6, c0=0j))
def test_scalar_ops_and_shifts(a):
    assert np.allclose((2 * a).coeffs, a.coeffs * 2)
    assert np.allclose(a.times_z().over_z().coeffs, a.coeffs)
