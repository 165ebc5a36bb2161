import numpy as np
import pytest

from oracles import random_tail
from qbiuni.classes import (
    ClassSpec,
    NoRegionOracle,
    class_expression,
    f_expression,
    g_expression,
    m_expression,
    membership,
    subordination_check,
)
from qbiuni.qcalc import QParams, jackson_derivative, ordinary_derivative, salagean_q
from qbiuni.series import Series, comp_inverse, normalized
from qbiuni.targets import custom_target, starlike_order, strongly_starlike


def br(n, q):
    return (1 - q**n) / (1 - q)


@pytest.mark.parametrize("step", ["classical", "jackson"])
def test_identity_gives_constant_one(step):
    e = m_expression(normalized([], 8), 0.4, QParams(0.6, 2), step)
    assert np.allclose(e.coeffs, [1] + [0] * e.order)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
@pytest.mark.parametrize("qk", [(0.5, 1), (0.3, 0), (0.9, 2)])
def test_m_expression_low_coefficients(rng, lam, qk):
    q, k = qk
    a2, a3 = random_tail(rng, 2)
    f = normalized([a2, a3, *random_tail(rng, 5)], 8)
    e = m_expression(f, lam, QParams(q, k))
    assert e[0] == pytest.approx(1, abs=1e-15)
    assert abs(e[1] - (1 + lam) * br(2, q) ** k * a2) < 1e-12
    c2 = 2 * (1 + 2 * lam) * br(3, q) ** k * a3 - (1 + 3 * lam) * br(2, q) ** (2 * k) * a2**2
    assert abs(e[2] - c2) < 1e-12


def test_m_expression_lambda0_is_single_ratio(rng):
    f = normalized(random_tail(rng, 7), 8)
    qp = QParams(0.5, 1)
    d = salagean_q(f, qp)
    ratio = ordinary_derivative(d).times_z().over_z() / d.over_z()
    assert m_expression(f, 0, qp).allclose(ratio, atol=1e-13)


def test_jackson_step_is_literal_operator_ratio(rng):
    f = normalized(random_tail(rng, 7), 8)
    q, k = 0.45, 2
    d = [salagean_q(f, QParams(q, k + j)).over_z() for j in range(3)]
    # lambda = 0 and lambda = 1 give the two pure ratios
    assert m_expression(f, 0, QParams(q, k), "jackson").allclose(d[1] / d[0], atol=1e-13)
    assert m_expression(f, 1, QParams(q, k), "jackson").allclose(d[2] / d[1], atol=1e-13)


def test_jackson_step_k0_form(rng):
    f = normalized(random_tail(rng, 7), 8)
    q, lam = 0.6, 0.3
    dq = jackson_derivative(f, q)
    first = dq / f.series.over_z()  # z D_q f / f
    second = jackson_derivative(dq.times_z(), q) / dq  # D_q(z D_q f) / D_q f
    ref = (1 - lam) * first + lam * second
    assert m_expression(f, lam, QParams(q, 0), "jackson").allclose(ref, atol=1e-13)


def test_jackson_step_linear_coefficient(rng):
    a2 = random_tail(rng, 1)[0]
    q, k, lam = 0.5, 1, 0.5
    e = m_expression(normalized([a2, 0.1], 8), lam, QParams(q, k), "jackson")
    assert abs(e[1] - q * (1 + lam * q) * br(2, q) ** k * a2) < 1e-13


def test_steps_agree_in_classical_limit(rng):
    f = normalized(random_tail(rng, 7, 0.3), 8)
    qp = QParams(1 - 1e-8, 2)
    a = m_expression(f, 0.7, qp, "classical")
    b = m_expression(f, 0.7, qp, "jackson")
    # the gap is O(1 - q) times the coefficient size
    assert a.allclose(b, atol=1e-6 * np.abs(a.coeffs).max())
    assert abs(a[1] - b[1]) < 1e-6 and abs(a[2] - b[2]) < 1e-6


def test_f_expression_special_cases(rng):
    f = normalized(random_tail(rng, 7), 8)
    qp = QParams(0.4, 2)
    d = salagean_q(f, qp)
    assert f_expression(f, 0, qp).allclose(d.over_z(), atol=1e-15)
    assert f_expression(f, 1, qp).allclose(ordinary_derivative(d), atol=1e-15)


def test_f_expression_low_coefficients(rng):
    a2, a3 = random_tail(rng, 2)
    q, k, mu = 0.7, 2, 0.3
    e = f_expression(normalized([a2, a3, 0.2], 8), mu, QParams(q, k))
    assert e[0] == 1
    assert abs(e[1] - (1 + mu) * br(2, q) ** k * a2) < 1e-13
    assert abs(e[2] - (1 + 2 * mu) * br(3, q) ** k * a3) < 1e-13


def spec(family="M", param=0.0, q=0.9, k=0, target=None, **kw):
    return ClassSpec(family, param, QParams(q, k), target or starlike_order(0.0), **kw)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(param=1.5)
    with pytest.raises(ValueError):
        spec(family="F", param=-0.1)
    with pytest.raises(ValueError):
        spec(family="X")


def test_g_expression_identity():
    e = g_expression(normalized([], 8), spec(param=0.3, q=0.5, k=1))
    assert np.allclose(e.coeffs, [1] + [0] * e.order)


@pytest.mark.parametrize("family", ["M", "F"])
def test_g_expression_sign_flip(family):
    a2, lam, q, k = 0.3 - 0.1j, 0.5, 0.6, 2
    e = g_expression(normalized([a2], 8), spec(family, lam, q, k))
    assert abs(e[1] + (1 + lam) * br(2, q) ** k * a2) < 1e-13


def test_g_expression_uses_inverse(rng):
    f = normalized(random_tail(rng, 7, 0.5), 8)
    s = spec("F", 0.2, 0.3, 1)
    assert g_expression(f, s).allclose(class_expression(comp_inverse(f), s), atol=0)


@pytest.mark.parametrize("family", ["M", "F"])
def test_class_expressions_start_at_one(rng, family):
    for _ in range(10):
        f = normalized(random_tail(rng, 7), 8)
        s = spec(family, rng.random(), 0.1 + 0.8 * rng.random(), int(rng.integers(0, 4)))
        assert class_expression(f, s)[0] == 1
        assert abs(g_expression(f, s)[0] - 1) < 1e-15


def test_subordination_constant_passes():
    for t in (strongly_starlike(0.5), starlike_order(0.25)):
        v = subordination_check(Series([1], 8), t)
        assert v.passed and v.samples == 6 * 64


# order 400 keeps the truncation error below 1e-8 on |z| = 0.95
@pytest.mark.parametrize("t", [strongly_starlike(0.3, 400), strongly_starlike(1.0, 400),
                               starlike_order(0.5, 400)], ids=lambda t: t.label())
def test_subordination_target_itself(t):
    assert subordination_check(t.series, t, rings=(0.1, 0.5, 0.9, 0.95)).passed


def test_subordination_witness():
    v = subordination_check(Series([1, 4], 4), starlike_order(0.5), rings=(0.9,), points_per_ring=2)
    # samples at z = 0.9 and z = -0.9; the latter maps to -2.6
    assert not v.passed
    assert v.witness == pytest.approx(-0.9)
    assert v.worst_margin == pytest.approx(-2.6 - 0.5)


def test_subordination_needs_region():
    with pytest.raises(NoRegionOracle):
        subordination_check(Series([1], 3), custom_target(Series([1, 1, 0])))


def test_membership_identity_passes():
    for fam in "MF":
        v = membership(normalized([], 16), spec(fam, 0.5, 0.3, 2, strongly_starlike(0.5)))
        assert v.passed and v.f_side and v.g_side


def test_membership_large_a2_fails():
    v = membership(normalized([0.9], 16), spec("M", 0.0, 0.9, 0))
    assert not v.f_side and not v.passed
    assert v.witness_side == "f"
    # the f-side expression (1 + 1.8z)/(1 + 0.9z) turns negative near z = -0.9
    assert v.f_verdict.witness.real < -0.8 and abs(v.f_verdict.witness.imag) < 0.2
    assert "witness" in v.describe()


def test_membership_small_perturbation_passes():
    assert membership(normalized([0.01], 16), spec("M", 0.0, 0.9, 0)).passed


def test_membership_deterministic():
    s = spec("F", 0.4, 0.5, 1, strongly_starlike(0.5))
    f = normalized([0.2, -0.1j], 16)
    assert membership(f, s) == membership(f, s)
