import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    ConvergenceError,
    QuadratureSettings,
    batch_quad,
    quad,
)


def _rule(weights, deg):
    return weights @ NODES**deg


@pytest.mark.parametrize("deg", range(23))
def test_kronrod_exact_to_degree_22(deg):
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert _rule(KRONROD_WEIGHTS, deg) == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("deg", range(14))
def test_gauss_exact_to_degree_13(deg):
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert _rule(GAUSS_WEIGHTS, deg) == pytest.approx(exact, abs=1e-14)


def test_gauss_not_exact_at_14():
    assert abs(_rule(GAUSS_WEIGHTS, 14) - 2 / 15) > 1e-6


@pytest.mark.parametrize("f,a,b,exact", [
    (np.exp, 0.0, 1.0, math.e - 1),
    (lambda t: 1 / (1 + t * t), 0.0, 50.0, math.atan(50.0)),
    (lambda t: np.sqrt(t), 0.0, 1.0, 2 / 3),
    (lambda t: t**3 / np.expm1(t), 1e-12, 60.0, math.pi**4 / 15),
    (lambda t: np.log(t), 1e-30, 1.0, -1.0),
])
def test_known_integrals(f, a, b, exact):
    val, err = quad(f, a, b, rel_tol=1e-12)
    assert val == pytest.approx(exact, rel=1e-10)
    assert err <= 1e-9 * abs(exact)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=20),
       st.floats(-5, 5), st.floats(0.01, 10))
def test_polynomials(coeffs, a, width):
    b = a + width
    p = np.polynomial.Polynomial(coeffs)
    P = p.integ()
    exact = P(b) - P(a)
    val, _ = quad(p, a, b, rel_tol=1e-12, abs_tol=1e-12)
    assert val == pytest.approx(exact, rel=1e-10, abs=1e-9)


def test_batch_integrals_are_independent():
    scale = np.array([1.0, 2.0, 3.0])
    breaks = np.array([[0.0, 1.0, 2.0]] * 3)
    val, err, ok = batch_quad(lambda o, t: np.exp(-scale[o] * t), breaks, rel_tol=1e-12)
    assert ok.all()
    np.testing.assert_allclose(val, (1 - np.exp(-2 * scale)) / scale, rtol=1e-12)


def test_subdivision_cap_raises():
    with pytest.raises(ConvergenceError) as info:
        quad(lambda t: np.sin(200 * t), 0.0, 10.0, rel_tol=1e-12, max_subdivisions=1)
    assert info.value.partial is not None
    assert "error" in info.value.diagnostics


@pytest.mark.parametrize("kw", [{"rel_tol": 0}, {"rel_tol": 1.0}, {"matsubara_tail_tol": -1e-3},
                                {"max_terms": 0}, {"max_subdivisions": 0}])
def test_settings_validation(kw):
    with pytest.raises(ValueError):
        QuadratureSettings(**kw)


def test_settings_defaults():
    q = QuadratureSettings()
    assert q.rel_tol == 1e-9 and q.matsubara_tail_tol == 1e-10
