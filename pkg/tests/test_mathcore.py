import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relmarginal.errors import IntegrandError, UnsupportedOrderError
from relmarginal.mathcore import (
    MAX_ORDER,
    QuadratureSpec,
    Scheme,
    fd_derivative,
    hermite,
    integrate_2d,
    quad_nodes,
)

# explicit coefficients, highest power first
EXPLICIT = {
    0: [1],
    1: [2, 0],
    2: [4, 0, -2],
    3: [8, 0, -12, 0],
    4: [16, 0, -48, 0, 12],
    5: [32, 0, -160, 0, 120, 0],
    6: [64, 0, -480, 0, 720, 0, -120],
}


def test_hermite_examples():
    assert hermite(0, 0.7) == 1.0
    assert hermite(5, 0.0) == 0.0
    assert hermite(2, 1.0) == 2.0


def test_hermite_matches_explicit_coefficients():
    x = np.linspace(-4, 4, 81)
    for n, coeffs in EXPLICIT.items():
        expected = np.polyval(coeffs, x)
        np.testing.assert_allclose(hermite(n, x), expected, rtol=1e-10, atol=1e-10)


def test_hermite_recurrence_self_consistent():
    x = np.linspace(-4, 4, 33)
    for n in range(1, 20):
        np.testing.assert_array_equal(hermite(n + 1, x), 2 * x * hermite(n, x) - 2 * n * hermite(n - 1, x))


def test_hermite_accepts_complex():
    z = 0.3 + 0.4j
    assert hermite(2, z) == pytest.approx(4 * z * z - 2)


def test_two_point_gauss_hermite():
    x, w = quad_nodes(QuadratureSpec(Scheme.GAUSS_HERMITE, 2))
    np.testing.assert_allclose(x, [-1 / math.sqrt(2), 1 / math.sqrt(2)], rtol=1e-15)
    np.testing.assert_allclose(w, [math.sqrt(math.pi) / 2] * 2, rtol=1e-15)


@pytest.mark.parametrize("order", [2, 5, 16, 64, 128, MAX_ORDER])
@pytest.mark.parametrize("scheme,total", [("gauss-hermite", math.sqrt(math.pi)), ("gauss-legendre", 2 * 3.5)])
def test_weights_sum_and_ordering(order, scheme, total):
    x, w = quad_nodes(QuadratureSpec(scheme, order, 3.5))
    assert np.all(w > 0)
    assert np.all(np.diff(x) > 0)
    assert w.sum() == pytest.approx(total, rel=1e-13)


def test_legendre_exact_on_polynomial():
    x, w = quad_nodes(QuadratureSpec(Scheme.GAUSS_LEGENDRE, 8, 1.0))
    assert abs(w @ x**2 - 2 / 3) < 1e-14


@pytest.mark.parametrize("m", [2, 4, 8, 12])
def test_hermite_rule_exactness(m):
    x, w = quad_nodes(QuadratureSpec(Scheme.GAUSS_HERMITE, m))
    for k in range(2 * m):
        exact = 0.0 if k % 2 else math.gamma((k + 1) / 2)
        scale = math.gamma((k + 2) / 2)
        assert abs(w @ x**k - exact) <= 1e-12 * scale


def test_order_cap():
    with pytest.raises(UnsupportedOrderError):
        quad_nodes(QuadratureSpec(Scheme.GAUSS_LEGENDRE, MAX_ORDER + 1))


@pytest.mark.parametrize("bad", [dict(order=1), dict(truncation=0.0), dict(truncation=-1.0), dict(scheme="simpson")])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        QuadratureSpec(**bad)


def test_nodes_deterministic():
    spec = QuadratureSpec(Scheme.GAUSS_LEGENDRE, 40, 2.0)
    a = quad_nodes(spec)
    b = quad_nodes(QuadratureSpec(Scheme.GAUSS_LEGENDRE, 40, 2.0))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


GL64 = QuadratureSpec(Scheme.GAUSS_LEGENDRE, 64, 8.0)


def test_integrate_2d_gaussian():
    assert abs(integrate_2d(lambda x, y: np.exp(-x * x - y * y), GL64) - math.pi) < 1e-10
    assert abs(integrate_2d(lambda x, y: x * x * np.exp(-x * x - y * y), GL64) - math.pi / 2) < 1e-10
    assert integrate_2d(lambda x, y: 0.0, GL64) == 0.0


def test_integrate_2d_hermite_divides_weight_out():
    spec = QuadratureSpec(Scheme.GAUSS_HERMITE, 10)
    assert integrate_2d(lambda x, y: (x**4 + y**2) * np.exp(-x * x - y * y), spec) == pytest.approx(
        math.pi * (3 / 4 + 1 / 2), rel=1e-12
    )


def test_integrate_2d_transform_and_center():
    # Gaussian of widths (3, 0.2) centred at (1, -2)
    def f(x, y):
        return np.exp(-((x - 1) ** 2) / 18 - (y + 2) ** 2 / 0.08)

    exact = 2 * math.pi * 3 * 0.2
    got = integrate_2d(f, GL64, transform=np.diag([3.0, 0.2]), center=(1.0, -2.0))
    assert got == pytest.approx(exact, rel=1e-12)


def test_integrate_2d_symmetric_under_swap():
    def f(x, y):
        return np.exp(-x * x - y * y) * (1 + x * y + x * x * y * y)

    def swapped(x, y):
        return f(y, x)

    assert integrate_2d(f, GL64) == integrate_2d(swapped, GL64)


def test_integrate_2d_rejects_non_finite():
    with pytest.raises(IntegrandError):
        integrate_2d(lambda x, y: np.where(x > 0, np.inf, 0.0), GL64)


def test_fd_derivative_examples():
    assert abs(fd_derivative(lambda x: x * x, 1.0, 1e-4) - 2.0) < 1e-8
    assert fd_derivative(lambda x: 3.0, 0.2, 1e-3) == 0.0
    exact = -0.5 * math.exp(-0.125)
    assert abs(fd_derivative(lambda x: math.exp(-x * x / 2), 0.5, 1e-4) - exact) < 1e-7


def test_fd_derivative_rejects_bad_step():
    with pytest.raises(ValueError):
        fd_derivative(math.sin, 0.0, 0.0)


@given(st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2))
def test_fd_exact_for_quadratics(x, a, b):
    assert fd_derivative(lambda s: a * s * s + b * s, x, 1e-3) == pytest.approx(2 * a * x + b, abs=1e-9)
