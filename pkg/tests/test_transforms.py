import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy.special import roots_genlaguerre, roots_hermite

from qhp import transforms as tf
from qhp.diffops import binomial_power_op, neumann_inverse_apply
from qhp.families import qhp_explicit
from qhp.polycore import Poly, random_poly

LD = np.longdouble


def test_two_point_laguerre_closed_form():
    rule = tf.build_rule("laguerre", 0.0, 2)
    r2 = math.sqrt(2)
    assert np.allclose(rule.nodes.astype(float), [2 - r2, 2 + r2], atol=1e-15)
    assert np.allclose(rule.weights.astype(float), [(2 + r2) / 4, (2 - r2) / 4], atol=1e-15)


def test_single_hermite_node():
    rule = tf.build_rule("hermite", count=1)
    assert rule.nodes[0] == 0
    assert abs(float(rule.weights[0]) - math.sqrt(math.pi)) < 1e-15


@pytest.mark.parametrize("alpha", [0.0, 1.0, 4.0])
@pytest.mark.parametrize("count", [8, 32])
def test_laguerre_moments(alpha, count):
    rule = tf.build_rule("laguerre", alpha, count)
    for k in range(2 * count):
        exact = mpmath.gamma(alpha + k + 1)
        got = rule.integrate(rule.nodes**k)
        assert abs(mpmath.mpf(str(got)) / exact - 1) < 1e-14


def test_hermite_moments_and_symmetry():
    rule = tf.build_rule("hermite", count=24)
    assert np.all(rule.nodes[::-1] == -rule.nodes)
    for k in range(0, 40, 2):
        exact = mpmath.gamma(k / 2 + 0.5)
        assert abs(mpmath.mpf(str(rule.integrate(rule.nodes**k))) / exact - 1) < 1e-14


def test_against_scipy_roots():
    x, w = roots_genlaguerre(20, 2.0)
    rule = tf.build_rule("laguerre", 2.0, 20)
    assert np.allclose(rule.nodes.astype(float), x, rtol=1e-12)
    assert np.allclose(rule.weights.astype(float), w, rtol=1e-9)
    x, w = roots_hermite(20)
    rule = tf.build_rule("hermite", count=20)
    assert np.allclose(rule.nodes.astype(float), x, atol=1e-13)
    assert np.allclose(rule.weights.astype(float), w, rtol=1e-10)


def test_rule_rejects_bad_input():
    with pytest.raises(ValueError):
        tf.build_rule("jacobi", 0.0, 4)
    with pytest.raises(ValueError):
        tf.build_rule("laguerre", 0.0, 0)


def test_default_count_from_environment(monkeypatch):
    monkeypatch.setenv("QHP_PRECISION", "40")
    assert tf.default_count() == 40
    monkeypatch.delenv("QHP_PRECISION")
    assert tf.default_count() == tf.DEFAULT_OUTER_COUNT


@pytest.mark.parametrize("N", [1, 3, 6])
def test_laplace_inverse_matches_neumann(N):
    rng = __import__("random").Random(N)
    for y in (Fraction(-1, 2), Fraction(1, 3), Fraction(5, 2)):
        p = random_poly(rng, 12)
        exact = neumann_inverse_apply(2, y, N, p)
        approx = tf.laplace_inverse_apply(N, y, p)
        for k, c in enumerate(exact.coeffs):
            assert abs(approx[k] - tf.to_ld(c)) <= 1e-10 * max(1, abs(float(c)))


def test_reflected_operator_is_not_the_inverse():
    x4 = Poly.monomial(4)
    inverse = neumann_inverse_apply(2, 1, 1, x4)
    reflected = binomial_power_op(2, -1, 1, 4)(x4)
    assert inverse - reflected == Poly.const(24)


def test_laplace_requires_matching_rule():
    with pytest.raises(ValueError):
        tf.laplace_inverse_apply(3, 1, Poly.monomial(2), tf.build_rule("laguerre", 0.0, 8))


def test_gw_examples():
    assert abs(float(tf.gw_transform(1, tf.resolve_function("poly:0,0,1"), 0)) - 2) < 1e-15
    for t, x0 in [(0.25, 0.0), (1.0, 1.5), (3.0, -2.0)]:
        got = tf.gw_transform(t, tf.GAUSS, x0)
        assert abs(float(got - tf.gw_gauss_closed_form(t, x0))) < 1e-10


@pytest.mark.parametrize("t", [0, -1])
def test_gw_domain(t):
    with pytest.raises(tf.DomainError):
        tf.gw_transform(t, tf.GAUSS, 0)


def test_gw_rejects_unsupported():
    with pytest.raises(tf.DomainError):
        tf.gw_transform(1, tf.EXP_SQUARE, 0)


def test_expansion_exact_examples():
    assert tf.expansion_coeffs_exact(Poly.monomial(2), 1, 1, 2) == [2, 0, 1]
    for N in (1, 2, 4):
        for n in range(7):
            basis = qhp_explicit(n, N, -Fraction(3, 2))
            assert tf.expansion_coeffs_exact(basis, Fraction(3, 2), N, 8) == [
                1 if k == n else 0 for k in range(9)]


def test_expansion_exact_round_trip():
    rng = __import__("random").Random(7)
    for N in (1, 2, 5):
        for y in (Fraction(-2), Fraction(1, 3)):
            p = random_poly(rng, 10)
            a = tf.expansion_coeffs_exact(p, y, N, 10)
            assert tf.reconstruct(a, y, N) == p


def test_expansion_quadrature_vs_exact():
    rng = __import__("random").Random(3)
    for N in (1, 3, 6):
        for y in (Fraction(-1, 2), Fraction(5, 2)):
            p = random_poly(rng, 10)
            exact = tf.expansion_coeffs_exact(p, y, N, 10)
            series = tf.expansion_coeffs_quadrature(tf.poly_function(p), y, N, 10)
            assert max(abs(float(series[k]) - float(exact[k])) for k in range(11)) < 1e-8


def _gauss_coefficient(k: int, c: float, N: int) -> float:
    f = lambda s: s ** (N - 1) * mpmath.exp(-s) * (1 + 4 * c * s) ** (-k - 0.5)
    return float((-1) ** k / mpmath.factorial(k) / mpmath.gamma(N) * mpmath.quad(f, [0, mpmath.inf]))


@pytest.mark.parametrize("N", [1, 2, 5])
def test_gaussian_expansion_against_direct_integral(N):
    y = 0.75
    outer = tf.build_rule("laguerre", N - 1, 128)
    series = tf.expansion_coeffs_quadrature(tf.GAUSS, Fraction(3, 4), N, 8, outer_rule=outer)
    for n in range(9):
        want = _gauss_coefficient(n // 2, y / N, N) if n % 2 == 0 else 0.0
        assert abs(float(series[n]) - want) < 1e-8


def test_gaussian_series_reconstructs():
    series = tf.expansion_coeffs_quadrature(tf.GAUSS, Fraction(1, 4), 2, 24)
    xs = np.linspace(-0.5, 0.5, 11)
    assert np.max(np.abs(tf.reconstruct_float(series.values, Fraction(1, 4), 2, xs) - np.exp(-xs**2))) < 1e-6


def test_expansion_quadrature_domain():
    with pytest.raises(tf.DomainError):
        tf.expansion_coeffs_quadrature(tf.GAUSS, 0, 2, 4)
    with pytest.raises(tf.DomainError):
        tf.expansion_coeffs_quadrature(tf.EXP_SQUARE, 1, 2, 4)


def test_glaisher_baseline():
    want = math.sqrt(math.pi) / 2 * math.exp(0.25) * math.erfc(0.5)
    assert abs(float(tf.glaisher_F(0.0, 1.0, 1, tf.build_rule("laguerre", 0.0, 128))) - want) < 1e-6


def test_glaisher_zero_amplitude_is_gaussian():
    xs = np.linspace(-3, 3, 13)
    for N in (1, 4, 32):
        assert np.max(np.abs(tf.glaisher_F(xs, 0.0, N) - np.exp(-xs**2))) < 1e-12


def test_glaisher_limit_examples():
    assert float(tf.glaisher_limit(0, 0)) == 1.0
    assert abs(float(tf.glaisher_limit(0, 2)) - 1 / 3) < 1e-18
    with pytest.raises(tf.DomainError):
        tf.glaisher_limit(0, -1)


def test_glaisher_error_shrinks_with_more_nodes():
    ref = float(tf.glaisher_F(0.0, 1.3, 1, tf.build_rule("laguerre", 0.0, 256)))
    errs = [abs(float(tf.glaisher_F(0.0, 1.3, 1, tf.build_rule("laguerre", 0.0, c))) - ref)
            for c in (16, 32, 64)]
    assert all(b <= max(a, 1e-17) for a, b in zip(errs, errs[1:]))


def test_table_shape():
    table = tf.figure1_table(0.5, [1, 4], tf.parse_grid("-3:3:61"))
    lines = table.to_csv().splitlines()
    assert lines[0] == "x,F_N1,F_N4,F_limit" and len(lines) == 62
    for col in list(table.columns.values()) + [table.limit]:
        col = col.astype(float)
        assert np.allclose(col, col[::-1], atol=1e-15)
        assert np.argmax(col) == 30


@pytest.mark.parametrize("text", ["1:2", "a:b:c", "0:1:1"])
def test_parse_grid_errors(text):
    with pytest.raises(ValueError):
        tf.parse_grid(text)


def test_resolve_function():
    f = tf.resolve_function("poly:1,0,-1/2")
    assert f.poly == Poly((1, 0, Fraction(-1, 2)))
    assert float(f(np.array([2.0]))[0]) == -1.0
    with pytest.raises(ValueError):
        tf.resolve_function("sin")
