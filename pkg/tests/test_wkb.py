import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from qes_sextic.errors import ComplexRegime, NoRealTurningPoints
from qes_sextic.polynomial import mp_context
from qes_sextic.wkb import (
    asymptotic_energy,
    asymptotic_prefactor,
    beta_integral,
    closed_form_F,
    factorization_from_b,
    quantization_integral,
    turning_points,
    wkb_boundary_constant,
)

ctx = mp_context(40)
SQRT3 = ctx.sqrt(3)


def test_degenerate_factorization():
    f = factorization_from_b(-2 * SQRT3)
    assert abs(f.alpha - 4 / SQRT3) < 1e-35
    assert abs(f.beta - 4 / SQRT3) < 1e-35
    assert abs(f.F - 64 * SQRT3 / 9) < 1e-35


def test_b_minus_four():
    f = factorization_from_b(-4)
    assert (f.alpha, f.beta, f.F) == (2, 4, 16)
    assert closed_form_F(-4) == 16


def test_positive_b_has_no_turning_points():
    f = factorization_from_b(2 * SQRT3)
    assert f.alpha < 0 and f.beta < 0
    with pytest.raises(NoRealTurningPoints):
        quantization_integral(f.b, f.F)


def test_complex_regime():
    with pytest.raises(ComplexRegime):
        factorization_from_b(-3)


def _dense_oracle(b, F, points):
    """scipy quadrature of sqrt(F - P(y)) over consecutive ``points``."""

    def f(y):
        v = F - (y**6 + 2 * b * y**4 + (b * b + 4) * y**2)
        return math.sqrt(max(v, 0.0))

    return sum(quad(f, x, y, epsabs=1e-13, epsrel=1e-13, limit=400)[0] for x, y in zip(points, points[1:]))


def test_b_minus_four_against_dense_oracle():
    # (y^2-2)^2 (4-y^2) under the root: |y^2-2| sqrt(4-y^2) between +-2
    U, _ = turning_points(-4, 16)
    assert abs(U - 2) < 1e-30
    got = quantization_integral(-4, 16)
    assert abs(got - _dense_oracle(-4.0, 16.0, [-2, -math.sqrt(2), math.sqrt(2), 2])) < 1e-10
    assert abs(got - 8) < 1e-12


def test_boundary_integral_is_two_pi():
    got = quantization_integral(-2 * SQRT3, 64 * SQRT3 / 9)
    assert abs(got - 2 * ctx.pi) < 1e-10


def test_beta_identity():
    assert abs(beta_integral() - 3 * ctx.pi / 8) < 1e-12


def test_boundary_constant():
    b = wkb_boundary_constant(1e-8)
    assert b < 0
    assert abs(b * b - 12) <= 1e-8
    assert abs(factorization_from_b(b).F - 64 * SQRT3 / 9) < 1e-8


def test_asymptotic_energy():
    assert abs(asymptotic_prefactor() - 64 * SQRT3 / 9) < 1e-12
    assert abs(asymptotic_energy(1) - ctx.mpf("12.3168057427")) < 1e-10
    assert abs(asymptotic_energy(20) - 1101.6) < 0.1
    assert abs(asymptotic_energy(100) - 1000 * asymptotic_prefactor()) < 1e-25
    with pytest.raises(ValueError):
        asymptotic_energy(0)


@settings(max_examples=50)
@given(st.floats(min_value=0.0, max_value=40.0))
def test_factorization_matches_coefficients(q):
    b = -ctx.sqrt(12 + ctx.mpf(q))
    f = factorization_from_b(b)
    for x, y in zip(f.turning_polynomial().coeffs, f.factored_polynomial().coeffs):
        assert abs(x - y) <= ctx.mpf(10) ** -30 * max(1, abs(x))
    assert abs(closed_form_F(b) - f.F) <= ctx.mpf(10) ** -30 * max(1, abs(f.F))


@settings(max_examples=8)
@given(st.floats(min_value=0.5, max_value=20.0))
def test_quadrature_stable_under_tighter_tolerance(q):
    b = -ctx.sqrt(12 + ctx.mpf(q))
    F = factorization_from_b(b).F
    coarse = quantization_integral(b, F, 1e-10)
    fine = quantization_integral(b, F, 5e-11)
    assert abs(coarse - fine) <= 1e-10
