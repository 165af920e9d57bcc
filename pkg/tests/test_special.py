import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_moduli.special import (
    CATALAN,
    QuadratureError,
    catalan_constant,
    dilog,
    integrate,
    lerch_special,
)


def brute_dilog(x, terms=2000):
    # plain defining series; only used where it converges fast
    return math.fsum(x ** n / n ** 2 for n in range(1, terms))


def test_dilog_trivial_points():
    assert dilog(0.0) == 0.0
    assert dilog(1.0) == pytest.approx(math.pi ** 2 / 6, abs=1e-15)
    assert dilog(-1.0) == pytest.approx(-math.pi ** 2 / 12, abs=1e-15)


def test_dilog_third_against_series():
    assert abs(dilog(1 / 3) - brute_dilog(1 / 3)) < 1e-16
    assert dilog(1 / 3) == pytest.approx(0.366213229977, abs=1e-12)


@given(st.floats(-1.0, 1.0))
def test_dilog_matches_mpmath(x):
    assert abs(dilog(x) - float(mpmath.polylog(2, x))) < 1e-14


@pytest.mark.parametrize("x", np.linspace(0.0, 1.0, 41))
def test_dilog_duplication(x):
    assert abs(dilog(x * x) - 2 * (dilog(x) + dilog(-x))) < 1e-13


def test_dilog_rejects_outside():
    with pytest.raises(ValueError):
        dilog(1.5)


def test_catalan():
    assert round(catalan_constant(), 6) == 0.915966
    # partial alternating sums bracket the constant
    s = 0.0
    for n in range(50):
        s += (-1) ** n / (2 * n + 1) ** 2
        if n % 2 == 0:
            assert s > CATALAN
        else:
            assert s < CATALAN
    assert abs(catalan_constant() - float(mpmath.catalan)) < 1e-15


def test_catalan_accelerated_series():
    # averaging consecutive partial sums of an alternating series (Euler step)
    n = 10 ** 6
    k = np.arange(n + 1, dtype=float)
    terms = (-1.0) ** k / (2 * k + 1) ** 2
    last = math.fsum(terms[:-1])
    estimate = last + 0.5 * terms[-1]
    assert abs(estimate - catalan_constant()) < 1e-14


def test_lerch_series():
    val = lerch_special()
    assert abs(val - float(mpmath.lerchphi(-1 / 3, 2, 0.5))) < 1e-14
    # first term is 4 and partial sums alternate around the limit
    s = 0.0
    for n in range(20):
        s += 4 * (-1) ** n / (3 ** n * (2 * n + 1) ** 2)
        assert (s > val) if n % 2 == 0 else (s < val)


BATTERY = [
    (lambda x: x * x, 0.0, 1.0, 1 / 3, None),
    (lambda x: math.log(1 / x), 0.0, 1.0, 1.0, "left"),
    (math.sin, 0.0, math.pi, 2.0, None),
    (math.exp, -1.0, 2.0, math.e ** 2 - math.exp(-1), None),
    (lambda x: 1 / math.sqrt(x), 0.0, 4.0, 4.0, "left"),
    (lambda x: 1 / math.sqrt(1 - x), 0.0, 1.0, 2.0, "right"),
    (lambda x: 1 / (1 + x * x), -1.0, 1.0, math.pi / 2, None),
    (lambda x: abs(x - 0.3), 0.0, 1.0, 0.29, None),
    (lambda x: math.log(x) * math.log(1 - x), 0.0, 1.0, 2 - math.pi ** 2 / 6, "both"),
    (lambda x: x ** 10, 0.0, 1.0, 1 / 11, None),
]


@pytest.mark.parametrize("f,a,b,exact,sing", BATTERY)
def test_integrate_battery(f, a, b, exact, sing):
    res = integrate(f, a, b, 1e-12, singular=sing, points=(0.3,) if a < 0.3 < b else ())
    assert abs(res.value - exact) <= max(1e-12, res.error_estimate) + 1e-15
    assert res.error_estimate >= 0
    assert res.evaluations > 0


def test_integrate_area_of_omega():
    # area of Omega as iterated integral: int_{-1/2}^{1/2} dx / sqrt(1 - x^2)
    res = integrate(lambda x: 1 / math.sqrt(1 - x * x), -0.5, 0.5)
    assert abs(res.value - math.pi / 3) < 1e-13


def test_integrate_budget_exhaustion():
    with pytest.raises(QuadratureError):
        integrate(lambda x: math.sin(1 / x) / x, 1e-6, 1.0, 1e-14, limit=5)


def test_integrate_bad_interval():
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0)
