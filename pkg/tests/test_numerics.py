import math

import numpy as np
import pytest
from scipy.integrate import quad

from sievebounds.numerics import (EXP_GAMMA, EXP_NEG_GAMMA, NoBracketError, QuadratureConfig,
                                  QuadratureError, cumulative_trapezoid_from_right, find_root,
                                  incomplete_pole_integral, integrate)


def test_gamma_constants():
    assert EXP_GAMMA * EXP_NEG_GAMMA == pytest.approx(1.0, abs=1e-15)
    assert EXP_GAMMA == pytest.approx(1.7810724179901979, abs=1e-15)


@pytest.mark.parametrize("f,a,b,exact", [
    (lambda t: t**3 - 2 * t, 0.0, 2.0, 0.0),
    (math.exp, 0.0, 1.0, math.e - 1),
    (lambda t: 1 / t, 1.0, 5.0, math.log(5)),
    (lambda t: math.log(t) if t > 0 else -math.inf, 0.0, 1.0, -1.0),   # log singularity at the endpoint
])
def test_integrate_closed_forms(f, a, b, exact):
    assert integrate(f, a, b) == pytest.approx(exact, abs=1e-9)


def test_integrate_rejects_interior_singularity():
    with pytest.raises(QuadratureError):
        integrate(lambda t: 1 / (t - 0.5) if t != 0.5 else float("inf"), 0.0, 1.0)


def test_integrate_reports_depth_exhaustion():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda t: math.sin(1 / t) if t else 0.0, 0.0, 1.0,
                  QuadratureConfig(abs_tol=1e-14, max_depth=5))
    assert math.isfinite(info.value.estimate)


def test_integrate_argument_checks():
    assert integrate(math.sin, 1.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)


def test_find_root():
    r = find_root(lambda x: x * x - 2, 1.0, 2.0)
    assert r == pytest.approx(math.sqrt(2), abs=1e-12)
    with pytest.raises(NoBracketError):
        find_root(lambda x: x * x + 1, -1.0, 1.0)


@pytest.mark.parametrize("alpha", [2.0, 3.0, 3.5, 4.0])
@pytest.mark.parametrize("x", [0.0, 0.2, 0.7, 0.95])
def test_incomplete_pole_integral(alpha, x):
    exact = quad(lambda t: t ** (alpha - 1) / (1 - t), 0, x)[0]
    assert float(incomplete_pole_integral(x, alpha)) == pytest.approx(exact, abs=1e-10)


def test_incomplete_pole_integral_domain():
    with pytest.raises(ValueError):
        incomplete_pole_integral(1.0, 2.0)


def test_cumulative_from_right():
    x = np.linspace(0, 1, 101)
    G = cumulative_trapezoid_from_right(2 * x, x)
    assert np.allclose(G, 1 - x**2, atol=1e-12)
