import math
import warnings

import numpy as np
import pytest

from pwconst.errors import BracketError, ContractError, ConvergenceError, DomainError
from pwconst.numerics import (MultimodalityWarning, QuadratureConfig, bracketed_roots, find_root,
                              integrate_finite, integrate_semiinfinite, minimize_scalar)
from pwconst.special import gamma_fn, sinc

rng = np.random.default_rng(7)
SINC2 = lambda x: sinc(np.pi * x) ** 2


def test_finite_basic():
    assert integrate_finite(lambda x: np.ones_like(x), 0.0, 1.0).value == pytest.approx(1.0, abs=1e-14)
    exact = 6 * math.sqrt(math.pi) / gamma_fn(4.5)
    res = integrate_finite(lambda x: (1 - x * x) ** 3, -1.0, 1.0)
    assert res.value == pytest.approx(exact, abs=1e-13)
    assert res.error_estimate >= 0 and res.nodes_used >= 1


def test_sinc_square_halves():
    cfg = QuadratureConfig(1e-13, 1e-13)
    head = integrate_finite(SINC2, 0.0, 1.0, cfg).value
    tail = integrate_semiinfinite(SINC2, 1.0, cfg.with_tail(2.0)).value
    assert head + tail == pytest.approx(0.5, abs=1e-11)


def test_semiinfinite_powers():
    cfg = QuadratureConfig(1e-12, 1e-12)
    assert integrate_semiinfinite(lambda x: x ** -2.0, 1.0, cfg.with_tail(2.0)).value == pytest.approx(1.0, abs=1e-11)
    assert integrate_semiinfinite(lambda x: x ** -3.0, 2.0, cfg.with_tail(3.0)).value == pytest.approx(0.125, abs=1e-12)


def test_semiinfinite_oscillatory_with_breakpoints():
    # int_0^inf |sin(pi x)|^3/(1+x)^2: kinks at the integers
    f = lambda x: np.abs(np.sin(np.pi * x)) ** 3 / (1 + x) ** 2
    res = integrate_semiinfinite(f, 0.0, QuadratureConfig(1e-12, 1e-12).with_tail(2.0),
                                 breakpoints=lambda up: np.arange(1.0, up))
    import mpmath as mp
    mp.mp.dps = 20
    ref = sum(mp.quad(lambda t: abs(mp.sin(mp.pi * t)) ** 3 / (1 + t) ** 2, [k, k + 1]) for k in range(400))
    # analytic tail past 400: average of |sin|^3 is 4/(3 pi)
    ref += 4 / (3 * mp.pi) / 401
    assert res.value == pytest.approx(float(ref), abs=2e-7)


def test_semiinfinite_contracts():
    with pytest.raises(ContractError):
        integrate_semiinfinite(lambda x: x ** -2, 1.0, QuadratureConfig())
    with pytest.raises(DomainError):
        integrate_semiinfinite(lambda x: x ** -1, 1.0, QuadratureConfig().with_tail(1.0))


def test_finite_convergence_error_carries_best():
    with pytest.raises(ConvergenceError) as info:
        integrate_finite(lambda x: np.sin(1 / x) / x, 1e-9, 1.0, QuadratureConfig(1e-14, 1e-14, max_depth=3))
    assert info.value.best is not None


def test_additivity_random_smooth():
    for _ in range(5):
        c = rng.normal(size=4)
        f = lambda x, c=c: c[0] * np.sin(3 * x + c[1]) + c[2] * np.exp(-x * x) + c[3] * x ** 3
        a, m, b = np.sort(rng.uniform(-3, 3, 3))
        whole = integrate_finite(f, a, b)
        parts = [integrate_finite(f, a, m), integrate_finite(f, m, b)]
        tol = 2 * (whole.error_estimate + sum(p.error_estimate for p in parts)) + 1e-14
        assert abs(whole.value - sum(p.value for p in parts)) <= tol


@pytest.mark.parametrize("deg", [0, 5, 10, 15, 20])
def test_error_estimate_honest_on_polynomials(deg):
    coeffs = rng.normal(size=deg + 1)
    poly = np.polynomial.Polynomial(coeffs)
    exact = poly.integ()(2.0) - poly.integ()(-1.0)
    res = integrate_finite(poly, -1.0, 2.0)
    assert abs(res.value - exact) <= res.error_estimate + 1e-12 * max(1.0, abs(exact))


def test_minimize_scalar_examples():
    assert minimize_scalar(lambda x: (x - 2) ** 2, 0, 5).x == pytest.approx(2.0, abs=1e-7)
    x, fx = minimize_scalar(math.cos, 2, 4)
    assert x == pytest.approx(math.pi, abs=1e-7) and fx == pytest.approx(-1.0, abs=1e-12)
    assert minimize_scalar(lambda x: abs(x - 0.3), -1.7, 2.3, tol=1e-9).x == pytest.approx(0.3, abs=1e-8)


def test_minimize_scalar_flags_multimodal_and_nan():
    with pytest.warns(MultimodalityWarning):
        res = minimize_scalar(lambda x: math.cos(3 * x), 0, 10)
    assert res.multimodal
    with pytest.raises(FloatingPointError):
        minimize_scalar(lambda x: float("nan"), 0, 1)


def test_find_root_examples():
    assert find_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert find_root(math.sin, 3, 3.3) == pytest.approx(math.pi, abs=1e-12)
    # badly scaled: regula falsi alone would crawl
    assert find_root(lambda x: x ** 9 - 1e-9, 0, 1) == pytest.approx(0.1, rel=1e-10)
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1, -1, 1)


def test_bracketed_roots():
    z = bracketed_roots(np.sin, np.linspace(0.5, 10, 200))
    assert np.allclose(z, np.pi * np.arange(1, 4), atol=1e-12)


def test_config_validation():
    with pytest.raises(ContractError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(ContractError):
        QuadratureConfig(max_depth=0)
