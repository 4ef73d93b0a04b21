"""Real special functions: Gamma, Beta, sinc, and the test families f_p, g_alpha.

Gamma and log-Gamma use a Lanczos approximation (g = 7, nine terms) with the
reflection formula below 1/2.  Bessel J comes from scipy.special.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from .errors import DomainError

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_GAMMA_MAX = 171.6243769563027

# Bernoulli numbers B_0..B_16 for the asymptotic log-Gamma ratio.
_BERNOULLI = sp.bernoulli(16)
_RATIO_TERMS = 14


def _asarray(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def sinpi(x):
    """sin(pi x) with exact zeros at the integers."""
    x, scalar = _asarray(x)
    r = x - 2.0 * np.round(0.5 * x)  # r in [-1, 1]
    r = np.where(r > 0.5, 1.0 - r, np.where(r < -0.5, -1.0 - r, r))
    return _ret(np.sin(np.pi * r), scalar)


def _is_pole(x):
    return (x <= 0) & (x == np.floor(x))


def _lanczos_sum(z):
    a = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        a = a + _LANCZOS[i] / (z + i)
    return a


def gamma_fn(x):
    """Gamma function for real arguments."""
    x, scalar = _asarray(x)
    if np.any(_is_pole(x)):
        raise DomainError("gamma_fn: pole at a nonpositive integer")
    if np.any(x > _GAMMA_MAX):
        raise OverflowError("gamma_fn: result overflows for x > 171.62")
    out = np.empty_like(x)
    hi = x >= 0.5
    z = x[hi] - 1.0
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z+0.5) does not overflow before exp(-t) applies
    half = t ** (0.5 * (z + 0.5))
    out[hi] = math.sqrt(2.0 * math.pi) * half * (half * np.exp(-t)) * _lanczos_sum(z)
    lo = ~hi
    if np.any(lo):
        xl = x[lo]
        out[lo] = np.pi / (sinpi(xl) * gamma_fn(1.0 - xl))
    return _ret(out, scalar)


def lgamma_fn(x):
    """log|Gamma(x)|."""
    x, scalar = _asarray(x)
    if np.any(_is_pole(x)):
        raise DomainError("lgamma_fn: pole at a nonpositive integer")
    out = np.empty_like(x)
    hi = x >= 0.5
    z = x[hi] - 1.0
    t = z + _LANCZOS_G + 0.5
    out[hi] = _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(_lanczos_sum(z))
    lo = ~hi
    if np.any(lo):
        xl = x[lo]
        out[lo] = math.log(math.pi) - np.log(np.abs(sinpi(xl))) - lgamma_fn(1.0 - xl)
    return _ret(out, scalar)


def _bernoulli_poly(k, a):
    coeffs = [math.comb(k, j) * _BERNOULLI[j] for j in range(k + 1)]
    return sum(c * a ** (k - j) for j, c in enumerate(coeffs))


def log_gamma_ratio(z, a, b):
    """log Gamma(z + a) - log Gamma(z + b) for z + a, z + b > 0.

    Large z uses the Bernoulli-polynomial expansion of the difference, which
    avoids cancelling two huge log-Gamma values.
    """
    z, scalar = _asarray(z)
    out = np.empty_like(z)
    big = z > 30.0 + 4.0 * max(abs(a), abs(b))
    zb = z[big]
    if zb.size:
        s = (a - b) * np.log(zb)
        for k in range(2, _RATIO_TERMS + 1):
            c = (-1) ** k * (_bernoulli_poly(k, a) - _bernoulli_poly(k, b)) / (k * (k - 1))
            if c:
                s = s + c / zb ** (k - 1)
        out[big] = s
    small = ~big
    if np.any(small):
        zs = z[small]
        out[small] = lgamma_fn(zs + a) - lgamma_fn(zs + b)
    return _ret(out, scalar)


def beta_fn(a, b):
    """Euler Beta function B(a, b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise DomainError("beta_fn needs positive arguments")
    if a + b < 170.0:
        return float(gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b))
    return math.exp(lgamma_fn(a) + lgamma_fn(b) - lgamma_fn(a + b))


def sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    x, scalar = _asarray(x)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(safe) / safe)
    return _ret(out, scalar)


def _fp_order(p):
    if p <= 0:
        raise DomainError("f_p needs p > 0")
    return 2.0 / p - 0.5


def f_p_eval(p, x):
    """Band-limited test function with spectral density (1 - xi^2/pi^2)^(2/p - 1).

    Normalized so f_p(0) = 1.  Closed form Gamma(nu+1) (2/z)^nu J_nu(z) with
    z = pi x and nu = 2/p - 1/2; a power series covers small z.
    """
    nu = _fp_order(p)
    x, scalar = _asarray(x)
    z = np.pi * np.abs(x)
    out = np.empty_like(z)
    near = z < 2.0
    if np.any(near):
        w = -0.25 * z[near] ** 2
        term = np.ones_like(w)
        acc = np.ones_like(w)
        for k in range(1, 40):
            term = term * w / ((nu + k) * k)
            acc = acc + term
        out[near] = acc
    far = ~near
    if np.any(far):
        zf = z[far]
        log_pref = lgamma_fn(nu + 1.0) + nu * np.log(2.0 / zf)
        out[far] = np.exp(log_pref) * sp.jv(nu, zf)
    return _ret(out, scalar)


def f_p_integral(p, x, nodes=None):
    """f_p from its defining Fourier integral (independent cross-check path).

    Uses Gauss-Jacobi nodes for the weight (1 - t^2)^(2/p - 1) on [-1, 1], so
    the endpoint singularity present for p > 2 is absorbed by the rule.
    """
    _fp_order(p)
    x, scalar = _asarray(x)
    a = 2.0 / p - 1.0
    if nodes is None:
        nodes = int(60 + 2.0 * np.pi * np.max(np.abs(x), initial=0.0))
    t, w = sp.roots_jacobi(nodes, a, a)
    vals = np.cos(np.pi * np.multiply.outer(x, t)) @ w
    out = vals / beta_fn(0.5, 2.0 / p)
    return _ret(np.asarray(out), scalar)


def f_p_zeros(p, upto, step=0.05):
    """Positive zeros of f_p below ``upto``."""
    from .numerics import bracketed_roots

    grid = np.arange(step, upto + step, step)
    return bracketed_roots(lambda x: f_p_eval(p, x), grid)


def log_abs_g_alpha(alpha, x):
    """(log|g_alpha(x)|, sign g_alpha(x)) for the Gamma-quotient family."""
    if alpha <= 0:
        raise DomainError("g_alpha needs alpha > 0")
    x, scalar = _asarray(x)
    ax = np.abs(x)
    logabs = np.empty_like(ax)
    sign = np.ones_like(ax)
    near = ax < alpha - 0.25
    if np.any(near):
        xn = ax[near]
        logabs[near] = 2.0 * lgamma_fn(alpha) - lgamma_fn(alpha - xn) - lgamma_fn(alpha + xn)
    far = ~near
    if np.any(far):
        xf = ax[far]
        s = sinpi(alpha - xf)
        with np.errstate(divide="ignore"):
            logabs[far] = (2.0 * lgamma_fn(alpha) - math.log(math.pi)
                           + log_gamma_ratio(xf, 1.0 - alpha, alpha) + np.log(np.abs(s)))
        sign[far] = np.sign(s)
    if scalar:
        return float(logabs), float(sign)
    return logabs, sign


def g_alpha_eval(alpha, x):
    """g_alpha(x) = Gamma(alpha)^2 / (Gamma(alpha - x) Gamma(alpha + x)).

    Equals prod_{n>=1} (1 - x^2/(n + alpha - 1)^2); g_1 is sinc(pi x) and
    g_{1/2} is cos(pi x).  Past |x| = alpha - 1/4 the reflection form is used.
    """
    logabs, sign = log_abs_g_alpha(alpha, x)
    return sign * np.exp(logabs)


def g_script(alpha, x):
    """cos(pi alpha x) / (1 - 4 (alpha x)^2), continuous at alpha x = +-1/2."""
    x, scalar = _asarray(x)
    u = np.abs(alpha * x)
    s = u - 0.5
    patch = np.abs(4.0 * u * u - 1.0) < 1e-4
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.cos(np.pi * u) / (1.0 - 4.0 * u * u)
    # near u = 1/2 the quotient equals (pi/4) sinc(pi s) / (1 + s) exactly
    out = np.where(patch, 0.25 * np.pi * sinc(np.pi * s) / (1.0 + s), direct)
    return _ret(out, scalar)
