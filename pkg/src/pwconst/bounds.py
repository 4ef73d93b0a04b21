"""Lower and upper bounds for the point-evaluation constant C_p.

A lower bound comes from any even test function f with f(0) = 1 via
C_p >= 1 / ||f||_p^p.  Upper bounds come from closed-form estimates.  The
small-p constant c_0 = lim (2/p) C_p gets its own pair of bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import xlogy

from .errors import ContractError, ConvergenceError, DomainError
from .numerics import (QuadratureConfig, QuadratureResult, integrate_finite,
                       integrate_semiinfinite, minimize_scalar)
from .special import f_p_eval, f_p_zeros, log_abs_g_alpha, sinc

LOWER, UPPER = "lower", "upper"


@dataclass(frozen=True)
class BoundRecord:
    p: float
    value: float
    side: str
    method: str
    err: float = 0.0


class OptimizedConstant(NamedTuple):
    argument: float
    value: float


def _quad_or_best(fn, *args, **kw) -> QuadratureResult:
    try:
        return fn(*args, **kw)
    except ConvergenceError as exc:
        if exc.best is None:
            raise
        return exc.best


def even_norm_pp(f: Callable, p: float, tail_exponent: float, breakpoints=None,
                 cfg: Optional[QuadratureConfig] = None, strict: bool = True) -> QuadratureResult:
    """||f||_p^p for an even f whose modulus decays like x^-tail_exponent."""
    cfg = cfg or QuadratureConfig()
    beta = p * tail_exponent
    if beta <= 1.0:
        raise DomainError(f"|f|^p decays like x^-{beta:g}: not integrable")
    g = lambda x: np.abs(f(x)) ** p
    run = integrate_semiinfinite if strict else (
        lambda *a, **k: _quad_or_best(integrate_semiinfinite, *a, **k))
    half = run(g, 0.0, cfg.with_tail(beta), breakpoints=breakpoints)
    return QuadratureResult(2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


def _lower_record(p, norm: QuadratureResult, method):
    value = 1.0 / norm.value
    return BoundRecord(p, value, LOWER, method, value * norm.error_estimate / norm.value)


def lower_from_test_function(p: float, f: Callable, tail_exponent: float,
                             breakpoints=None, method: str = "test-function",
                             cfg: Optional[QuadratureConfig] = None) -> BoundRecord:
    """C_p >= 1/||f||_p^p for an even f with f(0) = 1.

    ``breakpoints`` (zeros of f, an array or a callable ``upper -> zeros``)
    keep kinks of |f|^p off the quadrature nodes.
    """
    f0 = float(np.atleast_1d(f(np.array([0.0])))[0])
    if abs(f0 - 1.0) > 1e-12:
        raise ContractError(f"test function must satisfy f(0) = 1, got {f0!r}")
    probe = np.array([0.37, 1.3, 4.7])
    fp, fm = np.asarray(f(probe)), np.asarray(f(-probe))
    if np.max(np.abs(fp - fm)) > 1e-10 * max(1.0, float(np.max(np.abs(fp)))):
        raise ContractError("test function must be even")
    norm = even_norm_pp(f, p, tail_exponent, breakpoints, cfg)
    return _lower_record(p, norm, method)


def lower_sweep_fp(p: float) -> BoundRecord:
    """Lower bound from the test function f_p (decays like x^(-2/p))."""
    if not 0.5 <= p <= 8.0:
        raise DomainError("lower_sweep_fp covers 0.5 <= p <= 8")
    return lower_from_test_function(p, lambda x: f_p_eval(p, x), 2.0 / p,
                                    breakpoints=lambda upper: f_p_zeros(p, upper),
                                    method="fp-test")


def _g_alpha_min(p):
    return 0.5 + 0.5 / p


def g_alpha_norm_pp(p: float, alpha: float, strict: bool = True) -> QuadratureResult:
    if alpha <= _g_alpha_min(p):
        raise DomainError(f"||g_alpha||_p diverges for alpha <= 1/2 + 1/(2p) = {_g_alpha_min(p):g}")

    def mod_p(x):
        logabs, _ = log_abs_g_alpha(alpha, x)
        with np.errstate(under="ignore"):
            return np.exp(p * logabs)

    zeros = lambda upper: np.arange(alpha, upper, 1.0)
    cfg = QuadratureConfig().with_tail(p * (2.0 * alpha - 1.0))
    run = integrate_semiinfinite if strict else (
        lambda *a, **k: _quad_or_best(integrate_semiinfinite, *a, **k))
    half = run(mod_p, 0.0, cfg, breakpoints=zeros)
    return QuadratureResult(2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


def lower_g_alpha(p: float, alpha: float) -> BoundRecord:
    """Lower bound from g_alpha (|g_alpha(x)| ~ x^(1 - 2 alpha))."""
    return _lower_record(p, g_alpha_norm_pp(p, alpha), "g-alpha-test")


def lower_g_alpha_opt(p: float, tol: float = 1e-6) -> BoundRecord:
    """Best g_alpha lower bound over alpha in (1/2 + 1/(2p) + 1e-3, 1/2 + 4/p + 2)."""
    lo = _g_alpha_min(p) + 1e-3
    hi = 0.5 + 4.0 / p + 2.0

    def objective(alpha):
        return -1.0 / g_alpha_norm_pp(p, alpha, strict=False).value

    best = minimize_scalar(objective, lo, hi, tol=tol)
    rec = lower_g_alpha(p, best.x)
    return BoundRecord(p, rec.value, LOWER, f"g-alpha-test(alpha={best.x:.6f})", rec.err)


def korevaar_upper(p: float) -> BoundRecord:
    """(p/2)(1 - 2(p-2) int_1^inf sinc^2(pi x)(4x+p-2)/(2x+p-2)^2 dx), 2 <= p <= 4."""
    if not 2.0 <= p <= 4.0:
        raise DomainError("korevaar_upper covers 2 <= p <= 4")
    if p == 2.0:
        return BoundRecord(p, 1.0, UPPER, "korevaar", 0.0)
    integrand = lambda x: sinc(np.pi * x) ** 2 * (4 * x + p - 2) / (2 * x + p - 2) ** 2
    res = integrate_semiinfinite(integrand, 1.0, QuadratureConfig(1e-13, 1e-12).with_tail(3.0))
    factor = p * (p - 2.0)
    return BoundRecord(p, 0.5 * p - factor * res.value, UPPER, "korevaar", factor * res.error_estimate)


def pw4_upper() -> BoundRecord:
    return BoundRecord(4.0, 23.0 / 12.0, UPPER, "pw4", 0.0)


def crude_upper(p: float) -> BoundRecord:
    if p <= 0:
        raise DomainError("crude_upper needs p > 0")
    return BoundRecord(p, 25.0 * p / 18.0, UPPER, "crude-25/18", 0.0)


def ceil_upper(p: float) -> BoundRecord:
    if p <= 2:
        raise DomainError("ceil_upper needs p > 2")
    return BoundRecord(p, float(math.ceil(p / 2.0 - 1e-12)), UPPER, "ceil-power-trick", 0.0)


def _integer_ratio(big, small):
    k = big / small
    kr = round(k)
    if kr >= 2 and abs(k - kr) <= 1e-9 * kr:
        return int(kr)
    return None


def power_trick_propagate(records: Iterable[BoundRecord], targets: Sequence[float]) -> List[BoundRecord]:
    """Transfer bounds with C_{kp} <= k C_p for integers k >= 2.

    Upper bounds move up (p -> kp, value * k); lower bounds move down
    (kp -> p, value / k).
    """
    out = []
    records = list(records)
    for q in targets:
        for r in records:
            if r.side == UPPER:
                k = _integer_ratio(q, r.p)
                if k:
                    out.append(BoundRecord(q, k * r.value, UPPER, "power-trick-propagated", k * r.err))
            else:
                k = _integer_ratio(r.p, q)
                if k:
                    out.append(BoundRecord(q, r.value / k, LOWER, "power-trick-propagated", r.err / k))
    return out


def envelope_infinity(p: float) -> float:
    """Large-p centering value sqrt(pi p / 2)."""
    if p <= 0:
        raise DomainError("envelope_infinity needs p > 0")
    return math.sqrt(math.pi * p / 2.0)


def c0_upper(q: float) -> float:
    """Upper bound for c_0 from the Hoelder exponent q > 1."""
    if q <= 1.0:
        raise DomainError("c0_upper needs q > 1")
    qs = q / (q - 1.0)
    inner = integrate_finite(lambda x: sinc(np.pi * x) ** qs, 0.0, 0.5,
                             QuadratureConfig(1e-14, 1e-14)).value
    inner += 2.0 ** (qs - 1.0) / (np.pi ** qs * (qs - 1.0))
    return 2.0 ** q / q * inner ** (q - 1.0)


def c0_upper_opt(tol: float = 1e-7) -> OptimizedConstant:
    best = minimize_scalar(c0_upper, 1.1, 3.0, tol=tol)
    return OptimizedConstant(best.x, best.fun)


def _c0_lower_parts(gamma):
    def near(x):
        return np.exp(-gamma * (xlogy(1.0 - x, 1.0 - x) + xlogy(1.0 + x, 1.0 + x)))

    def far(x):
        return np.exp(gamma * (xlogy(x - 1.0, x - 1.0) - xlogy(x + 1.0, x + 1.0)))

    cfg = QuadratureConfig(1e-13, 1e-13)
    i1 = integrate_finite(near, 0.0, 1.0, cfg)
    i2 = _quad_or_best(integrate_semiinfinite, far, 1.0, cfg.with_tail(2.0 * gamma))
    return i1, i2


def c0_lower(gamma: float) -> float:
    """Lower bound for c_0 from the g_alpha family with alpha = 1/2 + gamma/p, p -> 0."""
    if gamma <= 0.5:
        raise DomainError("c0_lower needs gamma > 1/2")
    i1, i2 = _c0_lower_parts(gamma)
    return 1.0 / (gamma * (i1.value + i2.value))


def c0_lower_opt(tol: float = 1e-7) -> OptimizedConstant:
    best = minimize_scalar(lambda g: -c0_lower(g), 0.7, 1.3, tol=tol)
    return OptimizedConstant(best.x, -best.fun)


ALL_METHODS = ("fp-test", "g-alpha-test", "korevaar", "pw4", "crude-25/18",
               "ceil-power-trick", "power-trick-propagated")


def bound_records(p: float, methods: Sequence[str] = ALL_METHODS) -> List[BoundRecord]:
    """Every applicable bound at a single p (without propagation)."""
    recs = []
    if "fp-test" in methods and 0.5 <= p <= 8.0:
        recs.append(lower_sweep_fp(p))
    if "g-alpha-test" in methods:
        recs.append(lower_g_alpha_opt(p))
    if "korevaar" in methods and 2.0 <= p <= 4.0:
        recs.append(korevaar_upper(p))
    if "pw4" in methods and p == 4.0:
        recs.append(pw4_upper())
    if "crude-25/18" in methods:
        recs.append(crude_upper(p))
    if "ceil-power-trick" in methods and p > 2.0:
        recs.append(ceil_upper(p))
    return recs


def sweep(p_grid: Sequence[float], methods: Sequence[str] = ALL_METHODS,
          workers: int = 1) -> List[BoundRecord]:
    """Best lower and best upper record at each grid point, sorted by p.

    Rows are independent; ``workers > 1`` evaluates them on a thread pool
    (results do not depend on the worker count).
    """
    grid = sorted(float(p) for p in p_grid)
    if any(not 0 < p <= 8.0 for p in grid):
        raise DomainError("sweep grid must lie in (0, 8]")
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            per_p = dict(zip(grid, pool.map(lambda p: bound_records(p, methods), grid)))
    else:
        per_p = {p: bound_records(p, methods) for p in grid}
    if "power-trick-propagated" in methods:
        pool = [r for recs in per_p.values() for r in recs]
        for r in power_trick_propagate(pool, grid):
            per_p[r.p].append(r)
    rows = []
    for p in grid:
        recs = per_p[p]
        lows = [r for r in recs if r.side == LOWER]
        ups = [r for r in recs if r.side == UPPER]
        if lows:
            rows.append(max(lows, key=lambda r: r.value))
        if ups:
            rows.append(min(ups, key=lambda r: r.value))
    return rows
