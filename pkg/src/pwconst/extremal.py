"""Numerical search for the extremal function of the point-evaluation problem.

Candidates are even, real entire functions of exponential type pi with
f(0) = 1, encoded by their positive zeros: N free zeros t_1 < ... < t_N
followed by the lattice N + alpha, N + alpha + 1, ...  In product form

    phi(x) = prod_{n<=N} (1 - x^2/t_n^2) * g_{alpha+N}(x),

because g_{alpha+N} is exactly the product over the lattice zeros beyond
index N.  Everything is evaluated in log-modulus/sign form, so no ratio of
vanishing factors is ever formed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import ConstructionError, ContractError, DomainError, ConvergenceError
from .numerics import QuadratureConfig, QuadratureResult, integrate_finite, integrate_semiinfinite
from .special import g_script, log_abs_g_alpha, sinc

ALPHA_MAX = 2.5
SCHEMA_VERSION = 1
_NORM_CFG = QuadratureConfig(1e-13, 1e-12)


@dataclass(frozen=True)
class ZeroSequence:
    """Positive zeros: free ``t`` then the lattice n + alpha - 1 for n > N."""

    t: Tuple[float, ...]
    alpha: float

    def __post_init__(self):
        t = tuple(float(v) for v in np.atleast_1d(np.asarray(self.t, dtype=float)))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "alpha", float(self.alpha))
        if not 0.0 < self.alpha <= ALPHA_MAX:
            raise ContractError(f"alpha must lie in (0, {ALPHA_MAX}], got {self.alpha}")
        arr = np.asarray(t)
        if arr.size:
            if not np.all(np.isfinite(arr)) or arr[0] <= 0.0:
                raise ContractError("free zeros must be positive and finite")
            if np.any(np.diff(arr) <= 0.0):
                raise ContractError("free zeros must be strictly increasing")
            if arr[-1] >= self.N + self.alpha:
                raise ContractError(
                    f"t_N = {arr[-1]} must stay below the first lattice zero {self.N + self.alpha}")

    @property
    def N(self) -> int:
        return len(self.t)

    @classmethod
    def lattice(cls, alpha: float = 1.0) -> "ZeroSequence":
        return cls((), alpha)

    def free(self) -> np.ndarray:
        return np.asarray(self.t, dtype=float)

    def zeros_below(self, upper: float) -> np.ndarray:
        tail = np.arange(self.N + self.alpha, upper, 1.0)
        return np.concatenate([self.free(), tail])

    def first_zeros(self, count: int) -> np.ndarray:
        extra = max(count - self.N, 0)
        return np.concatenate([self.free(), self.N + self.alpha + np.arange(extra)])[:count]

    def embed(self, n_free: int) -> "ZeroSequence":
        """Same function, with the first ``n_free`` zeros declared free."""
        if n_free < self.N:
            raise ContractError("embed can only enlarge the free block")
        return ZeroSequence(tuple(self.first_zeros(n_free)), self.alpha)

    def is_zero(self, s: float, tol: float = 1e-12) -> bool:
        if self.N and np.min(np.abs(self.free() - s)) <= tol:
            return True
        k = s - (self.N + self.alpha)
        return k > -tol and abs(k - round(k)) <= tol

    def to_dict(self) -> dict:
        return {"N": self.N, "alpha": self.alpha, "t": list(self.t)}

    @classmethod
    def from_dict(cls, data: dict) -> "ZeroSequence":
        t = data.get("t", data.get("zeros", ()))
        return cls(tuple(t), data["alpha"])


def load_zero_sequence(path: str) -> ZeroSequence:
    """Read zeros from a search-result JSON (or any JSON with ``t`` and ``alpha``)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return ZeroSequence.from_dict(data.get("zeros", data) if isinstance(data.get("zeros"), dict) else data)


def _log_abs_phi(t, alpha, x):
    x = np.asarray(x, dtype=float)
    logabs, sign = log_abs_g_alpha(alpha + len(t), x)
    logabs = np.array(logabs, dtype=float, ndmin=1)
    sign = np.array(sign, dtype=float, ndmin=1)
    xs = np.atleast_1d(x)
    with np.errstate(divide="ignore"):
        for tn in t:
            u = xs / tn
            fac = (1.0 - u) * (1.0 + u)
            logabs = logabs + np.log(np.abs(fac))
            sign = sign * np.sign(fac)
    if x.ndim == 0:
        return float(logabs[0]), float(sign[0])
    return logabs, sign


def log_abs_phi(zs: ZeroSequence, x):
    """(log|phi(x)|, sign phi(x))."""
    return _log_abs_phi(zs.t, zs.alpha, x)


def phi_eval(zs: ZeroSequence, x):
    """phi(x) for the function encoded by ``zs``; phi(0) = 1."""
    logabs, sign = log_abs_phi(zs, x)
    with np.errstate(under="ignore"):
        return sign * np.exp(logabs)


def _alpha_floor(p):
    # |phi|^p decays like x^-(p(2 alpha - 1)); keep the exponent at least 1.1
    return 0.5 + 0.55 / p


def _check_tail(p, alpha, what="||phi||_p"):
    beta = p * (2.0 * alpha - 1.0)
    if beta <= 1.0:
        raise DomainError(f"{what} diverges: |phi|^p decays like x^-{beta:g}")
    return beta


def _zero_points(t, alpha):
    n = len(t)
    t = np.sort(np.asarray(t, dtype=float))
    return lambda upper: np.concatenate([t[t < upper], np.arange(n + alpha, upper, 1.0)])


def _half_integral(f, beta, t, alpha, cfg, strict):
    try:
        return integrate_semiinfinite(f, 0.0, cfg.with_tail(beta), breakpoints=_zero_points(t, alpha))
    except ConvergenceError as exc:
        if strict or exc.best is None:
            raise
        return exc.best


def _norm_pp(t, alpha, p, cfg=_NORM_CFG, strict=True) -> QuadratureResult:
    beta = _check_tail(p, alpha)

    def mod_p(x):
        logabs, _ = _log_abs_phi(t, alpha, x)
        with np.errstate(under="ignore"):
            return np.exp(p * logabs)

    half = _half_integral(mod_p, beta, t, alpha, cfg, strict)
    return QuadratureResult(2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


def norm_p(zs: ZeroSequence, p: float, cfg: Optional[QuadratureConfig] = None) -> QuadratureResult:
    """||phi||_p^p, integrated between consecutive zeros with a fitted tail."""
    if p <= 0:
        raise DomainError("norm_p needs p > 0")
    return _norm_pp(zs.t, zs.alpha, p, cfg or _NORM_CFG)


def _zero_moment(t, alpha, p, s, cfg=_NORM_CFG, strict=True) -> QuadratureResult:
    """int_R |phi|^p x/(x - s) dx for a positive zero s of phi.

    By evenness this equals -int_R |phi|^p x^2/(s^2 - x^2) dx; the factor
    1/(1 - x^2/s^2) is cancelled against |phi| in log space.
    """
    beta = _check_tail(p, alpha)

    def integrand(x):
        logabs, _ = _log_abs_phi(t, alpha, x)
        u = x / s
        r = (1.0 - u) * (1.0 + u)
        with np.errstate(divide="ignore", under="ignore", invalid="ignore"):
            val = np.sign(r) * u * u * np.exp(p * logabs - np.log(np.abs(r)))
        return np.where(np.isfinite(val), val, 0.0)

    half = _half_integral(integrand, beta, t, alpha, cfg, strict)
    return QuadratureResult(-2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


@dataclass
class OrthogonalityResiduals:
    """Stationarity residuals normalized by ||phi||_p^p.

    ``single[k]`` is int |phi|^p x/(x - s_k) for the k-th listed zero and
    ``pairs[(k, j)]`` is int |phi|^p x^2/((x - s_k)(x - s_j)).
    """

    zeros: np.ndarray
    single: np.ndarray
    pairs: Dict[Tuple[int, int], float] = field(default_factory=dict)

    def values(self) -> np.ndarray:
        return np.concatenate([self.single, np.fromiter(self.pairs.values(), float, len(self.pairs))])

    def max_abs(self) -> float:
        vals = self.values()
        return float(np.max(np.abs(vals))) if vals.size else 0.0


def orthogonality_residual(zs: ZeroSequence, p: float, zeros: Optional[Sequence[float]] = None,
                           pairs: bool = True) -> OrthogonalityResiduals:
    """Normalized residuals at the free zeros (or at the given zeros of phi)."""
    if p < 1.0:
        raise DomainError("orthogonality residuals need p >= 1")
    pts = zs.free() if zeros is None else np.asarray(zeros, dtype=float)
    for s in pts:
        if s <= 0 or not zs.is_zero(s):
            raise ContractError(f"{s} is not a positive zero of phi")
    norm = _norm_pp(zs.t, zs.alpha, p).value
    moments = np.array([_zero_moment(zs.t, zs.alpha, p, s).value for s in pts])
    res = OrthogonalityResiduals(pts, moments / norm)
    if pairs:
        for k in range(len(pts)):
            for j in range(k + 1, len(pts)):
                sk, sj = pts[k], pts[j]
                res.pairs[(k, j)] = float((sk * moments[k] - sj * moments[j]) / ((sk - sj) * norm))
    return res


def norm_gradient(zs: ZeroSequence, p: float) -> np.ndarray:
    """d ||phi||_p^p / d t_k for the free zeros."""
    t = zs.free()
    return np.array([-2.0 * p / s * _zero_moment(zs.t, zs.alpha, p, s).value for s in t])


# ---------------------------------------------------------------------------
# separation of zeros

@dataclass(frozen=True)
class SeparationCheck:
    name: str
    threshold: float
    observed: float
    passed: bool

    @property
    def margin(self) -> float:
        return self.observed - self.threshold


@dataclass
class SeparationReport:
    p: float
    checks: List[SeparationCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {c.name: {"threshold": c.threshold, "observed": c.observed, "passed": c.passed}
                for c in self.checks}


def separation_diagnostics(zs: ZeroSequence, p: float, count: Optional[int] = None) -> SeparationReport:
    """Compare the first zeros with the known separation thresholds."""
    zeros = zs.first_zeros(count or zs.N + 20)
    gaps = np.diff(zeros)
    min_gap = float(gaps.min()) if gaps.size else math.inf
    t1 = float(zeros[0])
    checks = [SeparationCheck("t1>=sqrt2/pi", math.sqrt(2.0) / math.pi, t1, t1 >= math.sqrt(2.0) / math.pi)]
    if 2.0 <= p <= 4.0:
        checks.append(SeparationCheck("t1>=2/pi", 2.0 / math.pi, t1, t1 >= 2.0 / math.pi))
        checks.append(SeparationCheck("gap>=2/3", 2.0 / 3.0, min_gap, min_gap >= 2.0 / 3.0))
    if p > 2.0:
        checks.append(SeparationCheck("gap>=3/5", 0.6, min_gap, min_gap >= 0.6))
    ratio = zeros * math.e / np.arange(1, zeros.size + 1)
    worst = float(ratio.min())
    checks.append(SeparationCheck("t_n>=n/e", 1.0, worst, worst >= 1.0))
    return SeparationReport(float(p), checks)


@dataclass(frozen=True)
class SeparationCertificate:
    A: float
    B: float
    delta: float
    bound: float        # delta * max(A, B)
    spectral_gap: float  # 1 - lambda_0(pi delta)

    @property
    def contradiction(self) -> bool:
        """True when the bound is too small to be compatible with the spectral gap."""
        return self.bound < self.spectral_gap


def separation_certificate(p: float, delta0: float, gamma: float, delta: float) -> Tuple[float, float]:
    """The constants (A, B) bounding 1 - lambda_0(pi delta) / delta."""
    if not p > 2.0:
        raise DomainError("separation_certificate needs p > 2")
    if delta <= 0 or delta0 <= 0:
        raise DomainError("delta and delta0 must be positive")
    if delta > 1.5 * delta0:
        raise DomainError("needs delta <= 3 delta0 / 2")
    if gamma < delta0:
        raise DomainError("needs gamma >= delta0")
    a = delta / delta0
    b = delta / (gamma + 0.5 * delta)

    def integrand(x):
        ratio = g_script(a, 1.0 - x) / g_script(a, x)
        inner = 2.0 * ((3.0 - 2.0 * x) / (1.0 + 2.0 * x)) ** (p - 1.0) * ratio ** p
        return (0.25 - x * x) * (2.0 - np.minimum(1.0, inner))

    A = 4.0 / 3.0 * integrate_finite(integrand, 0.0, 0.5, QuadratureConfig(1e-13, 1e-13)).value
    B = ((16.0 / 3.0 - 4.0 * math.log(3.0) + b * b * (4.0 + 3.0 * math.log(3.0)) / 3.0)
         / (math.sqrt(4.0 - b * b) + 2.0) ** 2)
    return A, B


def certificate_check(p: float, delta0: float, gamma: float, delta: float,
                      n_nodes: int = 256) -> SeparationCertificate:
    """(A, B) together with 1 - lambda_0(pi delta) for the contradiction test."""
    from .prolate import lambda0

    A, B = separation_certificate(p, delta0, gamma, delta)
    gap = 1.0 - lambda0(math.pi * delta, n_nodes).lambda0
    return SeparationCertificate(A, B, delta, delta * max(A, B), gap)


# ---------------------------------------------------------------------------
# zero-indexed integral identities

def _cell_index(zs: ZeroSequence, x):
    """Number of positive zeros <= x (so x lies in (t_n, t_{n+1}) with t_0 = 0)."""
    n_free = np.searchsorted(zs.free(), x, side="right")
    tail = np.floor(x - (zs.N + zs.alpha)) + 1.0
    return np.where(x >= zs.N + zs.alpha, zs.N + tail, n_free).astype(float)


def representation_check(zs: ZeroSequence, q: float, cfg: Optional[QuadratureConfig] = None) -> QuadratureResult:
    """2 sum_n int_{t_n}^{t_{n+1}} |phi|^q sin(pi q (x - n))/(pi x) dx; equals |phi(0)|^q = 1."""
    if q <= 0:
        raise DomainError("representation_check needs q > 0")
    if zs.alpha <= 0.5:
        raise DomainError("the zero-indexed sum diverges for alpha <= 1/2")
    beta = 1.0 + q * (2.0 * zs.alpha - 1.0)
    cfg = cfg or QuadratureConfig(1e-12, 1e-12)

    def integrand(x):
        logabs, _ = log_abs_phi(zs, x)
        n = _cell_index(zs, x)
        # q sinc(pi q x) on the first cell keeps x = 0 regular
        kern = np.where(n == 0, q * sinc(np.pi * q * x),
                        np.sin(np.pi * q * (x - n)) / (np.pi * np.where(x == 0, 1.0, x)))
        with np.errstate(under="ignore"):
            return np.exp(q * logabs) * kern

    points = _zero_points(zs.t, zs.alpha)
    half = integrate_semiinfinite(integrand, 0.0, cfg.with_tail(beta), breakpoints=points)
    return QuadratureResult(2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


def kernel_K(p: float, zs: ZeroSequence, x):
    """K(x) = sin((p/2) pi (x - n))/(pi x) on (t_n, t_{n+1}), extended evenly."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    n = _cell_index(zs, ax)
    h = 0.5 * p
    out = np.where(n == 0, h * sinc(np.pi * h * ax),
                   np.sin(np.pi * h * (ax - n)) / (np.pi * np.where(ax == 0, 1.0, ax)))
    return float(out) if out.ndim == 0 else out


def kplus_bound(p: float, zs: ZeroSequence) -> QuadratureResult:
    """2 int_0^inf max(K, 0)^2 dx.

    Only an upper bound for the point-evaluation constant when ``zs`` are the
    exact extremal zeros; for other zero sets it is a diagnostic.
    """
    if p < 1.0:
        raise DomainError("kplus_bound needs p >= 1")
    step = 2.0 / p
    zeros_of = _zero_points(zs.t, zs.alpha)

    def points(upper):
        edges = np.concatenate([[0.0], zeros_of(upper), [upper]])
        extra = []
        for n in range(len(edges) - 1):
            lo, hi = edges[n], edges[n + 1]
            k0 = math.floor((lo - n) / step) + 1
            k1 = math.ceil((hi - n) / step)
            extra.extend(n + k * step for k in range(k0, k1))
        return np.unique(np.concatenate([edges[1:-1], extra]))

    def integrand(x):
        return np.maximum(kernel_K(p, zs, x), 0.0) ** 2

    half = integrate_semiinfinite(integrand, 0.0, QuadratureConfig(1e-12, 1e-12).with_tail(2.0),
                                  breakpoints=points)
    return QuadratureResult(2.0 * half.value, 2.0 * half.error_estimate, half.nodes_used)


# ---------------------------------------------------------------------------
# p = 1 upper bound from the sign pattern

@dataclass(frozen=True)
class HBUpperBound:
    value: float
    inverse_norm: float
    quadrature_error: float
    window_error: float

    @property
    def error(self) -> float:
        return self.quadrature_error + self.window_error


def _sign_steps(zs: ZeroSequence):
    """Intervals [a_j, b_j] of [0, N + alpha] and the constant value of sign(phi) - sign(g_alpha)."""
    end = zs.N + zs.alpha
    lattice = np.arange(zs.alpha, end, 1.0)
    edges = np.unique(np.concatenate([[0.0, end], zs.free(), lattice]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    s_phi = np.array([(-1.0) ** np.count_nonzero(zs.free() < m) for m in mids])
    s_q = np.array([(-1.0) ** np.count_nonzero(lattice < m) for m in mids])
    return edges[:-1], edges[1:], s_phi - s_q


def hb_upper_p1(zs: ZeroSequence, eps: float = 1e-3) -> HBUpperBound:
    """Upper bound for the p = 1 constant from the sign pattern of phi.

    U = 1/||phi||_1 + (1/2 pi) int_{|xi| < pi(1 - eps)} |1 - Phi^(xi)| with
    Phi = sign(phi)/||phi||_1.  sign(phi) = Q + r where Q = sign(g_alpha) has a
    closed-form transform on (-pi, pi) and r is a compactly supported step
    function.
    """
    norm = _norm_pp(zs.t, zs.alpha, 1.0)
    a, b, c = _sign_steps(zs)
    # beyond the window both signs come from the same lattice
    probe = zs.N + zs.alpha + 0.5 + np.arange(4.0)
    lattice_sign = (-1.0) ** (np.floor(probe - zs.alpha) + 1.0)
    if np.any(np.sign(phi_eval(zs, probe)) != lattice_sign):
        raise ConstructionError("sign pattern of phi does not match the lattice beyond the free zeros")
    keep = c != 0
    a, b, c = a[keep], b[keep], c[keep]
    shift = zs.alpha - 0.5

    def phi_hat(xi):
        xi = np.asarray(xi, dtype=float)
        q_hat = 2.0 * shift * sinc(shift * xi) / np.cos(0.5 * xi)
        r_hat = 2.0 * (c[None, :] * (b * sinc(np.multiply.outer(xi, b))
                                     - a * sinc(np.multiply.outer(xi, a)))).sum(axis=1)
        return (q_hat + r_hat) / norm.value

    top = math.pi * (1.0 - eps)
    res = integrate_finite(lambda xi: np.abs(1.0 - phi_hat(xi)), 0.0, top, QuadratureConfig(1e-11, 1e-11))
    edge = np.linspace(top - 10 * eps, top, 21)
    # discarded slivers: width pi eps on each side, |1 - Phi^| <= 1 + |Phi^|
    sliver = eps * (1.0 + float(np.max(np.abs(phi_hat(edge)))))
    inv = 1.0 / norm.value
    value = inv + res.value / math.pi
    qerr = res.error_estimate / math.pi + inv * norm.error_estimate / norm.value
    return HBUpperBound(value, inv, qerr, sliver)


# ---------------------------------------------------------------------------
# the search

@dataclass
class ExtremalSearchResult:
    zeros: ZeroSequence
    p: float
    norm_p_p: float
    lower_bound: float
    ortho_residual_max: float
    iterations: int
    converged: bool = True
    norm_error: float = 0.0
    residuals: List[float] = field(default_factory=list)
    diagnostics: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "p": self.p,
            "N": self.zeros.N,
            "alpha": self.zeros.alpha,
            "t": list(self.zeros.t),
            "norm": self.norm_p_p,
            "norm_error": self.norm_error,
            "lower_bound": self.lower_bound,
            "residuals": list(self.residuals),
            "ortho_residual_max": self.ortho_residual_max,
            "iterations": self.iterations,
            "converged": self.converged,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Encoding:
    """u = (log t_1, log gaps, logit of alpha inside its window) <-> zeros."""

    def __init__(self, p, n):
        self.n = n
        self.lo = _alpha_floor(p)
        self.hi = ALPHA_MAX

    def decode(self, u):
        t = np.cumsum(np.exp(u[:self.n]))
        alpha = self.lo + (self.hi - self.lo) * expit(u[self.n])
        return t, alpha

    def encode(self, zs: ZeroSequence):
        t = zs.free()
        s = (min(max(zs.alpha, self.lo + 1e-9), self.hi - 1e-9) - self.lo) / (self.hi - self.lo)
        return np.concatenate([np.log(np.diff(t, prepend=0.0)), [logit(s)]])

    def valid(self, t, alpha):
        return self.n == 0 or t[-1] < self.n + alpha


def default_start(p: float, n_zeros: int) -> ZeroSequence:
    """t_n = n + alpha_0 - 1 with alpha_0 = 1/2 + 1/p."""
    alpha = max(0.5 + 1.0 / p, _alpha_floor(p) + 0.05)
    return ZeroSequence(tuple(np.arange(1, n_zeros + 1) + alpha - 1.0), alpha)


def minimize_norm(p: float, N: int, init: Optional[ZeroSequence] = None, max_iter: int = 4000,
                  restarts: int = 3, seed: Optional[int] = None, polish: bool = True,
                  xatol: float = 1e-7, fatol: float = 1e-12) -> ExtremalSearchResult:
    """Minimize ||phi||_p^p over N free zeros and the tail offset alpha.

    Nelder-Mead on the unconstrained encoding, restarted from the incumbent
    with a shrinking simplex, then (optionally) a quasi-Newton polish using
    the analytic derivative in the zeros.  Never returns anything worse than
    the starting point.
    """
    if not 1.0 <= p <= 4.0:
        raise DomainError("the extremal search covers 1 <= p <= 4")
    if N < 0:
        raise DomainError("N must be nonnegative")
    init = init if init is not None else default_start(p, N)
    if init.N != N:
        init = init.embed(N) if init.N < N else ZeroSequence(init.t[:N], init.alpha)
    enc = _Encoding(p, N)
    rng = np.random.default_rng(seed)
    big = 1e6
    evals = [0]

    def objective(u):
        t, alpha = enc.decode(u)
        evals[0] += 1
        if not enc.valid(t, alpha):
            return big
        return _norm_pp(t, alpha, p, strict=False).value

    u_best = enc.encode(init)
    f_best = objective(u_best)
    converged = False
    step = 0.05
    for _ in range(restarts + 1):
        dim = u_best.size
        simplex = np.vstack([u_best, u_best + step * np.diag(1.0 + 0.1 * rng.standard_normal(dim))])
        res = minimize(objective, u_best, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": xatol, "fatol": fatol,
                                "maxiter": max_iter, "maxfev": 2 * max_iter, "adaptive": dim > 4})
        improved = res.fun < f_best - fatol
        if res.fun < f_best:
            u_best, f_best = res.x, float(res.fun)
        converged = bool(res.success)
        if not improved and converged:
            break
        step *= 0.3

    if polish and N > 0:
        u_best, f_best = _polish(p, enc, u_best, f_best, evals)

    t, alpha = enc.decode(u_best)
    zs = ZeroSequence(tuple(t), alpha)
    norm = _norm_pp(zs.t, zs.alpha, p)
    resid = orthogonality_residual(zs, p, pairs=False) if N else None
    rmax = resid.max_abs() if resid is not None else 0.0
    diag = separation_diagnostics(zs, p).as_dict()
    return ExtremalSearchResult(zs, float(p), norm.value, 1.0 / norm.value, rmax, evals[0],
                                converged, norm.error_estimate,
                                [] if resid is None else [float(v) for v in resid.single], diag)


def _polish(p, enc, u, f_u, evals, h=1e-6):
    """BFGS on the encoding; zero derivatives are analytic, the alpha one is a central difference."""

    def value(v):
        t, alpha = enc.decode(v)
        evals[0] += 1
        if not enc.valid(t, alpha):
            return 1e6
        return _norm_pp(t, alpha, p, strict=False).value

    def grad(v):
        t, alpha = enc.decode(v)
        if not enc.valid(t, alpha):
            return np.zeros_like(v)
        d_t = np.array([-2.0 * p / s * _zero_moment(t, alpha, p, s, strict=False).value for s in t])
        g = np.empty_like(v)
        # t_k = sum_{j<=k} exp(u_j)
        g[:enc.n] = np.exp(v[:enc.n]) * np.cumsum(d_t[::-1])[::-1]
        e = np.zeros_like(v)
        e[enc.n] = h
        g[enc.n] = (value(v + e) - value(v - e)) / (2.0 * h)
        return g

    res = minimize(value, u, jac=grad, method="BFGS", options={"gtol": 1e-10, "maxiter": 200})
    if res.fun < f_u:
        return res.x, float(res.fun)
    return u, f_u


class ExtremalSearch(BaseEstimator):
    """Estimator wrapper around :func:`minimize_norm`.

    ``fit(X)`` runs the search; ``X`` optionally holds starting free zeros
    (1-D, positive, increasing).  ``predict(X)`` evaluates the fitted phi at
    the points in ``X``.
    """

    def __init__(self, p=2.0, n_zeros=6, alpha_init=None, max_iter=4000, restarts=3,
                 polish=True, random_state=None):
        self.p = p
        self.n_zeros = n_zeros
        self.alpha_init = alpha_init
        self.max_iter = max_iter
        self.restarts = restarts
        self.polish = polish
        self.random_state = random_state

    def _validate_params(self):
        if not 1.0 <= float(self.p) <= 4.0:
            raise DomainError("p must lie in [1, 4]")
        if int(self.n_zeros) != self.n_zeros or self.n_zeros < 0:
            raise DomainError("n_zeros must be a nonnegative integer")
        if self.max_iter < 1 or self.restarts < 0:
            raise DomainError("max_iter must be positive and restarts nonnegative")

    def fit(self, X=None, y=None):
        self._validate_params()
        p, n = float(self.p), int(self.n_zeros)
        init = None
        if X is not None:
            t = check_array(np.asarray(X, dtype=float).reshape(1, -1), ensure_2d=True).ravel()
            alpha = self.alpha_init if self.alpha_init is not None else default_start(p, 0).alpha
            init = ZeroSequence(tuple(t), alpha)
        elif self.alpha_init is not None:
            a = float(self.alpha_init)
            init = ZeroSequence(tuple(np.arange(1, n + 1) + a - 1.0), a)
        seed = self.random_state if isinstance(self.random_state, (int, np.integer)) else None
        res = minimize_norm(p, n, init, max_iter=self.max_iter, restarts=self.restarts,
                            seed=seed, polish=self.polish)
        self.result_ = res
        self.zeros_ = res.zeros
        self.alpha_ = res.zeros.alpha
        self.norm_p_p_ = res.norm_p_p
        self.lower_bound_ = res.lower_bound
        self.residuals_ = np.asarray(res.residuals)
        self.n_iter_ = res.iterations
        self.converged_ = res.converged
        return self

    def predict(self, X):
        check_is_fitted(self, "zeros_")
        x = check_array(np.asarray(X, dtype=float).reshape(-1, 1))
        return phi_eval(self.zeros_, x.ravel())

    def score(self, X=None, y=None):
        """The certified lower bound 1/||phi||_p^p (larger is better)."""
        check_is_fitted(self, "zeros_")
        return self.lower_bound_
