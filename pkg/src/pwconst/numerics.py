"""Quadrature, scalar minimization and root finding.

Integrands are called with 1-D numpy arrays and must return arrays of the
same shape.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import zeta

from .errors import BracketError, ContractError, ConvergenceError, DomainError

# 21-point Gauss-Kronrod pair (QUADPACK qk21)
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478281, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(21)
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG[::-1]
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 30
    tail_exponent: Optional[float] = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0 or self.max_depth < 1:
            raise ContractError("QuadratureConfig needs positive tolerances and max_depth >= 1")

    def with_tail(self, beta: float) -> "QuadratureConfig":
        return QuadratureConfig(self.abs_tol, self.rel_tol, self.max_depth, beta)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    nodes_used: int

    def __float__(self):
        return float(self.value)


def _gk21(f, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = fx @ _KW
    gauss = fx @ _GW
    mean = kron / 2.0
    resabs = np.abs(fx) @ _KW
    resasc = np.abs(fx - mean[:, None]) @ _KW
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron * half, err * np.abs(half), floor * np.abs(half)


def integrate_pieces(f, lo, hi, abs_tol, rel_tol, max_depth=30, max_leaves=2_000_000):
    """Adaptive GK21 on many intervals at once.

    Returns (values, errors, converged_mask, evaluations); one entry per
    interval.  ``abs_tol`` may be a scalar or an array matching ``lo``.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n_owner = lo.size
    abs_tol = np.broadcast_to(np.asarray(abs_tol, dtype=float), (n_owner,))
    a, b = lo.copy(), hi.copy()
    owner = np.arange(n_owner)
    depth = np.zeros(n_owner, dtype=int)
    val, err, floor = _gk21(f, a, b)
    evals = 21 * n_owner
    for _ in range(4 * max_depth):
        tot_v = np.bincount(owner, val, minlength=n_owner)
        tot_e = np.bincount(owner, err, minlength=n_owner)
        count = np.bincount(owner, minlength=n_owner)
        tol = np.maximum(abs_tol, rel_tol * np.abs(tot_v))
        bad = tot_e > tol
        if not bad.any():
            break
        share = tol / (2.0 * count)
        # intervals already at the roundoff floor cannot improve
        split = bad[owner] & (err > share[owner]) & (err > 2.0 * floor) & (depth < max_depth)
        if not split.any() or a.size + split.sum() > max_leaves:
            break
        keep = ~split
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nown = np.concatenate([owner[split], owner[split]])
        ndep = np.concatenate([depth[split], depth[split]]) + 1
        nv, ne, nf = _gk21(f, na, nb)
        evals += 21 * na.size
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], nown])
        depth = np.concatenate([depth[keep], ndep])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])
        floor = np.concatenate([floor[keep], nf])
    tot_v = np.bincount(owner, val, minlength=n_owner)
    tot_e = np.bincount(owner, err, minlength=n_owner)
    ok = tot_e <= np.maximum(abs_tol, rel_tol * np.abs(tot_v))
    return tot_v, tot_e, ok, evals


def integrate_finite(f: Callable, a: float, b: float,
                     cfg: Optional[QuadratureConfig] = None,
                     points=None) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over [a, b].

    ``points`` are optional interior break points (kinks, jumps).
    """
    cfg = cfg or QuadratureConfig()
    if not a < b:
        raise ContractError("integrate_finite needs a < b")
    edges = np.array([a, b], dtype=float)
    if points is not None:
        pts = np.asarray(points, dtype=float)
        pts = pts[(pts > a) & (pts < b)]
        edges = np.unique(np.concatenate([edges, pts]))
    n = edges.size - 1
    v, e, ok, evals = integrate_pieces(f, edges[:-1], edges[1:], cfg.abs_tol / n,
                                       cfg.rel_tol, cfg.max_depth)
    res = QuadratureResult(float(v.sum()), float(e.sum()), int(evals))
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(res.value))
    if res.error_estimate > tol and not ok.all():
        raise ConvergenceError(
            f"integrate_finite: error {res.error_estimate:.3g} above tolerance {tol:.3g}", best=res)
    return res


def _cell_pieces(a, w, k0, k1, breakpoints):
    edges = a + w * np.arange(k0, k1 + 1, dtype=float)
    lo_x, hi_x = edges[0], edges[-1]
    if breakpoints is None:
        pts = np.empty(0)
    elif callable(breakpoints):
        pts = np.asarray(breakpoints(hi_x), dtype=float)
    else:
        pts = np.asarray(breakpoints, dtype=float)
    pts = pts[(pts > lo_x) & (pts < hi_x)]
    if pts.size:
        # drop points that sit on a cell edge
        rel = (pts - a) / w
        on_edge = np.abs(rel - np.round(rel)) < 1e-12 * np.maximum(1.0, np.abs(rel))
        pts = pts[~on_edge]
    allx = np.unique(np.concatenate([edges, pts]))
    lo, hi = allx[:-1], allx[1:]
    cell = np.floor((0.5 * (lo + hi) - a) / w).astype(int) - k0
    return lo, hi, cell


def _tail_fit(sums, a_over_w, beta, first, terms):
    window = sums[first:]
    if not np.any(window):
        return 0.0
    k = np.arange(first, sums.size)
    m = a_over_w + k + 0.5
    # columns relative to the first cell of the window so fast decay cannot underflow them
    rel = m / m[0]
    cols = np.stack([rel ** (-beta - j) for j in range(terms)], axis=1)
    scale = np.linalg.norm(cols, axis=0)
    keep = scale > 0
    if not np.any(keep):
        return 0.0
    coef, *_ = np.linalg.lstsq(cols[:, keep] / scale[keep], window, rcond=None)
    coef = coef / scale[keep]
    q = a_over_w + sums.size + 0.5
    powers = (beta + np.arange(terms))[keep]
    # d_j = coef_j m0^(beta+j); the tail of sum_m d_j m^-(beta+j) is d_j zeta(beta+j, q)
    return float(sum(c * _scaled_zeta(s, q, m[0]) for c, s in zip(coef, powers)))


def _scaled_zeta(s, q, m0):
    """m0^s * zeta(s, q) for m0 < q without overflow."""
    if s * math.log(m0) < 600.0:
        return m0 ** s * zeta(s, q)
    with np.errstate(under="ignore"):
        return float(np.sum((m0 / (q + np.arange(4000.0))) ** s))


def integrate_semiinfinite(f: Callable, a: float,
                           cfg: Optional[QuadratureConfig] = None,
                           period: float = 1.0, breakpoints=None,
                           min_cells: int = 64, max_cells: int = 8192,
                           fit_terms: int = 6) -> QuadratureResult:
    """Integral of ``f`` over [a, inf) for algebraically decaying integrands.

    The line is cut into cells of width ``period`` starting at ``a``; cell
    integrals come from adaptive GK21 (optionally split at ``breakpoints``,
    an array or a callable ``upper -> points``).  The remaining tail is
    summed in closed form after fitting the last cell sums to
    sum_j d_j m^(-beta-j) with m the cell midpoint in period units, which is
    exact in the limit for (period-periodic) x (power series in 1/x) times
    x^-beta.  The number of cells doubles until two independent tail fits
    agree to the tolerance.
    """
    cfg = cfg or QuadratureConfig()
    beta = cfg.tail_exponent
    if beta is None:
        raise ContractError("integrate_semiinfinite needs cfg.tail_exponent")
    if beta <= 1.0:
        raise DomainError(f"tail exponent {beta} <= 1: integral diverges")
    w = float(period)
    aw = a / w
    n_cells = 1 << max(6, int(math.ceil(math.log2(max(min_cells, 64)))))
    sums = np.empty(0)
    errs = np.empty(0)
    evals = 0
    best = None
    while True:
        k0 = sums.size
        lo, hi, cell = _cell_pieces(a, w, k0, n_cells, breakpoints)
        piece_tol = cfg.abs_tol / (8.0 * n_cells * max(1.0, lo.size / (n_cells - k0)))
        v, e, _, ev = integrate_pieces(f, lo, hi, piece_tol, cfg.rel_tol / 8.0, cfg.max_depth)
        evals += ev
        sums = np.concatenate([sums, np.bincount(cell, v, minlength=n_cells - k0)])
        errs = np.concatenate([errs, np.bincount(cell, e, minlength=n_cells - k0)])
        head = float(math.fsum(sums))
        t_main = _tail_fit(sums, aw, beta, n_cells // 4, fit_terms)
        t_short = _tail_fit(sums, aw, beta, n_cells // 4, fit_terms - 1)
        t_late = _tail_fit(sums, aw, beta, n_cells // 2, fit_terms)
        fit_err = max(abs(t_main - t_short), abs(t_main - t_late))
        total = head + t_main
        err = float(errs.sum()) + fit_err
        best = QuadratureResult(total, err, evals)
        if err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
            return best
        if n_cells >= max_cells:
            raise ConvergenceError(
                f"integrate_semiinfinite: tail estimate not converged (err {err:.3g})", best=best)
        n_cells *= 2


def bracketed_roots(f: Callable, grid, iterations: int = 60):
    """All sign changes of ``f`` on consecutive ``grid`` points, refined by bisection."""
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(f(grid), dtype=float)
    exact = grid[vals == 0.0]
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    lo, hi = grid[idx].copy(), grid[idx + 1].copy()
    flo = vals[idx]
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = np.asarray(f(mid), dtype=float)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return np.sort(np.concatenate([exact, 0.5 * (lo + hi)]))


class MultimodalityWarning(RuntimeWarning):
    pass


@dataclass
class Minimum:
    x: float
    fun: float
    multimodal: bool = False
    evaluations: int = 0

    def __iter__(self):
        return iter((self.x, self.fun))


_GOLD = 0.5 * (3.0 - math.sqrt(5.0))


def minimize_scalar(g: Callable[[float], float], lo: float, hi: float,
                    tol: float = 1e-8, scan_points: int = 32) -> Minimum:
    """Guard scan on a uniform grid, then golden-section refinement.

    If the scan shows separated local minima a MultimodalityWarning is
    issued and the result is flagged; the deepest scan minimum is refined.
    """
    if not lo < hi:
        raise ContractError("minimize_scalar needs lo < hi")

    def call(x):
        y = float(g(x))
        if math.isnan(y):
            raise FloatingPointError(f"objective returned NaN at x={x!r}")
        return y

    xs = np.linspace(lo, hi, scan_points)
    ys = np.array([call(x) for x in xs])
    n_eval = scan_points
    interior = [i for i in range(1, scan_points - 1) if ys[i] <= ys[i - 1] and ys[i] <= ys[i + 1]]
    ends = ([0] if ys[0] < ys[1] else []) + ([scan_points - 1] if ys[-1] < ys[-2] else [])
    minima = sorted(set(interior + ends))
    separated = [m for j, m in enumerate(minima) if j == 0 or m - minima[j - 1] > 1]
    multimodal = len(separated) > 1
    if multimodal:
        warnings.warn(f"minimize_scalar: {len(separated)} separated local minima on [{lo}, {hi}]",
                      MultimodalityWarning, stacklevel=2)
    i = int(np.argmin(ys))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, scan_points - 1)]
    c = a + _GOLD * (b - a)
    d = b - _GOLD * (b - a)
    fc, fd = call(c), call(d)
    n_eval += 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = a + _GOLD * (b - a)
            fc = call(c)
        else:
            a, c, fc = c, d, fd
            d = b - _GOLD * (b - a)
            fd = call(d)
        n_eval += 1
    cands = [(fc, c), (fd, d), (ys[i], xs[i])]
    fbest, xbest = min(cands)
    return Minimum(float(xbest), float(fbest), multimodal, n_eval)


def find_root(g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
              max_iter: int = 200) -> float:
    """Root of ``g`` in [lo, hi]: Illinois regula falsi with forced bisection.

    A bisection step is taken whenever three steps fail to halve the bracket.
    """
    a, b = float(lo), float(hi)
    fa, fb = float(g(a)), float(g(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise BracketError(f"find_root: no sign change on [{lo}, {hi}]")
    last = ""
    checkpoint = b - a
    force = False
    for it in range(max_iter):
        if b - a <= tol:
            break
        x = (a * fb - b * fa) / (fb - fa)
        if force or not a < x < b:
            x = 0.5 * (a + b)
        force = False
        fx = float(g(x))
        if fx == 0.0:
            return x
        if (fx > 0) == (fa > 0):
            a, fa = x, fx
            if last == "a":
                fb *= 0.5
            last = "a"
        else:
            b, fb = x, fx
            if last == "b":
                fa *= 0.5
            last = "b"
        if it % 3 == 2:
            force = (b - a) > 0.5 * checkpoint
            checkpoint = b - a
    return 0.5 * (a + b)
