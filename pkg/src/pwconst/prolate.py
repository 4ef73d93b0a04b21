"""Largest eigenvalue of the time-frequency concentration operator.

The operator acts on L^2[-1, 1] with kernel sin(c(x - y)) / (pi (x - y)).
It is discretized at Gauss-Legendre nodes (Nystrom), symmetrized with the
square-root weights, and the top eigenvalue is found by power iteration in
the even subspace, where the top eigenvector lives.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .numerics import find_root

# reference eigenvalues (label, c, lambda_0) used by the CLI and the tests
TABLE1 = (
    ("2*pi/3", 2.0 * math.pi / 3.0, 0.896107188059),
    ("2", 2.0, 0.880559922317),
    ("3*pi/5", 3.0 * math.pi / 5.0, 0.858990907475),
    ("1.080420803046*pi/4", 1.080420803046 * math.pi / 4.0, 0.500000000028),
)


class ResolutionWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ProlateResult:
    c: float
    lambda0: float
    grid_size: int
    richardson_error: float


def _matrix(c, n):
    x, w = np.polynomial.legendre.leggauss(n)
    d = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.sin(c * d) / (np.pi * d)
    np.fill_diagonal(k, c / np.pi)
    sw = np.sqrt(w)
    return sw[:, None] * k * sw[None, :], sw


def _even(u):
    return 0.5 * (u + u[::-1])


def _power(a, start, tol=1e-15, warmup=60, max_shifted=40):
    """Top eigenvalue in the even subspace.

    Plain power steps first.  If the Rayleigh quotient has not settled (top
    eigenvalues crowd towards 1 for large c) continue with shifted inverse
    steps at shift 1: every eigenvalue lies below 1, so the top one is the
    closest to the shift and dominates.  Returns (eigenvalue, residual).
    """
    v = start / np.linalg.norm(start)
    lam = float(v @ a @ v)
    for _ in range(warmup):
        u = _even(a @ v)
        v = u / np.linalg.norm(u)
        new = float(v @ a @ v)
        if abs(new - lam) <= tol * abs(new):
            return new, 0.0
        lam = new
    shifted = a - np.eye(a.shape[0])
    for _ in range(max_shifted):
        try:
            u = _even(np.linalg.solve(shifted, v))
        except np.linalg.LinAlgError:
            return 1.0, 0.0
        v = u / np.linalg.norm(u)
        av = a @ v
        new = float(v @ av)
        resid = float(np.linalg.norm(av - new * v))
        if abs(new - lam) <= tol * abs(new) or resid <= 1e-14:
            return new, resid
        lam = new
    raise ConvergenceError("eigenvalue iteration did not converge", best=lam)


def _lambda0_value(c, n):
    a, sw = _matrix(c, n)
    return _power(a, sw.copy())


def lambda0(c: float, n_nodes: int = 256) -> ProlateResult:
    """Top eigenvalue lambda_0(c) with a grid-halving error estimate."""
    if c <= 0:
        raise DomainError("lambda0 needs c > 0")
    if n_nodes < 32:
        raise DomainError("lambda0 needs at least 32 nodes")
    if n_nodes < 4 * c + 40:
        warnings.warn(f"{n_nodes} nodes may under-resolve c = {c}", ResolutionWarning, stacklevel=2)
    lam, resid = _lambda0_value(c, n_nodes)
    coarse, _ = _lambda0_value(c, n_nodes // 2)
    err = abs(lam - coarse) + 1e-13 * lam + resid
    return ProlateResult(float(c), lam, int(n_nodes), float(err))


def c_for_lambda(target: float, n_nodes: int = 256, tol: float = 1e-13) -> float:
    """Invert lambda_0: the c in [1e-3, 20] with lambda_0(c) = target."""
    if not 0 < target < 1:
        raise DomainError("target must lie in (0, 1)")
    return find_root(lambda c: _lambda0_value(c, n_nodes)[0] - target, 1e-3, 20.0, tol=tol)


def sinc_concentration(c: float, n_nodes: int = 256) -> float:
    """Share of the energy of sinc(c x) inside [-1, 1]; never exceeds lambda_0(c)."""
    from .special import sinc

    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return float(c / math.pi * (w @ sinc(c * x) ** 2))
