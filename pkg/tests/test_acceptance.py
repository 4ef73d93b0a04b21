"""Acceptance criteria 1-14, each at its stated tolerance.

Every test records one summary line (printed at the end of the run) and
fails if any of its checks fails.
"""

import math
import time

import numpy as np
import pytest

from pwconst.bounds import (c0_lower_opt, c0_upper_opt, ceil_upper, envelope_infinity,
                            korevaar_upper, lower_from_test_function, lower_g_alpha_opt,
                            lower_sweep_fp, pw4_upper, sweep)
from pwconst.convolve import AdmissibleDensity, bessel4_amplitude, bessel4_experiment, n_fold, physical_oracle
from pwconst.extremal import (ZeroSequence, certificate_check, hb_upper_p1, kplus_bound,
                              minimize_norm, representation_check)
from pwconst.prolate import c_for_lambda, lambda0
from pwconst.special import f_p_eval, g_alpha_eval, g_script, sinc

pytestmark = pytest.mark.acceptance

FIGURE_LOWER = {1.0: 0.54089, 1.25: 0.66303, 1.5: 0.78, 1.75: 0.89212, 2.0: 0.99998, 2.25: 1.10372,
                2.5: 1.20374, 3.0: 1.39368, 3.5: 1.57191, 3.75: 1.65715, 4.0: 1.74006}
RED_CURVE = {2.0: 1.0, 2.5: 1.23852, 3.0: 1.47677, 3.5: 1.71489, 4.0: 1.95293}
LATTICE = ZeroSequence.lattice(1.0)


def close(value, target, tol, label):
    return abs(value - target) <= tol, f"{label}={value:.12g} (target {target:.12g} +- {tol:g})"


def test_criterion_01_eigenvalue_table(record):
    start = time.perf_counter()
    checks = [close(lambda0(c).lambda0, ref, 1e-8, f"lambda0({name})")
              for name, c, ref in [("2pi/3", 2 * math.pi / 3, 0.896107188059),
                                   ("2", 2.0, 0.880559922317),
                                   ("3pi/5", 3 * math.pi / 5, 0.858990907475)]]
    checks.append(close(c_for_lambda(0.5), 1.080420803046 * math.pi / 4, 1e-8, "c(1/2)"))
    elapsed = time.perf_counter() - start
    checks.append((elapsed < 10, f"runtime {elapsed:.2f}s < 10s"))
    record(1, checks)


def test_criterion_02_lower_curve(record):
    start = time.perf_counter()
    checks = [close(lower_sweep_fp(p).value, v, 1e-3, f"lower({p:g})") for p, v in FIGURE_LOWER.items()]
    elapsed = time.perf_counter() - start
    checks.append((elapsed < 30, f"runtime {elapsed:.2f}s < 30s"))
    record(2, checks)


def test_criterion_03_upper_curve(record):
    checks = [close(korevaar_upper(p).value, v, 1e-4, f"upper({p:g})") for p, v in RED_CURVE.items()]
    strict = [korevaar_upper(p).value < p / 2 for p in np.linspace(2.05, 4.0, 20)]
    checks.append((all(strict), "upper(p) < p/2 on 20 points of (2, 4]"))
    record(3, checks)


def test_criterion_04_p4_bounds(record):
    best_lower = next(r.value for r in sweep([4.0]) if r.side == "lower")
    checks = [
        (pw4_upper().value == 23 / 12, f"pw4={pw4_upper().value!r} == 23/12"),
        (ceil_upper(4).value == 2, "ceil(4)=2"),
        (1.74006 - 1e-3 <= best_lower < 23 / 12 < 1.95293 + 1e-4,
         f"1.74006-1e-3 <= lower {best_lower:.10g} < 23/12 < 1.95293+1e-4"),
    ]
    record(4, checks)


def test_criterion_05_g32(record):
    g = lambda x: g_alpha_eval(1.5, x)
    rec = lower_from_test_function(1, g, 2.0, breakpoints=lambda up: np.arange(1.5, up))
    record(5, [close(rec.value, 0.5399751567, 1e-8, "1/||g_3/2||_1")])


def test_criterion_06_c0_interval(record):
    start = time.perf_counter()
    lo, up = c0_lower_opt(), c0_upper_opt()
    elapsed = time.perf_counter() - start
    record(6, [
        (lo.value >= 1.1393829, f"lower={lo.value:.10g} >= 1.1393829"),
        close(lo.argument, 0.935, 0.01, "gamma*"),
        (up.value <= 1.1481786, f"upper={up.value:.10g} <= 1.1481786"),
        close(up.argument, 1.784, 0.01, "q*"),
        (lo.value <= up.value, "lower <= upper"),
        (elapsed < 10, f"runtime {elapsed:.2f}s < 10s"),
    ])


def test_criterion_07_certificates(record):
    first = certificate_check(4, 0.6, 2 / math.pi, 2 / math.pi)
    second = certificate_check(4, 2 / math.pi, 2 / math.pi, 2 / 3)
    gap_23 = 1 - lambda0(2 * math.pi / 3).lambda0
    record(7, [
        close(first.A, 0.1440, 5e-4, "A1"), close(first.B, 0.1337, 5e-4, "B1"),
        close(second.A, 0.1387, 5e-4, "A2"), close(second.B, 0.1388, 5e-4, "B2"),
        (first.spectral_gap >= 0.119, f"1-lambda0(2)={first.spectral_gap:.6f} >= 0.119"),
        (gap_23 > 0.103, f"1-lambda0(2pi/3)={gap_23:.6f} > 0.103"),
        (first.contradiction, f"delta max(A,B)={first.bound:.5f} < {first.spectral_gap:.5f}"),
        (second.contradiction, f"delta max(A,B)={second.bound:.5f} < 1-lambda0(2pi/3)={second.spectral_gap:.5f}"),
    ])


def test_criterion_08_extremal_search(record, p1_search):
    start = time.perf_counter()
    init = ZeroSequence(tuple(np.arange(1, 7) - 0.2), 1.0)
    p2 = minimize_norm(2.0, 6, init, seed=0)
    p2_time = time.perf_counter() - start
    p1, p1_time = p1_search
    dev = float(np.max(np.abs(np.asarray(p2.zeros.t[:4]) - np.arange(1, 5))))
    record(8, [
        (dev < 5e-3, f"p=2 max|t_n - n| (n<=4)={dev:.2e} < 5e-3"),
        close(p2.lower_bound, 1.0, 1e-4, "p=2 lower"),
        (0.54088 <= p1.lower_bound <= 0.54094, f"p=1 N=12 lower={p1.lower_bound:.10f} in [0.54088, 0.54094]"),
        (p2.ortho_residual_max < 1e-3 and p1.ortho_residual_max < 1e-3,
         f"residuals {p2.ortho_residual_max:.1e}, {p1.ortho_residual_max:.1e} < 1e-3"),
        (p1.converged and p2.converged, "both converged"),
        (p1_time + p2_time < 300, f"runtime {p1_time + p2_time:.1f}s < 300s"),
    ])


def test_criterion_09_representation(record):
    record(9, [close(representation_check(LATTICE, q).value, 1.0, 1e-6, f"q={q:g}")
               for q in (0.5, 1.0, 1.7, 2.0, 3.0)])


def test_criterion_10_kernel_bound(record):
    other = ZeroSequence((0.7, 1.9), 1.3)
    v4, v4_other = kplus_bound(4, LATTICE).value, kplus_bound(4, other).value
    record(10, [
        close(kplus_bound(2, LATTICE).value, 1.0, 1e-8, "p=2"),
        close(v4, 2 - 1 / 12, 1e-6, "p=4"),
        (abs(v4 - v4_other) <= 1e-8, f"p=4 zero-set independence |diff|={abs(v4 - v4_other):.1e} <= 1e-8"),
    ])


def test_criterion_11_p1_upper_bound(record, p1_search):
    hb = hb_upper_p1(p1_search[0].zeros)
    record(11, [
        (hb.value >= 0.5409288219, f"U={hb.value:.10f} >= 0.5409288219"),
        (hb.value <= 0.545, f"U={hb.value:.10f} <= 0.545 (window error {hb.window_error:.1e})"),
        (hb.value >= hb.inverse_norm, f"U >= 1/||phi||_1={hb.inverse_norm:.10f}"),
    ])


def test_criterion_12_large_p(record):
    checks = []
    for p in (50, 100, 200, 400):
        gap = envelope_infinity(p) - lower_g_alpha_opt(p).value
        ceiling = 3 * math.log(p) / math.sqrt(p)
        checks.append((0 < gap <= ceiling, f"p={p}: 0 < {gap:.4f} <= {ceiling:.4f}"))
    record(12, checks)


def test_criterion_13_special_identities(record):
    x = np.linspace(0, 1, 1000)
    lol = float(np.max(np.abs((3 - 2 * x) / (1 + 2 * x) * g_script(1.0, 1 - x) / g_script(1.0, x) - 1)))
    pts = np.random.default_rng(13).uniform(-20, 20, 20)
    g1 = float(np.max(np.abs(g_alpha_eval(1.0, pts) - sinc(np.pi * pts))))
    f2 = float(np.max(np.abs(f_p_eval(2.0, pts) - sinc(np.pi * pts))))
    part_a = part_c = part_b = True
    for alpha in (1.0, 2.0, 5.0):
        y = np.linspace(0, alpha, 21)[:-1]
        g = g_alpha_eval(alpha, y)
        env = (1 - y / alpha) ** (-(alpha - 0.5 - y)) * (1 + y / alpha) ** (-(alpha - 0.5 + y))
        part_a &= bool(np.all(g <= env * (1 + 1e-12)))
        part_c &= bool(np.all(np.abs(g) <= np.cos(np.pi * y / (2 * alpha)) + 1e-12))
    for alpha in (1.0, 2.0):
        y = alpha + np.array([0.3, 1.7, 5.2])
        env = (alpha ** (2 * alpha - 1) * (1 - alpha + y) ** (0.5 - alpha + y)
               * (alpha + y) ** (-(alpha - 0.5 + y)) * np.abs(np.sin(np.pi * (alpha - y))))
        part_b &= bool(np.all(np.abs(g_alpha_eval(alpha, y)) <= env * (1 + 1e-12)))
    record(13, [
        (lol < 1e-12, f"reflection identity max err {lol:.1e} < 1e-12"),
        (g1 < 1e-9, f"g_1 vs sinc {g1:.1e}"), (f2 < 1e-9, f"f_2 vs sinc {f2:.1e}"),
        (part_a, "g_alpha estimate (a)"), (part_b, "g_alpha estimate (b)"), (part_c, "g_alpha estimate (c)"),
    ])


# frozen after the first verified run
FROZEN_ORIGIN = {"paper": 1.27114856, "normalized": 0.99303536}


def test_criterion_14_convolution(record):
    norm = bessel4_experiment("normalized")
    literal = bessel4_experiment("paper")
    amp = bessel4_amplitude("normalized")
    c2 = n_fold(AdmissibleDensity.power(amp, -0.5, math.pi, 8192), 2)
    # multiples of pi/8 away from the cusps at +-pi
    ks = [0, 1, -1, 3, -3, 5, -5, 6, -6, 10, -10, 12, -12, 14, -14, 16, 18, -18, 20, -20]
    worst = max(abs(c2.value_at(k * math.pi / 8) - physical_oracle(amp, -0.5, 2, k * math.pi / 8)) for k in ks)
    record(14, [
        (1e-6 < norm.max_deviation < 0.05, f"normalized max|C2-1|={norm.max_deviation:.3e} in (1e-6, 0.05)"),
        (worst <= 1e-4, f"grid vs oracle at 20 points max {worst:.1e} <= 1e-4"),
        close(literal.value_at_zero, FROZEN_ORIGIN["paper"], 1e-7, "quoted-constant C2(0)"),
        close(norm.value_at_zero, FROZEN_ORIGIN["normalized"], 1e-7, "normalized C2(0)"),
    ])
