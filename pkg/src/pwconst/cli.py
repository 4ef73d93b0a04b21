"""Command-line front end.

Exit codes: 0 success, 1 domain/contract error, 2 convergence failure,
64 usage error.  Numbers are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConvergenceError

EXIT_OK, EXIT_DOMAIN, EXIT_CONVERGENCE, EXIT_USAGE = 0, 1, 2, 64


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    threads: int = 1


def _open_out(path: str):
    if path in (None, "-"):
        return _Stdout()
    return open(path, "w", encoding="utf-8", newline="")


class _Stdout(io.StringIO):
    def close(self):
        sys.stdout.write(self.getvalue())
        super().close()


def _write_csv(path, header, rows):
    fh = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    finally:
        fh.close()


def _rounded(obj):
    """Round floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    return obj


def _write_json(path, data):
    fh = _open_out(path)
    try:
        fh.write(json.dumps(_rounded(data), indent=2, ensure_ascii=False) + "\n")
    finally:
        fh.close()


def _zeros_from(args):
    from .extremal import ZeroSequence, load_zero_sequence

    if getattr(args, "zeros", None):
        return load_zero_sequence(args.zeros)
    return ZeroSequence.lattice(args.alpha)


# ---------------------------------------------------------------------------
# subcommands

def cmd_bounds(cfg: RunConfig) -> int:
    from .bounds import ALL_METHODS, LOWER, UPPER, sweep

    a = cfg.args
    if a.step <= 0 or a.p_max < a.p_min:
        raise ValueError("need step > 0 and p-max >= p-min")
    count = int(math.floor((a.p_max - a.p_min) / a.step + 1e-9)) + 1
    grid = [round(a.p_min + k * a.step, 12) for k in range(count)]
    methods = tuple(m.strip() for m in a.methods.split(",")) if a.methods else ALL_METHODS
    unknown = set(methods) - set(ALL_METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {', '.join(sorted(unknown))}")
    rows = sweep(grid, methods, workers=cfg.threads)
    if a.long:
        _write_csv(a.out, ["p", "side", "method", "value", "err"],
                   [(r.p, r.side, r.method, r.value, r.err) for r in rows])
        return EXIT_OK
    table = []
    for p in grid:
        lo = next((r for r in rows if r.p == p and r.side == LOWER), None)
        up = next((r for r in rows if r.p == p and r.side == UPPER), None)
        table.append((p, lo and lo.value, lo.method if lo else "", lo and lo.err,
                      up and up.value, up.method if up else "", up and up.err))
    _write_csv(a.out, ["p", "lower", "lower_method", "lower_err", "upper", "upper_method", "upper_err"], table)
    return EXIT_OK


def cmd_prolate(cfg: RunConfig) -> int:
    from .prolate import TABLE1, c_for_lambda, lambda0

    a = cfg.args
    if a.table:
        print("name,c,lambda0,reference,difference")
        for name, c, ref in TABLE1[:3]:
            lam = lambda0(c, a.nodes).lambda0
            print(",".join([name, fmt(c), fmt(lam), fmt(ref), fmt(lam - ref)]))
        c_half = c_for_lambda(0.5, a.nodes)
        name, c_ref, _ = TABLE1[3]
        print(",".join([f"c(lambda0=1/2)", fmt(c_half), "0.5", fmt(c_ref), fmt(c_half - c_ref)]))
        return EXIT_OK
    if a.invert is not None:
        c = c_for_lambda(a.invert, a.nodes)
        print(f"lambda0={fmt(a.invert)} c={fmt(c)} c/pi={fmt(c / math.pi)}")
        return EXIT_OK
    r = lambda0(a.c, a.nodes)
    print(f"c={fmt(r.c)} lambda0={fmt(r.lambda0)} richardson_error={fmt(r.richardson_error)} nodes={r.grid_size}")
    return EXIT_OK


def cmd_c0(cfg: RunConfig) -> int:
    from .bounds import c0_lower_opt, c0_upper_opt

    lo = c0_lower_opt()
    up = c0_upper_opt()
    print(f"lower {fmt(lo.value)} gamma {fmt(lo.argument)}")
    print(f"upper {fmt(up.value)} q {fmt(up.argument)}")
    return EXIT_OK


def cmd_extremal(cfg: RunConfig) -> int:
    from .extremal import minimize_norm

    a = cfg.args
    res = minimize_norm(a.p, a.n_zeros, max_iter=a.max_iter, seed=a.seed)
    _write_json(a.out, res.to_dict())
    if a.out not in (None, "-"):
        print(f"p={fmt(a.p)} N={a.n_zeros} lower_bound={fmt(res.lower_bound)} "
              f"residual_max={fmt(res.ortho_residual_max)} converged={fmt(res.converged)}")
    return EXIT_OK if res.converged else EXIT_CONVERGENCE


def cmd_rep_check(cfg: RunConfig) -> int:
    from .extremal import representation_check

    r = representation_check(_zeros_from(cfg.args), cfg.args.q)
    print(f"q={fmt(cfg.args.q)} value={fmt(r.value)} deviation={fmt(r.value - 1.0)} err={fmt(r.error_estimate)}")
    return EXIT_OK


def cmd_kplus(cfg: RunConfig) -> int:
    from .extremal import kplus_bound

    r = kplus_bound(cfg.args.p, _zeros_from(cfg.args))
    print(f"p={fmt(cfg.args.p)} conditional_upper_bound={fmt(r.value)} err={fmt(r.error_estimate)}")
    return EXIT_OK


def cmd_hb_upper(cfg: RunConfig) -> int:
    from .extremal import hb_upper_p1, load_zero_sequence

    r = hb_upper_p1(load_zero_sequence(cfg.args.zeros), cfg.args.eps)
    print(f"upper={fmt(r.value)} inverse_norm={fmt(r.inverse_norm)} "
          f"quadrature_error={fmt(r.quadrature_error)} window_error={fmt(r.window_error)}")
    return EXIT_OK


def cmd_certificate(cfg: RunConfig) -> int:
    from .extremal import certificate_check

    a = cfg.args
    r = certificate_check(a.p, a.delta0, a.gamma, a.delta)
    print(f"A={fmt(r.A)} B={fmt(r.B)} delta_max={fmt(r.bound)} "
          f"one_minus_lambda0={fmt(r.spectral_gap)} contradiction={fmt(r.contradiction)}")
    return EXIT_OK


def cmd_convolve(cfg: RunConfig) -> int:
    from .convolve import bessel4_experiment

    a = cfg.args
    rep = bessel4_experiment(a.variant, a.grid)
    _write_csv(a.out, ["xi", "value"], zip(rep.xi, rep.values))
    sys.stderr.write(f"variant={rep.variant} amplitude={fmt(rep.amplitude)} value_at_0={fmt(rep.value_at_zero)} "
                     f"max_dev={fmt(rep.max_deviation)} mean_dev={fmt(rep.mean_deviation)}\n")
    return EXIT_OK


PLOT_SCRIPT = '''"""Plot the lower (test-function) and upper (closed-form) curves from figure1.csv."""
import csv
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
p, lower, up_p, upper = [], [], [], []
with open(os.path.join(here, "figure1.csv"), newline="") as fh:
    for row in csv.DictReader(fh):
        p.append(float(row["p"]))
        lower.append(float(row["lower_fp"]))
        if row["upper_closed_form"]:
            up_p.append(float(row["p"]))
            upper.append(float(row["upper_closed_form"]))

plt.plot(p, lower, color="tab:blue", label="lower bound (f_p test function)")
plt.plot(up_p, upper, color="tab:red", label="upper bound (closed form)")
plt.xlabel("p")
plt.ylabel("C_p")
plt.legend()
plt.savefig(os.path.join(here, "figure1.png"), dpi=150)
'''


def cmd_figure1(cfg: RunConfig) -> int:
    from .bounds import korevaar_upper, lower_sweep_fp

    out = cfg.args.out
    os.makedirs(out, exist_ok=True)
    rows = []
    for k in range(301):
        p = round(1.0 + 0.01 * k, 12)
        up = korevaar_upper(p).value if p >= 2.0 else None
        rows.append((p, lower_sweep_fp(p).value, up))
    _write_csv(os.path.join(out, "figure1.csv"), ["p", "lower_fp", "upper_closed_form"], rows)
    with open(os.path.join(out, "plot_figure1.py"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(PLOT_SCRIPT)
    print(f"wrote {os.path.join(out, 'figure1.csv')} and {os.path.join(out, 'plot_figure1.py')}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pwconst", description="Bounds for the point-evaluation constant of Paley-Wiener spaces.")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="best lower/upper bound per p")
    b.add_argument("--p-min", type=float, required=True)
    b.add_argument("--p-max", type=float, required=True)
    b.add_argument("--step", type=float, required=True)
    b.add_argument("--methods", help="comma-separated method tags (default: all)")
    b.add_argument("--long", action="store_true", help="one row per record: p,side,method,value,err")
    b.add_argument("--out", required=True, help="CSV path or - for stdout")
    b.set_defaults(func=cmd_bounds)

    pr = sub.add_parser("prolate", help="top eigenvalue of the concentration operator")
    g = pr.add_mutually_exclusive_group(required=True)
    g.add_argument("--c", type=float)
    g.add_argument("--table", action="store_true")
    g.add_argument("--invert", type=float, metavar="LAMBDA")
    pr.add_argument("--nodes", type=int, default=256)
    pr.set_defaults(func=cmd_prolate)

    c0 = sub.add_parser("c0", help="optimized bounds for the small-p constant")
    c0.set_defaults(func=cmd_c0)

    ex = sub.add_parser("extremal", help="search for the extremal zero set")
    ex.add_argument("--p", type=float, required=True)
    ex.add_argument("--n-zeros", type=int, required=True)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--max-iter", type=int, default=4000)
    ex.add_argument("--out", required=True, help="JSON path or - for stdout")
    ex.set_defaults(func=cmd_extremal)

    def zero_source(sp):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--lattice", action="store_true", help="zeros n + alpha - 1 (default)")
        src.add_argument("--zeros", metavar="PATH", help="zero set JSON from the extremal subcommand")
        sp.add_argument("--alpha", type=float, default=1.0, help="lattice offset")

    rc = sub.add_parser("rep-check", help="zero-indexed representation identity")
    rc.add_argument("--q", type=float, required=True)
    zero_source(rc)
    rc.set_defaults(func=cmd_rep_check)

    kp = sub.add_parser("kplus", help="2 int K_+^2 for a zero set")
    kp.add_argument("--p", type=float, required=True)
    zero_source(kp)
    kp.set_defaults(func=cmd_kplus)

    hb = sub.add_parser("hb-upper", help="p = 1 upper bound from a zero set")
    hb.add_argument("--zeros", required=True, metavar="PATH")
    hb.add_argument("--eps", type=float, default=1e-3)
    hb.set_defaults(func=cmd_hb_upper)

    ce = sub.add_parser("certificate", help="separation certificate constants")
    for name in ("--p", "--delta0", "--gamma", "--delta"):
        ce.add_argument(name, type=float, required=True)
    ce.set_defaults(func=cmd_certificate)

    cv = sub.add_parser("convolve", help="C_2 of the arcsine-type density")
    cv.add_argument("--variant", choices=["paper", "normalized"], required=True)
    cv.add_argument("--grid", type=int, default=8192)
    cv.add_argument("--out", required=True, help="CSV path or - for stdout")
    cv.set_defaults(func=cmd_convolve)

    f1 = sub.add_parser("figure1", help="lower/upper curve dataset plus plot script")
    f1.add_argument("--out", required=True, metavar="DIR")
    f1.set_defaults(func=cmd_figure1)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    cfg = RunConfig(args.command, args, max(1, args.threads))
    try:
        return args.func(cfg)
    except ConvergenceError as exc:
        sys.stderr.write(f"convergence failure: {exc}\n")
        return EXIT_CONVERGENCE
    except (ValueError, OverflowError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
