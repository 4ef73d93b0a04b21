import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from pwconst.cli import fmt, run

DATA = Path(__file__).parent / "data"


def out_of(capsys, argv):
    code = run(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_fmt_twelve_digits():
    assert fmt(0.1234567890123456) == "0.123456789012"
    assert fmt(3) == "3" and fmt(True) == "true" and fmt(None) == ""


def test_prolate_single(capsys):
    code, out, _ = out_of(capsys, ["prolate", "--c", "2"])
    assert code == 0 and "lambda0=0.880559922317" in out


def test_prolate_table(capsys):
    code, out, _ = out_of(capsys, ["prolate", "--table"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert all(abs(float(r["difference"])) < 1e-8 for r in rows)


def test_prolate_invert(capsys):
    code, out, _ = out_of(capsys, ["prolate", "--invert", "0.880559922317"])
    assert code == 0 and "c=2" in out


def test_c0(capsys):
    code, out, _ = out_of(capsys, ["c0"])
    lines = dict(line.split(" ", 1) for line in out.strip().splitlines())
    assert code == 0
    assert float(lines["lower"].split()[0]) == pytest.approx(1.1393830, abs=2e-6)
    assert float(lines["upper"].split()[0]) == pytest.approx(1.1481785, abs=2e-6)


def test_bounds_csv(capsys):
    code, out, _ = out_of(capsys, ["bounds", "--p-min", "1", "--p-max", "4", "--step", "0.5", "--out", "-"])
    assert code == 0 and "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 7
    assert all(float(r["lower"]) <= float(r["upper"]) for r in rows)


def test_bounds_long_and_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["bounds", "--p-min", "2", "--p-max", "4", "--step", "1", "--long", "--out"]
    assert run(argv + [str(a)]) == 0
    assert run(["--threads", "3"] + argv + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "p,side,method,value,err"


def test_bounds_rejects_unknown_method(capsys):
    code, _, err = out_of(capsys, ["bounds", "--p-min", "1", "--p-max", "2", "--step", "1",
                                   "--methods", "nope", "--out", "-"])
    assert code == 1 and "unknown methods" in err


def test_usage_errors(capsys):
    assert out_of(capsys, ["prolate", "--bogus"])[0] == 64
    assert out_of(capsys, ["nosuch"])[0] == 64
    assert out_of(capsys, ["prolate", "--c", "1", "--table"])[0] == 64
    assert out_of(capsys, ["--help"])[0] == 0


def test_domain_error_exit(capsys):
    code, _, err = out_of(capsys, ["certificate", "--p", "1", "--delta0", "0.6", "--gamma", "0.7", "--delta", "0.6"])
    assert code == 1 and err.startswith("error:")


def test_certificate(capsys):
    code, out, _ = out_of(capsys, ["certificate", "--p", "4", "--delta0", "0.6",
                                   "--gamma", "0.636619772368", "--delta", "0.636619772368"])
    assert code == 0 and "contradiction=true" in out


def test_extremal_json_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert run(["extremal", "--p", "2", "--n-zeros", "2", "--seed", "3", "--out", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    data = json.loads(paths[0].read_text())
    assert data["schema"] == 1 and data["N"] == 2
    assert data["lower_bound"] == pytest.approx(1.0, abs=1e-4)


def test_extremal_not_converged_exit(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(["extremal", "--p", "3", "--n-zeros", "4", "--max-iter", "5", "--out", str(path)]) == 2
    assert json.loads(path.read_text())["converged"] is False


def test_zero_set_commands(capsys):
    code, out, _ = out_of(capsys, ["rep-check", "--q", "1.7"])
    assert code == 0 and abs(float(out.split("deviation=")[1].split()[0])) < 1e-8
    code, out, _ = out_of(capsys, ["kplus", "--p", "2", "--lattice"])
    assert code == 0 and "conditional_upper_bound=1" in out
    code, out, _ = out_of(capsys, ["hb-upper", "--zeros", str(DATA / "p1_n12.json")])
    assert code == 0 and float(out.split("upper=")[1].split()[0]) >= 0.5409288219


def test_convolve_csv(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, _, err = out_of(capsys, ["convolve", "--variant", "normalized", "--grid", "1024", "--out", str(path)])
    assert code == 0 and "max_dev=" in err
    lines = path.read_text().splitlines()
    assert lines[0] == "xi,value" and len(lines) == 1 + 3 * 1024


def test_figure1(tmp_path, capsys):
    assert run(["figure1", "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "figure1.csv").open()))
    assert len(rows) == 301
    at3 = next(r for r in rows if float(r["p"]) == 3.0)
    assert float(at3["lower_fp"]) == pytest.approx(1.39368, abs=1e-3)
    assert rows[0]["upper_closed_form"] == ""
    compile((tmp_path / "plot_figure1.py").read_text(), "plot_figure1.py", "exec")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pwconst", "prolate", "--c", "2", "--nodes", "64"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "0.880559922317" in proc.stdout
