import io
import subprocess
import sys

import pytest

from l2disc import cli, verify
from l2disc.errors import ConsistencyError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def origin(tmp_path):
    path = tmp_path / "origin.txt"
    assert run("generate", "--family", "hammersley", "--n", "0", "--out", str(path))[0] == 0
    return path


@pytest.fixture
def ham4(tmp_path):
    path = tmp_path / "h4.txt"
    run("generate", "--family", "hammersley", "--n", "4", "--out", str(path))
    return path


def test_generate_families(tmp_path):
    for args, n in ((("--family", "fibonacci", "--k", "7", "--symmetrize"), 26), (("--family", "random", "--n", "9", "--seed", "3"), 9)):
        path = tmp_path / "p.txt"
        code, out, _ = run("generate", *args, "--out", str(path))
        assert code == 0 and f"wrote {n} points" in out
        assert len([l for l in path.read_text().splitlines() if l.strip()]) == n


def test_l2_exact_origin(origin):
    code, out, _ = run("l2", "--in", str(origin), "--exact")
    assert code == 0
    assert "l2_squared       11/18" in out
    assert "normalized_ratio" not in out


def test_l2_oracle(ham4):
    code, out, _ = run("l2", "--in", str(ham4), "--oracle-samples", "20000", "--seed", "1")
    assert code == 0 and "oracle" in out and "normalized_ratio" in out


def test_haar(ham4, tmp_path):
    dump = tmp_path / "mu.csv"
    code, out, _ = run("haar", "--in", str(ham4), "--level", "3", "--dump", str(dump))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "level,parseval_partial,l2_squared,relative_gap" and len(lines) == 5
    rows = dump.read_text().splitlines()
    assert rows[0] == "j1,j2,m1,m2,mu,derivation"
    assert all(r.split(",")[5] in {"empty-closed-form", "one-point-closed-form", "general-sum"} for r in rows[1:])


def test_census(ham4, tmp_path):
    path = tmp_path / "c.csv"
    code, out, _ = run("census", "--in", str(ham4), "--level", "5", "--csv", str(path))
    assert code == 0
    assert "FAIL" not in out and "PASS" in out
    text = path.read_text()
    assert text.startswith("level,r,a_r\n") and "\nlevel,b0,b1,b2\n" in text


def test_master(ham4):
    code, out, _ = run("master", "--in", str(ham4))
    assert code == 0 and "chain            PASS" in out


def test_bounds(tmp_path):
    table = tmp_path / "k.csv"
    code, out, _ = run("bounds", "--grid", "1025", "--table", str(table), "--table-grid", "11")
    assert code == 0
    assert "delta_min      317/172032" in out
    values = {l.split()[0]: l.split()[1] for l in out.splitlines()}
    assert abs(float(values["c_bar_lower"]) - 0.0515599) < 1e-6
    assert abs(float(values["b_bar_lower"]) - 0.0610739) < 1e-6
    assert table.read_text().splitlines()[0] == "kappa,h,gamma,gamma_branch,delta"


def test_verify():
    code, out, _ = run("verify")
    assert code == 0
    assert out.count("PASS") == len(verify.CHECKS) and "FAIL" not in out


def test_exit_codes(tmp_path, origin):
    bad = tmp_path / "bad.txt"
    bad.write_text("0.1 nope\n")
    assert run("l2", "--in", str(bad))[0] == 2
    assert run("l2", "--in", str(tmp_path / "missing.txt"))[0] == 2
    assert run("frobnicate")[0] == 2
    code, out, err = run("l2", "--bogus")
    assert code == 2 and out == ""
    out_of_range = tmp_path / "oor.txt"
    out_of_range.write_text("1.5 0.5\n")
    code, out, err = run("l2", "--in", str(out_of_range))
    assert code == 1 and out == "" and err
    assert run("master", "--in", str(origin))[0] == 1
    assert run("generate", "--family", "hammersley", "--n", "40", "--out", str(tmp_path / "x"))[0] == 1


def test_consistency_exit_code(monkeypatch):
    def broken():
        yield "planted", False, "deliberately failing check"

    monkeypatch.setattr(cli.verify, "run_all", broken)
    code, out, err = run("verify")
    assert code == 3 and "FAIL planted" in out and "consistency error" in err


def test_consistency_from_bounds(monkeypatch):
    def boom(grid):
        raise ConsistencyError("planted")

    monkeypatch.setattr(cli.bounds, "theorem_constants", boom)
    assert run("bounds")[0] == 3


def test_determinism(ham4):
    for argv in (("l2", "--in", str(ham4), "--oracle-samples", "5000"), ("census", "--in", str(ham4), "--level", "4"),
                 ("master", "--in", str(ham4)), ("bounds", "--grid", "513")):
        assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point(origin):
    res = subprocess.run([sys.executable, "-m", "l2disc", "l2", "--in", str(origin), "--exact"], capture_output=True, text=True)
    assert res.returncode == 0 and "11/18" in res.stdout
    res = subprocess.run([sys.executable, "-m", "l2disc", "nope"], capture_output=True, text=True)
    assert res.returncode == 2 and res.stdout == "" and "usage" in res.stderr
