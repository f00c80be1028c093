import io
import subprocess
import sys

import pytest

from jacobi_approx.harness.cli import EXIT_CONFIG, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_bestapprox_abs():
    code, text = call("bestapprox", "--f", "abs_x", "--n", "2", "--p", "inf", "--alpha", "0", "--beta", "0")
    assert code == 0
    header, row = text.strip().splitlines()
    assert header == "f,n,p,alpha,beta,method,iterations,converged,error"
    fields = row.split(",")
    assert fields[:5] == ["abs_x", "2", "inf", "0", "0"]
    assert fields[7] == "true"
    assert float(fields[8]) == pytest.approx(0.5, abs=1e-3)


def test_bestapprox_p2():
    code, text = call("bestapprox", "--f", "x2", "--n", "3", "--p", "2", "--alpha", "1", "--beta", "1")
    assert code == 0
    assert float(text.splitlines()[1].split(",")[-1]) < 1e-12


def test_modulus_csv():
    code, text = call("modulus", "--f", "abs:1", "--deltas", "0.2:0.05:halve", "--p", "2", "--alpha", "1.5",
                      "--beta", "1.5")
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == "delta,omega"
    deltas = [float(l.split(",")[0]) for l in lines[1:]]
    omegas = [float(l.split(",")[1]) for l in lines[1:]]
    assert deltas == [0.05, 0.1, 0.2]
    assert 0 < omegas[0] < omegas[1] < omegas[2]


def test_translate_at_zero_is_identity():
    code, text = call("translate", "--f", "exp", "--t", "0", "--x=-0.5,0.25")
    assert code == 0
    rows = [l.split(",") for l in text.strip().splitlines()[1:]]
    assert float(rows[1][1]) == pytest.approx(1.2840254166877414, rel=1e-9)


def test_translate_symmetric_needs_basis():
    code, _ = call("translate", "--f", "exp", "--t", "0.1", "--symmetric")
    assert code == EXIT_CONFIG


def test_jackson_output():
    code, text = call("jackson", "--f", "const", "--q", "1", "--m", "3")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "# degree_bound=6"
    assert float(lines[1].split("=")[1]) < 1e-12
    assert lines[3] == "k,coefficient"


def test_corpus_list():
    code, text = call("corpus", "list")
    assert code == 0 and "tail:r:lam" in text


@pytest.mark.parametrize("argv", [
    ["bestapprox", "--f", "nope", "--n", "3"],
    ["bestapprox", "--f", "exp", "--n", "0"],
    ["bestapprox", "--f", "exp", "--n", "3", "--p", "0.5"],
    ["modulus", "--f", "exp", "--deltas", "1:2:halve"],
    ["verify", "direct", "--config", "/nonexistent.cfg"],
])
def test_configuration_errors(argv):
    assert call(*argv)[0] == EXIT_CONFIG


@pytest.mark.parametrize("argv", [["frobnicate"], [], ["bestapprox", "--n", "3"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        run(argv, io.StringIO())
    assert info.value.code == EXIT_CONFIG


def test_verify_writes_reports(tmp_path):
    cfg = tmp_path / "eq.cfg"
    cfg.write_text("corpus = abs:1\nn_list = 4,8,16,32\ndelta_list = 0.2:0.025:halve\n")
    out = tmp_path / "out" / "eq.txt"
    code, text = call("verify", "equivalence", "--config", str(cfg), "--out", str(out))
    assert code == 0
    listed = text.split()
    assert listed[0] == str(out)
    assert len(listed) == 3  # report plus one data file per section
    assert "# verdict=pass" in out.read_text()


def test_verify_inconclusive_exit_code(tmp_path):
    cfg = tmp_path / "inv.cfg"
    cfg.write_text("corpus = mono:3\nn_list = 4,8,16\ndelta_list = 0.2,0.1,0.05\n")
    code, text = call("verify", "inverse", "--config", str(cfg))
    assert code == 2
    assert text.startswith("# experiment=inverse")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jacobi_approx", "corpus", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "abs_x" in proc.stdout
