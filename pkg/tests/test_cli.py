import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hardylab.cli import main

GOLDEN = Path(__file__).parent / "golden"
EXP_CAYLEY = '{"kind": "closed_form", "name": "exp_cayley"}'
SMALL = ["--grid", "1024", "--radii", "10"]


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_lines(path, values, header=None):
    lines = ([header] if header else []) + [repr(float(v)) for v in values]
    path.write_text("\n".join(lines) + "\n")
    return path


def nodes(n):
    return 2 * np.pi * (np.arange(n) + 0.5) / n


def test_help_lists_subcommands():
    res = subprocess.run([sys.executable, "-m", "hardylab", "--help"],
                         capture_output=True, text=True, check=True)
    for cmd in ("synth", "classify", "gauge", "harness", "HARDYLAB_THREADS"):
        assert cmd in res.stdout


def test_synth_golden(tmp_path, capsys):
    data = write_lines(tmp_path / "zero.txt", np.zeros(8))
    code, out, _ = run(["synth", data, "--grid", 8, "--out", tmp_path / "o"], capsys)
    assert code == 0 and json.loads(out)["command"] == "synth"
    assert (tmp_path / "o" / "table.csv").read_text() == (GOLDEN / "synth_zero_table.csv").read_text()
    assert (tmp_path / "o" / "function.json").read_text() == \
        (GOLDEN / "synth_zero_function.json").read_text()


def test_synth_constant_phase(tmp_path, capsys):
    data = write_lines(tmp_path / "zero.txt", np.zeros(16))
    code, _, _ = run(["synth", data, "--grid", 64, "--c-angle", 1.0, "--out", tmp_path], capsys)
    table = np.loadtxt(tmp_path / "table.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(table[:, 2] + 1j * table[:, 3], np.exp(1j), atol=1e-15)


def test_synth_cos_is_exp(tmp_path, capsys):
    data = write_lines(tmp_path / "cos.txt", np.cos(nodes(4096)))
    assert run(["synth", data, "--out", tmp_path], capsys)[0] == 0
    t = np.loadtxt(tmp_path / "table.csv", delimiter=",", skiprows=1)
    z = t[:, 0] * np.exp(1j * t[:, 1])
    np.testing.assert_allclose(t[:, 2] + 1j * t[:, 3], np.exp(z), atol=1e-8)


def test_synth_modulus_header_and_resampling(tmp_path, capsys):
    data = write_lines(tmp_path / "rho.txt", np.abs(1 - np.exp(1j * nodes(2048))), "modulus")
    assert run(["synth", data, "--out", tmp_path], capsys)[0] == 0
    t = np.loadtxt(tmp_path / "table.csv", delimiter=",", skiprows=1)
    row = t[(t[:, 0] == 0.5) & (t[:, 1] == 0.0)][0]
    assert abs(row[4] - 0.5) <= 1e-3


def test_synth_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nabc\n")
    assert run(["synth", bad, "--out", tmp_path], capsys)[0] == 2
    zero_mod = write_lines(tmp_path / "zm.txt", [1.0, 0.0, 1.0, 1.0], "modulus")
    code, _, err = run(["synth", zero_mod, "--out", tmp_path], capsys)
    assert code == 3 and "non-finite" in err
    assert run(["synth", tmp_path / "missing.txt"], capsys)[0] == 2


@pytest.mark.parametrize("spec,smirnov,outer", [
    ('{"kind": "reciprocal", "of": {"kind": "singular_inner", "masses": [[0, 1]]}}',
     "not-smirnov", "not-outer"),
    ('{"kind": "closed_form", "name": "one_minus_z"}', "smirnov", "outer"),
    ('{"kind": "constant", "re": 5}', "smirnov", "outer"),
])
def test_classify_examples(spec, smirnov, outer, capsys):
    code, out, _ = run(["classify", spec], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["schema_version"] == "1.0"
    assert rep["smirnov"]["classification"] == smirnov
    assert rep["outer"]["classification"] == outer
    assert rep["config"]["grid"] == 4096 and rep["spec"] == json.loads(spec)
    assert len(rep["smirnov"]["interior_integrals"]) == 12
    if smirnov == "not-smirnov":
        assert rep["smirnov"]["gap"] == pytest.approx(1.0, abs=2e-3)


def test_classify_zero_bearing_has_no_outer_block(capsys):
    code, out, _ = run(["classify", '{"kind": "blaschke", "zeros": [[0.5, 0]]}', *SMALL], capsys)
    assert code == 0 and "outer" not in json.loads(out)


def test_classify_estimation_failure_writes_partial_report(tmp_path, capsys):
    # an odd grid puts a node on the atom at theta = pi
    spec = '{"kind": "singular_inner", "masses": [[3.141592653589793, 1]]}'
    code, _, err = run(["classify", spec, "--grid", 5, "--out", tmp_path / "r.json"], capsys)
    rep = json.loads((tmp_path / "r.json").read_text())
    assert code == 4 and "BoundaryEstimationError" in rep["error"]
    assert "smirnov" not in rep and "hardylab" in err


@pytest.mark.parametrize("args", [["classify", '{"kind": "nope"}'], ["classify", "{broken"],
                                  ["classify", '{"kind": "constant"}', "--grid", "2"],
                                  ["harness", EXP_CAYLEY, "--a", "1.5"]])
def test_parse_errors_exit_2(args, capsys):
    assert run(args, capsys)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["harness", EXP_CAYLEY, "--mode", "bogus"])
    assert exc.value.code == 2


def test_gauge_from_classify_report(tmp_path, capsys):
    spec = '{"kind": "closed_form", "name": "one_minus_z"}'
    run(["classify", spec, *SMALL, "--out", tmp_path / "c.json"], capsys)
    code, out, _ = run(["gauge", "--report", tmp_path / "c.json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["levels"] == 20
    assert rep["config"]["grid"] == 1024
    assert max(m["integral"] for m in rep["members"]) <= 1.0
    assert rep["verification"]["holds"]


def test_gauge_constant_families(capsys):
    e = '{"kind": "constant", "re": 2.718281828459045}'
    rep = json.loads(run(["gauge", "--spec", e, *SMALL], capsys)[1])
    assert min(rep["knots"]) >= 1.0 - 1e-12
    assert rep["verification"]["sup_integral"] == 0.0
    one = '{"kind": "constant", "re": 1}'
    rep = json.loads(run(["gauge", "--spec", one, "--levels", 1, *SMALL], capsys)[1])
    assert len(rep["knots"]) == 1
    assert all(m["integral"] == 0.0 for m in rep["members"])


def test_gauge_exit_codes(tmp_path, capsys):
    assert run(["gauge", "--spec", EXP_CAYLEY, *SMALL], capsys)[0] == 5
    assert run(["gauge"], capsys)[0] == 2
    (tmp_path / "junk.json").write_text("{}")
    assert run(["gauge", "--report", tmp_path / "junk.json"], capsys)[0] == 2


def test_harness_outputs(tmp_path, capsys):
    args = ["harness", EXP_CAYLEY, *SMALL, "--count", 6, "--seed", 5, "--out", tmp_path]
    code, out, _ = run(args, capsys)
    assert code == 0 and out == ""
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["verdicts"] == {"log+": "not"}
    assert len(rep["maps"]) == 6 + 10
    tail = np.loadtxt(tmp_path / "tail_logplus.csv", delimiter=",", skiprows=1)
    assert tail.shape == (100, 2)
    np.testing.assert_allclose(tail[:, 1], rep["ui"]["log+"]["tail_sup"])


def test_harness_outer_mode(capsys):
    args = ["harness", '{"kind": "closed_form", "name": "exp"}', *SMALL, "--mode", "outer",
            "--count", 6]
    rep = json.loads(run(args, capsys)[1])
    assert rep["verdicts"] == {"log+": "uniformly-integrable", "log-": "uniformly-integrable"}
    assert all(s["classification"] == "outer" for s in rep["spot_checks"])


def test_harness_constant_trivially_ui(capsys):
    rep = json.loads(run(["harness", '{"kind": "constant", "re": 3}', *SMALL, "--count", 5],
                         capsys)[1])
    assert rep["verdicts"] == {"log+": "uniformly-integrable"}


def test_outer_mode_needs_zero_free(capsys):
    args = ["harness", '{"kind": "blaschke", "zeros": [[0.5, 0]]}', "--mode", "outer"]
    assert run(args, capsys)[0] == 2


def test_verdicts_do_not_change_exit_code(capsys):
    for spec in (EXP_CAYLEY, '{"kind": "closed_form", "name": "exp"}'):
        assert run(["classify", spec, *SMALL], capsys)[0] == 0


def test_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("HARDYLAB_THREADS", "1")
    assert run(["classify", '{"kind": "constant", "re": 2}', *SMALL], capsys)[0] == 0
    monkeypatch.setenv("HARDYLAB_THREADS", "0")
    assert run(["classify", '{"kind": "constant", "re": 2}', *SMALL], capsys)[0] == 2


def test_harness_is_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        run(["harness", EXP_CAYLEY, *SMALL, "--count", 8, "--seed", 3, "--out", tmp_path / name],
            capsys)
        outs.append([(tmp_path / name / f).read_bytes() for f in ("report.json", "tail_logplus.csv")])
    assert outs[0] == outs[1]
