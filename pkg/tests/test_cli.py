import json
from pathlib import Path

import pytest

from confgsb.cli import run

GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).resolve().parents[1] / "src" / "confgsb" / "data"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


GOLDEN_RUNS = {
    "verify_bfk.json": ["verify", "--preset", "bfk", "--deg", "6", "--index", "4"],
    "verify_u2_heisenberg.json": ["verify", "--preset", "u2", "--lie", "heisenberg",
                                  "--nmax", "3", "--deg", "3"],
    "pbw_sl2_N3.json": ["pbw", "--lie", "sl2", "--N", "3", "--index", "6"],
    "basis_conf.json": ["basis", "--preset", "conf", "--gens", "a,b", "--N", "1", "--deg", "3",
                        "--dpow", "1", "--index", "1"],
    "nf_u3_sl2.json": ["nf", "--preset", "u3", "--lie", "sl2", "--expr", "R2[e] L1[f] |h",
                       "--trace"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_reports(capsys, name):
    argv = GOLDEN_RUNS[name] + ["--format", "json"]
    code, out, _ = call(capsys, *argv)
    assert out == (GOLDEN / name).read_text()
    # a second identical run is byte-identical
    assert call(capsys, *argv)[1] == out
    expect_fail = name == "verify_bfk.json"
    assert code == (1 if expect_fail else 0)


def test_verify_bfk_names_fork(capsys):
    code, out, _ = call(capsys, "verify", "--preset", "bfk", "--deg", "6", "--index", "4",
                        "--format", "json")
    assert code == 1
    forks = [f["fork"] for f in json.loads(out)["report"]["failed"]]
    assert any("R2[a] L1[a] |a" in f for f in forks)


def test_complete_then_verify(capsys, tmp_path):
    rules, log = tmp_path / "bfk.rules", tmp_path / "bfk.json"
    code, _, _ = call(capsys, "complete", "--preset", "bfk", "--deg", "6", "--index", "4",
                      "--rounds", "20", "--out", str(rules), "--log", str(log))
    assert code == 0
    assert rules.read_text().startswith("# preset: bfk\n# order: conformal\n")
    assert json.loads(log.read_text())["converged"] is True
    code, out, _ = call(capsys, "verify", "--rules", str(rules), "--deg", "6", "--index", "4",
                        "--format", "json")
    assert code == 0 and json.loads(out)["report"]["failures"] == 0
    code, out, _ = call(capsys, "basis", "--rules", str(rules), "--deg", "3", "--dpow", "2",
                        "--index", "3", "--show", "hilbert")
    assert out.strip() == "3 t + 3 t² + O(t³)"


def test_complete_round_cap_exit(capsys, tmp_path):
    code, _, _ = call(capsys, "complete", "--preset", "bfk", "--deg", "6", "--index", "4",
                      "--rounds", "1", "--out", str(tmp_path / "x.rules"))
    assert code == 1


def test_pbw_exit_codes(capsys):
    assert call(capsys, "pbw", "--lie", str(DATA / "sl2.toml"), "--N", "3")[0] == 0
    assert call(capsys, "pbw", "--lie", "sl2", "--N", "2", "--deg", "2")[0] == 0
    assert call(capsys, "pbw", "--lie", "sl2", "--deg", "2")[0] == 0
    assert call(capsys, "pbw", "--lie", "sl2", "--N", "4")[0] == 2


def test_validate(capsys, tmp_path):
    code, out, _ = call(capsys, "validate", "--lie", "sl2", "--format", "json")
    assert code == 0 and json.loads(out)["valid"]
    bad = tmp_path / "bad.toml"
    bad.write_text('basis = ["a", "b"]\n[bracket]\n"a,b" = { a = 1 }\n"b,a" = { a = 1 }\n')
    code, out, _ = call(capsys, "validate", "--lie", str(bad), "--format", "json")
    assert code == 1 and json.loads(out)["error"] == "AntisymmetryViolation"
    assert call(capsys, "verify", "--preset", "u3", "--lie", str(bad))[0] == 1
    assert call(capsys, "validate", "--lie", str(tmp_path / "missing.toml"))[0] == 2


def test_nf_and_reduce(capsys):
    code, out, _ = call(capsys, "nf", "--preset", "bfk", "--expr", "R2[a] L1[a] |a")
    assert code == 0 and out.strip() == "0"
    code, out, _ = call(capsys, "reduce", "--preset", "bfk", "--expr", "R2[a] L1[a] |a")
    assert out.strip() == "1 * L1[a] R2[a] |a"
    code, out, _ = call(capsys, "reduce", "--preset", "bfk", "--expr", "D L0[a] |a")
    assert out.strip() == "terminal"
    code, out, _ = call(capsys, "nf", "--preset", "u3", "--lie", "sl2", "--expr",
                        "R2[e] L1[f] |h", "--strategy", "random", "--seed", "3")
    ref = call(capsys, "nf", "--preset", "u3", "--lie", "sl2", "--expr", "R2[e] L1[f] |h")[1]
    assert out == ref


def test_usage_errors(capsys):
    assert call(capsys, "nf", "--preset", "bfk", "--expr", "L1[a |a")[0] == 2
    assert call(capsys, "verify")[0] == 2
    assert call(capsys, "verify", "--preset", "u3")[0] == 2
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "nf", "--preset", "bfk", "--expr", "R3[a] L3[a] L1[a] |a",
                "--budget", "1")[0] == 1


def test_rules_file_without_preset(capsys, tmp_path):
    f = tmp_path / "small.rules"
    f.write_text("# order: conformal\n# generators: a\nL0[a] L0[a] |a -> 0\n")
    code, out, _ = call(capsys, "basis", "--rules", str(f), "--deg", "3", "--dpow", "0",
                        "--index", "0", "--show", "count")
    # L0 a, R0 a; then L0 R0 a, R0 L0 a, R0 R0 a
    assert code == 0 and out.split("\n")[:3] == ["1: 1", "2: 2", "3: 3"]
    f.write_text("# order: conformal\n# generators: a\nL0[a] L0[a] |a => 0\n")
    assert call(capsys, "verify", "--rules", str(f))[0] == 2


def test_selftest_reports_corrupted_rules(capsys, tmp_path):
    f = tmp_path / "broken.rules"
    f.write_text("# preset: bfk\nL1[a] |a -> 5 * L7[a] L7[a] |a\n")
    from confgsb.selftest import run_selftest
    results = run_selftest(quick=True, rules_file=str(f))
    (entry,) = [r for r in results if r["name"].startswith("rules-file")]
    assert not entry["passed"] and "OrientationViolated" in entry["detail"]
    assert all(r["passed"] for r in results if r is not entry)
