import json

import pytest

from aidlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_spec_validate(capsys, tmp_path):
    assert run(capsys, "spec", "validate", "--rank", "2")[0] == 0
    g = tmp_path / "g.txt"
    g.write_text("# A2\n2, -1\n-1 2\n")
    code, out, _ = run(capsys, "spec", "validate", "--rank", "2", "--gram", str(g), "--format", "json")
    assert code == 0 and json.loads(out)["spec"]["gram"] == [["2", "-1"], ["-1", "2"]]
    g.write_text("1 2\n2 1\n")
    code, _, err = run(capsys, "spec", "validate", "--rank", "2", "--gram", str(g))
    assert code == 2 and "minor of order 2" in err


def test_bracket(capsys):
    assert run(capsys, "bracket", "h1 t^2", "h1 t^-2", "--gram", "preset:a1")[1] == "K"
    assert run(capsys, "bracket", "h1 t^2", "h1 t^-2", "--variant", "loop")[1] == "0"
    code, _, err = run(capsys, "bracket", "x1 t^2", "h1")
    assert code == 2 and "odd exponent" in err


def test_der_check_exit_codes(capsys):
    assert run(capsys, "der", "check", "--ad", "h1 t^2 + x1 t^1")[0] == 0
    code, out, _ = run(capsys, "der", "check", "--variant", "finite", "--image", "x1 t^1=h1")
    assert code == 1 and "not a derivation" in out
    assert run(capsys, "der", "check")[0] == 2


def test_der_split_and_classify(capsys):
    code, out, _ = run(capsys, "der", "classify", "--cent", "1", "t^2", "--window", "4")
    assert code == 0 and out == "f_1: t^2"
    code, out, _ = run(capsys, "der", "split", "--ad", "h1 t^2", "--window", "4", "--format", "json")
    data = json.loads(out)
    assert data["delta"]["images"] == [] and data["d"]["images"]


def test_aid_verbs(capsys, tmp_path):
    session = tmp_path / "s.json"
    assert run(capsys, "aid", "make-dij", "1", "1", "--gram", "preset:a1",
               "--format", "json", "--out", str(session))[0] == 0
    code, out, _ = run(capsys, "aid", "solve", "h1 t^2 + h1 t^4 + x1 t^1",
                       "--session", str(session), "--map", "D_1,1", "--window", "4")
    assert code == 0 and out.startswith("solved")
    assert run(capsys, "aid", "normalize", "--dij", "1,1")[1] == "a_1,1 = 1\ny = 0"
    assert run(capsys, "aid", "certify", "--dij", "1,1", "--count", "5")[0] == 0
    code, out, _ = run(capsys, "aid", "certify", "--dij", "1,0")
    assert code == 1 and out.startswith("refuted")
    assert run(capsys, "aid", "independence", "--rank", "2")[1] == "independent"


def test_suite_run(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"split_samples": 10, "inner_samples": 5, "normal_samples": 8,
                               "parser_samples": 50, "linalg_samples": 20, "random_probes": 5}))
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "suite", "run", "--config", str(cfg), "--rank", "1",
                     "--gram", "preset:a1", "--window", "4", "--out", str(out), "--format", "json")
    assert code == 0
    data = json.loads(out.read_text())
    assert data["metadata"]["config"]["window"] == 4
    assert any(c["status"] == "finding" for c in data["checks"])


def test_suite_run_rejections(capsys, tmp_path):
    assert run(capsys, "suite", "run", "--window", "0")[0] == 2
    bad = tmp_path / "c.json"
    bad.write_text('{"bogus": 1}')
    assert run(capsys, "suite", "run", "--config", str(bad))[0] == 2
    assert run(capsys, "suite", "run", "--rank", "1", "--out", str(tmp_path / "no" / "r.json"))[0] == 2


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["aid", "frobnicate"])
    assert info.value.code == 2
