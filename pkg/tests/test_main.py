import json

import pytest

from sgk._version import VERSION
from sgk.inputs import fixture_path
from sgk.main import RunConfig, main, run_suite


def _fixture(name):
    return str(fixture_path(name))


def _summary(text):
    return json.loads(text.strip().splitlines()[-1])


def test_check_jacobi_passes(capsys):
    assert main(["check-jacobi", _fixture("gl11.json")]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "PASS liesuper.jacobi 64 triples"
    assert _summary(out) == {"pass": 1, "fail": 0, "elapsed": None}


def test_invalid_algebra_exit_codes(capsys):
    assert main(["check-jacobi", _fixture("gl11_bad_jacobi.json")]) == 2
    assert capsys.readouterr().err.startswith("sgk: ")
    assert main(["check-jacobi", "--allow-invalid", _fixture("gl11_bad_jacobi.json")]) == 1
    assert "FAIL liesuper.jacobi" in capsys.readouterr().out


def test_missing_input_file(capsys, tmp_path):
    assert main(["check-jacobi", str(tmp_path / "absent.json")]) == 2
    assert "absent.json" in capsys.readouterr().err


def test_split_check(capsys):
    assert main(["split-check", _fixture("gl11.json")]) == 1
    out = capsys.readouterr().out
    assert "FAIL supergroup.split [e12, e21] = e11+e22" in out.splitlines()
    assert main(["split-check", _fixture("abelian2.json"), _fixture("abelian2_model.json")]) == 0
    assert main(["split-check", _fixture("cp12_subpair.json")]) == 0
    assert "SPLIT" in capsys.readouterr().out


def test_check_hopf(capsys):
    assert main(["check-hopf", "--degree", "2", _fixture("gl11.json")]) == 0
    assert _summary(capsys.readouterr().out)["fail"] == 0


def test_group_axioms_are_deterministic(capsys):
    args = ["check-group-axioms", "--seed", "3", _fixture("abelian2_model.json")]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert "PASS supergroup.associativity" in first


def test_coset_check(capsys):
    subpair = _fixture("cp12_subpair.json")
    assert main(["coset-check", "--degree", "1", subpair, _fixture("cp12_member.json")]) == 0
    assert "PASS homogeneous.coset.cp12_member" in capsys.readouterr().out
    assert main(["coset-check", "--degree", "1", subpair, _fixture("cp12_nonmember.json")]) == 1
    assert "FAIL homogeneous.coset.cp12_nonmember" in capsys.readouterr().out


def test_isotropy_rep(capsys):
    assert main(["isotropy-rep", _fixture("cp12_subpair.json")]) == 0
    out = capsys.readouterr().out
    assert "PASS homogeneous.isotropy.homomorphism" in out


def test_morphism_check(capsys):
    assert main(["morphism-check", "--degree", "1", _fixture("cp12_subpair.json")]) == 0
    out = capsys.readouterr().out
    assert "PASS supergroup.morphism.perturbation perturbation detected at degree 1" in out.splitlines()


def test_demo_cp12(capsys):
    assert main(["demo-cp12"]) == 0
    out = capsys.readouterr().out
    assert "PASS homogeneous.cp12.coset_member" in out
    assert "up to degree 2" in out
    assert main(["demo-cp12", "--degree", "1"]) == 0
    assert "up to degree 1" in capsys.readouterr().out
    assert main(["demo-cp12", _fixture("gl11.json")]) == 2


def test_report_to_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    assert main(["check-jacobi", "--out", str(target), _fixture("abelian2.json")]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith("PASS liesuper.jacobi")


def test_timing_adds_measurements(capsys):
    assert main(["check-jacobi", "--timing", _fixture("abelian2.json")]) == 0
    summary = _summary(capsys.readouterr().out)
    assert summary["elapsed"] is not None
    assert "rss_mb" in summary


def test_bad_options(capsys):
    assert main(["check-jacobi", "--degree", "0", _fixture("gl11.json")]) == 2
    with pytest.raises(SystemExit):
        main(["no-such-command"])


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert VERSION in capsys.readouterr().out


def test_run_suite_returns_report():
    status, report = run_suite(RunConfig("check-jacobi", (_fixture("gl11.json"),)))
    assert status == 0
    assert report.lines() == ["PASS liesuper.jacobi 64 triples"]
    status, report = run_suite(RunConfig("check-jacobi", (_fixture("gl11.json"), _fixture("abelian3.json"))))
    assert status == 0
    assert report.lines() == ["PASS liesuper.jacobi 27 triples", "PASS liesuper.jacobi 64 triples"]
