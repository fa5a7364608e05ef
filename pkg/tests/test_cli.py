import json
import subprocess
import sys

import pytest

from mixmult.cli import InstanceFile, main

M_GENS = [[1, 0], [0, 1]]


def write(tmp_path, doc, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def base_doc(**task):
    return {"dim": 2,
            "ideals": {"m": M_GENS, "I": [[3, 0], [0, 3]]},
            "filtrations": {"F": {"kind": "adic", "ideal": "m"},
                            "G": {"kind": "integral_closure", "ideal": "I"}},
            "module": ["0"],
            "task": task}


def run(argv, capsys):
    status = main(argv)
    out, err = capsys.readouterr()
    return status, out, err


def test_mixed_table_command(tmp_path, capsys):
    path = write(tmp_path, base_doc(F="F", Fs=["F"]))
    status, out, _ = run(["mixed-table", path], capsys)
    assert status == 0
    doc = json.loads(out)
    assert doc["result"]["table"] == [{"type": [1, 0], "value": 1}, {"type": [0, 1], "value": 1}]
    assert doc["inputs"] == base_doc(F="F", Fs=["F"])
    assert doc["provenance"]["config"]["stabilization_bound"] == 16


def test_mixed_command(tmp_path, capsys):
    path = write(tmp_path, base_doc(F="F", Fs=["G"], k0=0, k=[1]))
    status, out, _ = run(["mixed", path], capsys)
    assert status == 0 and json.loads(out)["result"] == {"type": [0, 1], "value": 3}
    status, out, _ = run(["mixed", path, "--k0", "1", "--k", "0"], capsys)
    assert json.loads(out)["result"]["value"] == 1
    status, _, err = run(["mixed", path, "--k0", "1", "--k", "1"], capsys)
    assert status == 2 and "type" in err


def test_verify_cor27(tmp_path, capsys):
    path = write(tmp_path, base_doc(I="I"))
    status, out, _ = run(["verify", "cor27", path], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["verdict"] == "pass"
    assert doc["result"] == {"left": 4, "right": 4}


def test_verify_all(tmp_path, capsys):
    path = write(tmp_path, base_doc(F="F", Fs=["G"], J="m", I="I"))
    status, out, _ = run(["verify", "all", path], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["verdict"] == "pass"
    verdicts = {r["kind"]: r["verdict"] for r in doc["result"]["reports"]}
    assert verdicts["cor25"] == "inapplicable"  # no W1/W2 in the task
    assert verdicts["thm23i"] == "pass"


def test_rees_both(tmp_path, capsys):
    path = write(tmp_path, base_doc(J="m", Fs=["G"]))
    status, out, _ = run(["rees", path, "--method", "both"], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["result"] == {"sum": 4, "direct": 4}
    assert doc["verdict"] == "pass"


def test_undefined_multiplicity_exit_two(tmp_path, capsys):
    doc = base_doc(F="F", Fs=["F"])
    doc["module"] = ["m"]
    status, out, err = run(["mixed-table", write(tmp_path, doc)], capsys)
    assert status == 2 and out == ""
    assert "mixed multiplicity undefined" in err


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d["ideals"].update(I=[[3, 0, 1]]), "exponent"),
    (lambda d: d["filtrations"].update(H={"kind": "adic", "ideal": "nope"}), "unknown ideal"),
    (lambda d: d["task"].update(Fs=["nope"]), "unknown filtration"),
    (lambda d: d.update(extra=1), "unknown top-level"),
    (lambda d: d["filtrations"]["F"].update(kind="weird"), "unknown kind"),
])
def test_invalid_instances_exit_two(tmp_path, capsys, mutate, needle):
    doc = base_doc(F="F", Fs=["F"])
    mutate(doc)
    status, _, err = run(["mixed-table", write(tmp_path, doc)], capsys)
    assert status == 2 and needle in err


def test_bad_json_exit_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    status, _, err = run(["mixed-table", str(p)], capsys)
    assert status == 2 and "JSON" in err


def test_resource_error_exit_three(tmp_path, capsys):
    doc = base_doc(F="F", Fs=["G"])
    status, _, err = run(["mixed-table", write(tmp_path, doc), "--stabilization-bound", "1"],
                         capsys)
    assert status == 3 and "bound" in err


def test_failed_check_exit_one(tmp_path, capsys, monkeypatch):
    from mixmult import verify
    path = write(tmp_path, base_doc(F="F", Fs=["F"]))
    fake = verify.CheckReport("prop22", "", False, True, verify.FAIL, {})
    monkeypatch.setattr(verify, "run_check", lambda c, config: fake)
    status, out, _ = run(["verify", "prop22", path], capsys)
    assert status == 1 and json.loads(out)["verdict"] == "fail"


def test_instance_round_trip():
    doc = base_doc(F="F", Fs=["G"], J="m", k0=0, k=[1])
    inst = InstanceFile.from_dict(json.loads(json.dumps(doc)))
    assert inst.to_dict() == doc
    assert InstanceFile.from_dict(inst.to_dict()) == inst


def test_output_file_and_determinism(tmp_path, capsys):
    path = write(tmp_path, base_doc(F="G", Fs=["G", "F"]))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["mixed-table", path, "-o", str(out1)]) == 0
    assert main(["mixed-table", path, "-o", str(out2), "--workers", "3"]) == 0
    # worker count is echoed in provenance, so compare results and bases only
    a, b = json.loads(out1.read_text()), json.loads(out2.read_text())
    assert a["result"] == b["result"]
    assert a["provenance"]["base"] == b["provenance"]["base"]
    assert main(["mixed-table", path, "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_corpus_reports_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "mixmult.cli", "corpus", "--seed", "4", "--count", "2"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    doc = json.loads(first)
    assert doc["verdict"] == "pass" and len(doc["result"]["reports"]) == 16
