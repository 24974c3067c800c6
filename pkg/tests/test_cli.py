import json

import pytest

from bocskit import fixtures
from bocskit.cli import parse_field, run, UsageError
from bocskit.embed import kronecker_exemplar


def fx(name):
    return str(fixtures.path(name))


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_endolength_of_simple_fixture(capsys):
    assert run(["endolength", fx("simple_module.json")]) == 0
    out = out_json(capsys)
    assert out["endolength"] == 1 and out["seed"] == 0 and out["tool"] == "bocskit"


def test_endolength_cap(tmp_path, capsys):
    assert run(["pid", "module", "--field", "3", "--poly", "[1,0,1]", "-n", "2", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    assert run(["endolength", str(tmp_path / "module.json")]) == 0
    assert out_json(capsys)["endolength"] == 2
    assert run(["endolength", str(tmp_path / "module.json"), "--cap-dim", "3"]) == 1
    assert "--cap-dim" in capsys.readouterr().err


def test_enorm(tmp_path, capsys):
    mod = fixtures.load("family_kronecker_f3.json")["modules"][0]
    (tmp_path / "m.json").write_text(json.dumps(mod))
    assert run(["enorm", fx("layer_kronecker_f3.json"), str(tmp_path / "m.json")]) == 0
    out = out_json(capsys)
    assert out["scaling_holds"] and out["enorm"] >= 1


def test_reduce_regularization_trace(capsys):
    assert run(["reduce", fx("layer_delta_w_u.json")]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert lines[0]["command"] == "reduce"
    cases = [l["case"] for l in lines if "case" in l]
    assert len(cases) == 1 and "regularization" in cases[0]


def test_embed_verify(tmp_path, capsys):
    assert run(["embed-verify", "kronecker:3", fx("family_f3_deg3.json"), "--field", "3", "--out", str(tmp_path)]) == 0
    out = out_json(capsys)
    assert out["verification"]["passed"] and out["control"]["c_prime"] == 2
    assert (tmp_path / "embed_verify.json").exists()


def test_embed_verify_failure_writes_certificate(tmp_path, capsys):
    _, R, Z = kronecker_exemplar(2)
    data = Z.to_json()
    data["actions"]["a1"] = [[[0], [0]], [[0], [0]]]
    (tmp_path / "z.json").write_text(json.dumps(data))
    (tmp_path / "fam.json").write_text(json.dumps({"atoms": [[0, 1], [1, 1]], "levels": [1]}))
    code = run(["embed-verify", str(tmp_path / "z.json"), str(tmp_path / "fam.json"), "--out", str(tmp_path)])
    assert code == 2
    cert = json.loads((tmp_path / "embed_verify.certificate.json").read_text())
    assert cert[0]["check"] == "reflects" and cert[0]["iso"] is not None


def test_ebtii_ladder(tmp_path, capsys):
    args = ["ebtii", "kronecker:3", "--levels", "1", "2", "3", "--count", "4", "--out", str(tmp_path)]
    assert run(args) == 0
    out = out_json(capsys)
    assert out["endolengths"] == [2, 4, 6] and out["seed"] == 0
    assert (tmp_path / "ebtii.csv").read_text().splitlines()[0] == "level,endolength,size,certified"
    first = (tmp_path / "ebtii.json").read_bytes()
    assert run(args) == 0
    assert (tmp_path / "ebtii.json").read_bytes() == first


def test_ebtii_degree_cap(tmp_path, capsys):
    assert run(["ebtii", "kronecker:2", "--levels", "1", "--count", "50", "--cap", "3", "--out", str(tmp_path)]) == 1
    assert "--cap-deg 3" in capsys.readouterr().err
    assert (tmp_path / "ebtii.certificate.json").exists()


def test_ebtii_csv(capsys):
    assert run(["ebtii", "kronecker:2", "--levels", "1", "--count", "3", "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines()[1] == "1,2,3,True"


def test_pid_subcommands(capsys):
    assert run(["pid", "list-atoms", "--field", "2", "--cap-deg", "4"]) == 0
    assert out_json(capsys)["count"] == 8
    assert run(["pid", "module", "--field", "3", "--poly", "[1,0,1]", "-n", "2"]) == 0
    assert len(out_json(capsys)["x_action"]) == 4
    assert run(["pid", "ar-seq", "--field", "2", "--poly", "[0,1]", "-n", "2"]) == 0
    assert all(out_json(capsys)["checks"].values())
    assert run(["pid", "list-atoms", "--field", "2^2", "--twist", "1", "--cap-deg", "1"]) == 0


def test_usage_errors(tmp_path, capsys):
    assert run([]) == 1
    assert run(["nope"]) == 1
    assert run(["endolength", str(tmp_path / "missing.json")]) == 1
    assert run(["pid", "module"]) == 1
    assert run(["pid", "module", "--poly", "[1]"]) == 1
    assert run(["pid", "list-atoms", "--field", "4"]) == 1
    assert run(["ebtii", "kronecker:6"]) == 1
    assert run(["ebtii", "kronecker:3", "--levels", "2", "1"]) == 1
    assert run(["endolength", fx("simple_module.json"), "--seed", "-1"]) == 1
    (tmp_path / "bad.json").write_text("{}")
    assert run(["endolength", str(tmp_path / "bad.json")]) == 1


def test_parse_field():
    assert parse_field("3") == (3, 1) and parse_field("2^3") == (2, 3)
    with pytest.raises(UsageError):
        parse_field("two")
