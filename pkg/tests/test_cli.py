import json
from pathlib import Path

import pytest

from conftest import data_file
from ainfree.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from ainfree.models import FunctorFile, LiftFile, MapFile


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_trees(capsys):
    code, out = run(capsys, "trees", "3", "--contractions")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["count"] == 3
    corolla = next(entry for entry in report["trees"] if entry["tree"] == "(| | |)")
    assert corolla["contractions"] == []
    comb = next(entry for entry in report["trees"] if entry["tree"] == "((| |) |)")
    assert comb["contractions"] == [{"edge": "/0", "result": "(| | |)", "beta": 3}]


def test_trees_rejects_zero(capsys):
    code, _ = run(capsys, "trees", "0")
    assert code == EXIT_INPUT


def test_output_is_deterministic(capsys):
    _, first = run(capsys, "trees", "4")
    _, second = run(capsys, "trees", "4")
    assert first == second


def test_verify_free(capsys):
    code, out = run(capsys, "verify", data_file("quiver.json"), "--leaves", "2")
    assert code == EXIT_OK
    report = json.loads(out)
    assert all(check["passed"] for check in report["checks"])
    assert report["details"]["basis"] == 6


@pytest.mark.parametrize(
    "name, arity, expected",
    [("unital_mutated.json", "2", EXIT_FAILED), ("massey.json", "4", EXIT_OK), ("unital.json", "3", EXIT_OK)],
)
def test_verify_category(capsys, name, arity, expected):
    code, out = run(capsys, "verify", data_file(name), "--mode", "an-category", "--arity", arity)
    assert code == expected
    if expected == EXIT_FAILED:
        assert json.loads(out)["checks"][0]["counterexample"]["arity"] == 2


def test_verify_equivalence(capsys):
    code, out = run(
        capsys, "verify", data_file("quiver.json"), "--mode", "equivalence",
        "--category", data_file("unital.json"), "--map", data_file("phi.json"), "--map-g", data_file("phi.json"),
        "--leaves", "2",
    )
    assert code == EXIT_OK
    report = json.loads(out)
    assert len(report["checks"]) == 6
    assert report["checks"][0]["name"] == "A_3 identities of A"


def test_equivalence_checks_the_target_first(capsys, mutated_with_units):
    code, out = run(
        capsys, "verify", data_file("quiver.json"), "--mode", "equivalence",
        "--category", mutated_with_units, "--map", data_file("phi.json"), "--map-g", data_file("phi.json"),
        "--leaves", "2",
    )
    assert code == EXIT_FAILED
    report = json.loads(out)
    assert len(report["checks"]) == 1
    assert report["checks"][0]["counterexample"]["arity"] == 2
    assert "A1 basis" not in report["details"]


def test_equivalence_needs_maps(capsys):
    code, _ = run(capsys, "verify", data_file("quiver.json"), "--mode", "equivalence")
    assert code == EXIT_INPUT


def test_bad_input(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json", encoding="utf-8")
    assert run(capsys, "verify", str(garbage))[0] == EXIT_INPUT
    assert run(capsys, "verify", data_file("quiver.json"), "--mode", "nope")[0] == EXIT_INPUT


def test_extend_writes_a_functor_file(capsys, tmp_path):
    out = tmp_path / "f.json"
    code, _ = run(
        capsys, "extend", data_file("dg_quiver.json"), data_file("dg_map.json"),
        "--category", data_file("unital.json"), "--leaves", "2", "--out", str(out),
    )
    assert code == EXIT_OK
    document = FunctorFile.model_validate_json(out.read_text(encoding="utf-8"))
    assert document.leaves == 2
    assert document.object_map == {"P": "X", "R": "X"}
    assert any(entry.inputs[0].word == ["u"] for entry in document.components)


def test_extend_rejects_a_broken_map(capsys):
    code, _ = run(
        capsys, "extend", data_file("dg_quiver.json"), data_file("broken_map.json"),
        "--category", data_file("unital.json"),
    )
    assert code == EXIT_INPUT


def test_lift(capsys, tmp_path):
    out = tmp_path / "lift.json"
    code, _ = run(
        capsys, "lift", data_file("quiver.json"), "--category", data_file("unital.json"),
        "--map", data_file("phi.json"), "--map-g", data_file("phi.json"), "--leaves", "2", "--out", str(out),
    )
    assert code == EXIT_OK
    document = LiftFile.model_validate_json(out.read_text(encoding="utf-8"))
    assert document.leaves == 2
    assert document.transformations


def test_report(capsys):
    code, out = run(capsys, "report", "--quiver", data_file("dg_quiver.json"), "--leaves", "3")
    assert code == EXIT_OK
    assert json.loads(out)["details"]["tree counts"] == [1, 1, 3, 11, 45, 197, 903]


def test_extend_reproduces_golden_functor(capsys):
    code, out = run(
        capsys, "extend", data_file("golden_quiver.json"), data_file("golden_map.json"),
        "--category", data_file("unital.json"), "--leaves", "3",
    )
    assert code == EXIT_OK
    golden = FunctorFile.model_validate_json(Path(data_file("golden_functor.json")).read_text(encoding="utf-8"))
    assert FunctorFile.model_validate_json(out) == golden


def test_restrict_inverts_extend(capsys, tmp_path):
    functor = tmp_path / "f.json"
    restricted = tmp_path / "map.json"
    run(
        capsys, "extend", data_file("dg_quiver.json"), data_file("dg_map.json"),
        "--category", data_file("unital.json"), "--leaves", "3", "--out", str(functor),
    )
    code, _ = run(
        capsys, "restrict", data_file("dg_quiver.json"), str(functor),
        "--category", data_file("unital.json"), "--out", str(restricted),
    )
    assert code == EXIT_OK
    document = MapFile.model_validate_json(restricted.read_text(encoding="utf-8"))
    assert document.object_map == {"P": "X", "R": "X"}
    values = {entry.inputs[0]: [(t.name, t.coeff) for t in entry.value] for entry in document.generators}
    assert values == {"u": [("a", "1")], "v": [("b", "1")], "w": [("b", "2")]}


def test_restrict_flags_a_tampered_functor(capsys, tmp_path):
    document = json.loads(Path(data_file("golden_functor.json")).read_text(encoding="utf-8"))
    document["components"][2]["value"][0]["coeff"] = "1"
    functor = tmp_path / "f.json"
    functor.write_text(json.dumps(document), encoding="utf-8")
    code, _ = run(capsys, "restrict", data_file("golden_quiver.json"), str(functor), "--category", data_file("unital.json"))
    assert code == EXIT_FAILED
