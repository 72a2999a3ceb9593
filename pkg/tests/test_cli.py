import json

import pytest

from conftest import FIXTURES, read_fixture
from supergeom.cli import EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main, run_command
from supergeom.dsl import parse_atlas
from supergeom.symmetry import SKEW, validate_action


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return str(FIXTURES / name)


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", fx("cross_term.gsa"))
    assert code == EXIT_OK
    assert out.strip().endswith("valid")


def test_validate_broken_homogeneity(capsys):
    code, out, _ = run(capsys, "validate", fx("broken_homogeneity.gsa"))
    assert code == EXIT_INVALID
    assert "homogeneity" in out


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.gsa"
    bad.write_text("atlas vector rank 1\ncoord x even @(0)\ncoord x even @(0)\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == EXIT_PARSE
    assert "line 3" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
    code, _, err = run(capsys, "validate", "/nonexistent/file.gsa")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "flip", "--perm", "1 2 3", fx("cross_term.gsa"))
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "nice-coords", fx("cross_term.gsa"))
    assert code == EXIT_USAGE


def test_desuperize_golden(capsys):
    code, out, _ = run(capsys, "desuperize", fx("nmanifold_deg2.gsa"))
    assert code == EXIT_OK
    assert out == read_fixture("nmanifold_deg2.desuperized.gsa")
    doc = parse_atlas(out)
    assert all(c.parity == 0 for c in doc.atlas.chart)
    assert doc.action.flavor == SKEW and validate_action(doc.atlas, doc.action).ok


def test_reverse_parity_all(capsys):
    code, out, _ = run(capsys, "reverse-parity", "--slots", "all", fx("cross_term.gsa"))
    assert code == EXIT_OK
    assert out == read_fixture("cross_term.reversed.gsa")
    code, out2, _ = run(capsys, "reverse-parity", "--slots", "2 1", fx("cross_term.gsa"))
    assert out2 == out


def test_json_output_and_input(capsys, tmp_path):
    target = tmp_path / "cross_term.json"
    code, out, _ = run(capsys, "--format", "json", "-o", str(target), "tangent", fx("cross_term.gsa"))
    assert code == EXIT_OK and out == ""
    data = json.loads(target.read_text())
    assert data["schema"] == "gsa-atlas/1"
    assert data["kind"]["vector_slots"] == 3
    code, out, _ = run(capsys, "validate", str(target))
    assert code == EXIT_OK
    # flags are accepted after the command name too
    code, out, _ = run(capsys, "tangent", "--format", "json", fx("cross_term.gsa"))
    assert json.loads(out) == data


def test_pipeline_commands(capsys, tmp_path):
    code, polar, _ = run(capsys, "polarize", fx("nmanifold_deg2.gsa"))
    assert code == EXIT_OK
    path = tmp_path / "polar.gsa"
    path.write_text(polar)
    for argv in (["nice-coords", str(path)], ["diagonalize", str(path)], ["flip", "--perm", "2 1", str(path)]):
        code, out, _ = run(capsys, *argv)
        assert code == EXIT_OK, argv
        parse_atlas(out)
    code, diag, _ = run(capsys, "diagonalize", fx("nmanifold_deg2.gsa"))
    assert [c.name for c in parse_atlas(diag).atlas.chart] == ["x", "xi", "eta", "p"]


def test_flip_on_iterated_tangent(capsys, tmp_path):
    m = tmp_path / "line.gsa"
    m.write_text("atlas manifold\ncoord x even\ncoord s odd\nchart U\n")
    code, out, _ = run(capsys, "flip", "--tangent", "3", "--perm", "2 3 1", str(m))
    assert code == EXIT_OK
    doc = parse_atlas(out)
    assert doc.atlas.kind.vector_slots == 3
    assert list(doc.action.entries) == [(1, 2, 0)]


def test_check_laws_is_deterministic(capsys):
    code, first, _ = run(capsys, "check-laws", "--suite", "koszul", "--seed", "7")
    assert code == EXIT_OK
    code, second, _ = run(capsys, "check-laws", "--suite", "koszul", "--seed", "7")
    assert first == second
    assert "9216/9216" in first
    assert first.strip().endswith("all laws hold (seed 7)")


def test_check_laws_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GSA_SEED", "3")
    code, out, _ = run(capsys, "check-laws", "--suite", "algebra", "--count", "5")
    assert code == EXIT_OK
    assert "(seed 3)" in out


def test_run_command_alias(capsys):
    assert run_command(["validate", fx("nmanifold_deg2.gsa")]) == EXIT_OK
    capsys.readouterr()
