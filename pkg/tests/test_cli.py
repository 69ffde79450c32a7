import json

import pytest

from stablab.cli import main

S3 = "group S3\ngens a b\nrel a^3\nrel b^2\nrel (a b)^2\n"
C4_EXT = "group C4\ngens a\nrel a^4\ncentral a^2\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_group_multiplier(tmp_path, capsys):
    f = tmp_path / "s3.grp"
    f.write_text(S3)
    code, doc = run(capsys, "group", str(f), "--multiplier")
    assert code == 0
    assert doc["invariant_factors"] == []
    assert doc["schema_version"] == 1


def test_group_catalog_input(capsys):
    code, doc = run(capsys, "group", "catalog:V4", "--multiplier",
                    "--abelianization", "--cohomology", "2", "F2")
    assert code == 0
    assert doc["invariant_factors"] == [2]
    assert doc["abelianization"] == [2, 2]
    assert doc["cohomology"]["order"] == 8


def test_extension_subcommand(tmp_path, capsys):
    f = tmp_path / "c4.grp"
    f.write_text(C4_EXT)
    code, doc = run(capsys, "extension", str(f), "--five-term", "F2",
                    "--transgression", "F2")
    assert code == 0
    assert doc["total_order"] == 4 and doc["base_order"] == 2
    assert doc["five_term"]["exact"]
    assert doc["transgression"]["image_classes"] == 2


def test_extension_catalog_input(capsys):
    code, doc = run(capsys, "extension", "catalog:Heisenberg-3")
    assert code == 0
    assert doc["total_order"] == 27


def test_symspace_entry(capsys):
    code, doc = run(capsys, "symspace", "--entry", "SU3_SO3")
    assert code == 0
    assert doc["poincare"] == [1, 0, 0, 0, 0, 1]
    assert doc["odd_rhs"] is True


def test_symspace_verdict(capsys):
    code, doc = run(capsys, "symspace", "--verdict", "SO(3,1)+SO(5,1)")
    assert code == 0
    assert doc["verdict"] == "cocompact lattices not operator stable"


def test_stability_voiculescu(capsys):
    code, doc = run(capsys, "stability", "--voiculescu", "8", "--defect",
                    "--norm", "operator")
    assert code == 0
    assert doc["max_defect"] == pytest.approx(0.7653668647301798)


def test_stability_alpha(capsys):
    code, doc = run(capsys, "stability", "--alpha", "catalog:C2")
    assert code == 0
    assert doc["alpha"] == pytest.approx(2)


def test_verify_suite(capsys):
    code, doc = run(capsys, "verify", "--suite", "miller",
                    "--max-order", "8")
    assert code == 0
    assert doc["ok"]
    assert doc["suites"]["miller"]["total"] == 14


def test_computation_error_exit_1(capsys):
    code, doc = run(capsys, "group", "catalog:NoSuchGroup")
    assert code == 1
    assert doc["error"] == "UnknownEntry"


def test_usage_error_exit_2(capsys):
    code = main(["frobnicate"])
    capsys.readouterr()
    assert code == 2
    code = main(["group", "x.grp", "--bogus-flag"])
    capsys.readouterr()
    assert code == 2


def test_deterministic_output(capsys):
    _, a = run(capsys, "group", "catalog:D4", "--multiplier")
    _, b = run(capsys, "group", "catalog:D4", "--multiplier")
    assert a == b


def test_report_dir(tmp_path, capsys):
    cfg = tmp_path / "solve.cfg"
    cfg.write_text("case=cyclic:3\nn=4\ndelta=1e-2\ntrials=1\nseed=2\n")
    out = tmp_path / "out"
    code, doc = run(capsys, "stability", "--solve", str(cfg),
                    "--report-dir", str(out))
    assert code == 0
    assert (out / "results.csv").exists()
    assert any(p.endswith(".png") for p in doc["report_files"])
