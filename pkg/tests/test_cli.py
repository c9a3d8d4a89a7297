import json

from hitchin_supports.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def test_report_json(capsys):
    code, out, _ = run_cli(capsys, "report", "--genus", "2", "--partition", "1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["delta_aff"] == 1
    assert doc["perversity_range"] == [1, 9]
    assert doc["local_system_ranks"]["3"] == 28
    assert doc["seed"] == 0


def test_report_trivial_partition_notes_full_base(capsys):
    code, out, _ = run_cli(
        capsys, "report", "--genus", "2", "--partition", "3", "--format", "md"
    )
    assert code == 0
    assert "no new support content" in out
    assert out.startswith("# Support stratum report")


def test_report_homology_verification(capsys):
    code, out, _ = run_cli(
        capsys,
        "report", "--genus", "2", "--partition", "1,1,1", "--verify", "homology",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["homology_checked"] is True
    assert doc["top_rank"] == 2


def test_report_usage_error(capsys):
    code, _, err = run_cli(capsys, "report", "--genus", "2", "--partition", "1,x")
    assert code == 2
    assert "error" in err


def test_report_csv(capsys):
    code, out, _ = run_cli(
        capsys, "report", "--genus", "2", "--partition", "1,1", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "field,value"
    assert any(line.startswith("delta_aff,1") for line in out.splitlines())


# ---------------------------------------------------------------------------
# complex
# ---------------------------------------------------------------------------


def test_complex_r4_cographic(capsys):
    code, out, _ = run_cli(capsys, "complex", "--r", "4", "--kind", "cographic")
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == {"2": 6}
    assert doc["f_vector"] == [1, 6, 15, 16]


def test_complex_flats_r4(capsys):
    code, out, _ = run_cli(capsys, "complex", "--r", "4", "--kind", "flats")
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == {"1": 6}


def test_complex_from_graph_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text('{"vertices": 2, "edges": [[0, 1], [0, 1]]}')
    code, out, _ = run_cli(
        capsys, "complex", "--graph", str(path), "--kind", "nonspanning"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == {"-1": 1}  # both subsets of size <= 1 fail... only the empty face survives


def test_complex_faces_flag(capsys):
    code, out, _ = run_cli(capsys, "complex", "--r", "3", "--faces")
    assert code == 0
    doc = json.loads(out)
    assert doc["faces"]["0"] == [[0], [1], [2]]


def test_complex_source_validation(capsys):
    code, _, err = run_cli(capsys, "complex", "--r", "3", "--partition", "1,1")
    assert code == 2
    assert "exactly one" in err


def test_complex_dual_graph_source(capsys):
    code, out, _ = run_cli(
        capsys, "complex", "--genus", "2", "--partition", "1,1"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == {"0": 1}


# ---------------------------------------------------------------------------
# character
# ---------------------------------------------------------------------------


def test_character_r3(capsys):
    code, out, _ = run_cli(capsys, "character", "--r", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "EQUAL"
    assert doc["top_homology"] == {"1+1+1": 2, "2+1": 0, "3": -1}


def test_character_restriction_block(capsys):
    code, out, _ = run_cli(capsys, "character", "--r", "3", "--alphas", "2,1")
    assert code == 0
    doc = json.loads(out)
    assert "restriction" in doc
    assert doc["restriction"]["1+1 x 1"] == 2


def test_character_r_out_of_bounds(capsys):
    code, _, err = run_cli(capsys, "character", "--r", "7")
    assert code == 2


# ---------------------------------------------------------------------------
# cks
# ---------------------------------------------------------------------------


def test_cks_two_parts(capsys):
    code, out, _ = run_cli(
        capsys, "cks", "--genus", "2", "--partition", "1,1", "--exterior", "1"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["top_weight"] == {"0": 0, "1": 1}
    assert doc["cross_check"] == "EQUAL"


def test_cks_exterior_zero(capsys):
    code, out, _ = run_cli(
        capsys, "cks", "--genus", "2", "--partition", "1,1", "--exterior", "0"
    )
    assert code == 0
    doc = json.loads(out)
    assert all(v == 0 for v in doc["top_weight"].values())


def test_cks_three_parts_exterior_four(capsys):
    code, out, _ = run_cli(
        capsys, "cks", "--genus", "2", "--partition", "1,1,1", "--exterior", "4"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["top_weight"]["4"] == 2
    assert doc["cross_check"] == "EQUAL"


def test_cks_wedge_limit_guard(capsys):
    code, _, err = run_cli(
        capsys,
        "cks", "--genus", "2", "--partition", "1,1,1", "--exterior", "4",
        "--wedge-limit", "100",
    )
    assert code == 2
    assert "too large" in err


# ---------------------------------------------------------------------------
# selftest and determinism
# ---------------------------------------------------------------------------


def test_selftest_single_property(capsys):
    code, out, err = run_cli(
        capsys, "selftest", "--only", "doubling", "--seed", "7", "--count", "6",
        "--max-edges", "6",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["seed"] == 7
    assert [r["name"] for r in doc["results"]] == ["doubling"]
    assert "PASS doubling" in err


def test_identical_flags_are_byte_identical(capsys):
    args = ("report", "--genus", "2", "--partition", "2,1", "--format", "json")
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_output_to_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "report", "--genus", "2", "--partition", "1,1", "--output", str(target),
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["delta_aff"] == 1


def test_markdown_anchors(tmp_path, capsys):
    anchors = tmp_path / "anchors.json"
    anchors.write_text('{"delta_aff": "support range lower end"}')
    code, out, _ = run_cli(
        capsys,
        "report", "--genus", "2", "--partition", "1,1",
        "--format", "md", "--anchors", str(anchors),
    )
    assert code == 0
    assert "support range lower end" in out
