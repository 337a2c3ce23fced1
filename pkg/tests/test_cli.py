"""Command-line client: exit codes, output formats, determinism."""

from __future__ import annotations

import json

import pytest

from clk.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------


def test_success_exits_zero(capsys):
    code, out, err = _run(capsys, "invariant", "3_1", "--format", "json")
    assert code == 0
    assert json.loads(out)["chi_cl"] == 1


def test_parse_error_exits_two_with_position(capsys):
    code, out, err = _run(capsys, "invariant", "2b(4,1)")
    assert code == 2
    assert "p must be odd" in err
    assert "position 0" in err


def test_malformed_sum_exits_two(capsys):
    code, _, err = _run(capsys, "invariant", "3_1 # ")
    assert code == 2
    assert "error:" in err


def test_domain_error_exits_one(capsys):
    # verify-cstar needs a connected sum of exactly two atoms
    code, _, err = _run(capsys, "verify-cstar", "3_1")
    assert code == 1
    assert "error:" in err


def test_unknown_subcommand_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "clk" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# JSON output
# ---------------------------------------------------------------------------


def test_connected_sum_json_report(capsys):
    code, out, _ = _run(
        capsys,
        "invariant",
        "3_1 # 4_1",
        "--format",
        "json",
        "--pairs",
        "5",
        "--samples",
        "20",
    )
    assert code == 0
    body = json.loads(out)
    assert body["chi_cl"] == 3
    assert body["decomposition"] == {"atoms": [1, 2], "type_ii_chi": 0}
    assert [e["provenance"] for e in body["bad_set"]].count("parabolic") == 1


def test_json_output_is_byte_identical_across_runs(capsys):
    argv = ("invariant", "4_1", "--format", "json", "--samples", "20", "--seed", "5")
    _, out1, _ = _run(capsys, *argv)
    _, out2, _ = _run(capsys, *argv)
    assert out1 == out2


def test_different_seed_changes_sampled_slices(capsys):
    _, out1, _ = _run(capsys, "sweep", "4_1", "--format", "json", "--seed", "0")
    _, out2, _ = _run(capsys, "sweep", "4_1", "--format", "json", "--seed", "1")
    a, b = json.loads(out1), json.loads(out2)
    assert a["chi_cl"] == b["chi_cl"] == 2
    assert a["slices"] != b["slices"]


def test_bad_set_json_lists_the_six_traces(capsys):
    code, out, _ = _run(capsys, "bad-set", "4_1", "--format", "json")
    assert code == 0
    body = json.loads(out)
    reals = sorted({round(r[0], 6) for e in body["bad_set"] for r in e["roots"]})
    assert reals == [-2.236068, -2.0, -1.0, 1.0, 2.0, 2.236068]


def test_monodromy_example_permutation(capsys):
    code, out, _ = _run(
        capsys,
        "monodromy",
        "4_1",
        "--center",
        "1",
        "--radius",
        "0.1",
        "--format",
        "json",
    )
    assert code == 0
    body = json.loads(out)
    assert body["loops"][0]["permutation"] == [[0, 1], [1, 0]]


# ---------------------------------------------------------------------------
# Text and CSV output
# ---------------------------------------------------------------------------


def test_text_table_lists_knot_chi_and_bad_set_size(capsys):
    code, out, _ = _run(capsys, "invariant", "4_1")
    assert code == 0
    assert "4_1" in out
    assert "2" in out
    assert "exceptional" in out


def test_invariant_csv_has_slice_header(capsys):
    code, out, _ = _run(capsys, "invariant", "3_1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "tau_re_num,tau_re_den,tau_im_num,tau_im_den,chi_b,generic"
    assert len(lines) > 1


def test_bad_set_csv(capsys):
    code, out, _ = _run(capsys, "bad-set", "3_1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "provenance,re,im"
    assert any(line.startswith("abelian_resultant,") for line in lines[1:])


def test_charpoly_csv_terms(capsys):
    code, out, _ = _run(capsys, "charpoly", "3_1", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x_exp,y_exp,num,den"
    assert "0,1,1,1" in lines  # the y term of y - 1
    assert "0,0,-1,1" in lines  # the constant term


def test_alexander_csv(capsys):
    code, out, _ = _run(capsys, "alexander", "5_2", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "degree,coeff"
    assert lines[1:] == ["0,2", "1,-3", "2,2"]


def test_monodromy_csv_paths(capsys):
    code, out, _ = _run(
        capsys,
        "monodromy",
        "4_1",
        "--center",
        "3",
        "--radius",
        "0.1",
        "--steps",
        "64",
        "--format",
        "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "loop,root,theta,re,im"
    assert len(lines) == 1 + 2 * 65


def test_corpus_csv(capsys):
    code, out, _ = _run(
        capsys,
        "corpus",
        "--entries",
        "3_1,3_1 # 3_1",
        "--pairs",
        "2",
        "--samples",
        "20",
        "--format",
        "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "knot,chi_cl,type_ii_chi,additive"
    assert len(lines) == 3


# ---------------------------------------------------------------------------
# Output redirection
# ---------------------------------------------------------------------------


def test_out_flag_writes_the_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = _run(
        capsys, "invariant", "3_1", "--format", "json", "--out", str(target)
    )
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["chi_cl"] == 1


def test_out_file_matches_stdout_bytes(tmp_path, capsys):
    argv = ("bad-set", "4_1", "--format", "json")
    _, stdout_text, _ = _run(capsys, *argv)
    target = tmp_path / "b.json"
    code, _, _ = _run(capsys, *argv, "--out", str(target))
    assert code == 0
    assert target.read_text() == stdout_text
