"""Command line interface: reports, formats, exit codes and output files."""

import json

import pytest

from grasstop.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_passes_on_quaternionic_case(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--field", "H", "--n", "2", "--N", "4",
        "--samples", "2", "--seed", "1",
    )
    assert code == 0
    assert "all checks passed" in out
    assert "FAIL" not in out


def test_verify_json_includes_veronese_check_on_r13(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify", "--field", "R", "--n", "1", "--N", "3",
        "--samples", "2", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    names = {chk["name"] for chk in payload["checks"]}
    assert "veronese_coordinates" in names
    assert payload["all_pass"] is True


def test_verify_rejects_inverted_ranks(capsys):
    code, _, err = run_cli(capsys, "verify", "--field", "C", "--n", "3", "--N", "2")
    assert code == 2
    assert "usage error" in err


def test_missing_required_flag_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--n", "1", "--N", "3")
    assert code == 2
    assert "--field is required" in err


def test_unknown_subcommand_exits_2(capsys):
    assert run_cli(capsys, "frobnicate")[0] == 2


def test_poincare_json_coefficients(capsys):
    code, out, _ = run_cli(
        capsys, "poincare", "--field", "C", "--n", "2", "--N", "5", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["coeffs"] == [1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1]
    assert payload["euler"] == 10
    assert payload["betti"][2] == {"degree": 2, "b": 1}


def test_poincare_json_is_byte_identical_between_runs(capsys):
    args = ("poincare", "--field", "H", "--n", "2", "--N", "6", "--json")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_poincare_morse_bott_reports_consistency(capsys):
    code, out, _ = run_cli(
        capsys,
        "poincare", "--field", "C", "--n", "2", "--N", "5",
        "--method", "morse-bott", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["sources_consistent"] is True
    assert payload["coeffs"] == [1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1]


def test_poincare_check_all_small_bound(capsys):
    code, out, _ = run_cli(
        capsys, "poincare", "--check-all", "--N", "6", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["all_match"] is True
    assert payload["failures"] == []
    assert payload["fields"] == ["C", "H"]


def test_poincare_rejects_real_field(capsys):
    code, _, err = run_cli(
        capsys, "poincare", "--field", "R", "--n", "1", "--N", "3"
    )
    assert code == 2
    assert "usage error" in err


def test_flow_descent_classifies_f_sub(capsys):
    code, out, _ = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3",
        "--param", "E11", "--seed", "3", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    run = payload["runs"][0]
    assert run["class"] == "F_SUB"
    assert run["index"] == 0
    assert payload["all_converged"] is True


def test_flow_non_convergence_exits_1(capsys):
    code, out, _ = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3",
        "--param", "E11", "--max-iter", "2", "--json",
    )
    assert code == 1
    assert json.loads(out)["all_converged"] is False


def test_flow_csv_batch(capsys):
    code, out, _ = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3",
        "--param", "E11", "--runs", "2", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("run,seed,f_start,f_final,grad_norm,iters,converged")
    assert len(lines) == 3
    assert lines[1].split(",")[6] == "true"


def test_csv_format_is_flow_only(capsys):
    code, _, err = run_cli(
        capsys, "poincare", "--field", "C", "--n", "1", "--N", "3",
        "--format", "csv",
    )
    assert code == 2
    assert "usage error" in err


def test_flow_rejects_bad_param_and_step(capsys):
    code, _, err = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3", "--param", "E99",
    )
    assert code == 2 and "E99" in err
    code, _, err = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3", "--step", "0",
    )
    assert code == 2


def test_index_matches_theorem(capsys):
    code, out, _ = run_cli(
        capsys,
        "index", "--field", "H", "--n", "2", "--N", "4",
        "--param", "E12", "--class", "G_ZERO_SUB", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["measured"] == {"index": 8, "nullity": 0}
    assert payload["predicted"] == {"index": 8, "nullity": 0}
    assert payload["match"] is True
    assert payload["classified_as"] == "G_ZERO_SUB"


def test_index_rejects_mismatched_param_class_pair(capsys):
    code, _, err = run_cli(
        capsys,
        "index", "--field", "C", "--n", "2", "--N", "4",
        "--param", "E11", "--class", "G_PLUS",
    )
    assert code == 2
    assert "usage error" in err


def test_outdir_writes_json_csv_and_figure(tmp_path, capsys):
    outdir = tmp_path / "reports"
    code, _, _ = run_cli(
        capsys,
        "flow", "--field", "C", "--n", "1", "--N", "3",
        "--param", "E11", "--runs", "2", "--outdir", str(outdir),
    )
    assert code == 0
    assert (outdir / "flow.json").exists()
    assert (outdir / "flow.csv").exists()
    assert (outdir / "flow.png").stat().st_size > 0
    payload = json.loads((outdir / "flow.json").read_text())
    assert payload["command"] == "flow"
    csv_text = (outdir / "flow.csv").read_text()
    assert csv_text.splitlines()[0].startswith("run,seed")


def test_outdir_from_environment(tmp_path, capsys, monkeypatch):
    outdir = tmp_path / "envout"
    monkeypatch.setenv("GRASSTOP_OUTDIR", str(outdir))
    code, _, _ = run_cli(
        capsys, "poincare", "--field", "C", "--n", "2", "--N", "4"
    )
    assert code == 0
    assert (outdir / "poincare.json").exists()
    assert (outdir / "poincare.png").stat().st_size > 0


def test_verify_outdir_figure(tmp_path, capsys):
    outdir = tmp_path / "vr"
    code, _, _ = run_cli(
        capsys,
        "verify", "--field", "R", "--n", "1", "--N", "2",
        "--samples", "2", "--outdir", str(outdir),
    )
    assert code == 0
    assert (outdir / "verify.json").exists()
    assert (outdir / "verify.png").stat().st_size > 0


def test_index_outdir_figure(tmp_path, capsys):
    outdir = tmp_path / "ix"
    code, _, _ = run_cli(
        capsys,
        "index", "--field", "C", "--n", "1", "--N", "3",
        "--param", "E11", "--class", "F_SUB", "--outdir", str(outdir),
    )
    assert code == 0
    assert (outdir / "index.json").exists()
    assert (outdir / "index.png").stat().st_size > 0


def test_config_file_supplies_defaults(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"field": "C", "n": 2, "N": 5, "seed": 9}))
    code, out, _ = run_cli(
        capsys, "poincare", "--config", str(config), "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert (payload["field"], payload["n"], payload["N"]) == ("C", 2, 5)


def test_flags_override_config_file(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"field": "C", "n": 2, "N": 5}))
    code, out, _ = run_cli(
        capsys, "poincare", "--config", str(config), "--N", "6", "--json"
    )
    assert code == 0
    assert json.loads(out)["N"] == 6


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"fild": "C"}))
    code = main(["poincare", "--config", str(config)])
    capsys.readouterr()
    assert code == 2


def test_config_file_rejects_malformed_json(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text("{not json")
    code = main(["poincare", "--config", str(config)])
    capsys.readouterr()
    assert code == 2


def test_max_n_cap_guards_large_inputs(capsys):
    code, _, err = run_cli(
        capsys, "poincare", "--field", "C", "--n", "1", "--N", "40"
    )
    assert code == 2
    assert "exceeds" in err
    code, out, _ = run_cli(
        capsys,
        "poincare", "--field", "C", "--n", "1", "--N", "40",
        "--max-N", "40", "--json",
    )
    assert code == 0
    assert json.loads(out)["euler"] == 40
