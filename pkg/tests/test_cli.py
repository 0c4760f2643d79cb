"""Command-line interface: exit codes, output formats, schema validity,
and the demo/eval round trip."""

import json

import jsonschema
import pytest

from knowctx import save_scenario
from knowctx.cli import main
from knowctx.demos import DEMOS
from knowctx.schemas import (
    EVAL_REPORT_SCHEMA,
    FEASIBILITY_REPORT_SCHEMA,
    MC_REPORT_SCHEMA,
    SCAN_REPORT_SCHEMA,
    SCENARIO_SCHEMA,
)
from conftest import mz_network


@pytest.fixture
def mz_file(tmp_path, mz):
    path = tmp_path / "mz.json"
    save_scenario(path, mz)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


# ---------------------------------------------------------------------------
# demos and eval
# ---------------------------------------------------------------------------


def test_all_demos_run_clean(capsys):
    for name in DEMOS:
        code, out = run(capsys, "demo", name)
        assert code == 0
        assert f"# scenario: {name}" in out
        assert "alternative" in out


def test_demo_golden_mza(capsys):
    code, out = run(capsys, "demo", "mz-a")
    assert code == 0
    assert "[(c1|A1) (c2|A2)][(c1 c11 + c2 c21|A1') (c1 c12 + c2 c22|A2')]" in out
    assert "[A1][(c11|A1') (c12|A2')]" in out
    assert "[A1][A1']" in out


def test_demo_unknown_name_is_usage_error(capsys):
    code, out = run(capsys, "demo", "nope")
    assert code == 2


def test_demo_export_then_eval_is_identical(capsys, tmp_path):
    exported = tmp_path / "out.json"
    code, demo_out = run(capsys, "demo", "eraser", "--export", str(exported))
    assert code == 0
    doc = json.loads(exported.read_text())
    jsonschema.validate(doc, SCENARIO_SCHEMA)
    code, eval_out = run(capsys, "eval", "--scenario", str(exported))
    assert code == 0
    assert eval_out == demo_out


def test_eval_json_validates(capsys, mz_file):
    code, out = run(capsys, "eval", "--scenario", mz_file, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, EVAL_REPORT_SCHEMA)
    assert doc["distribution"]["values"][0] == pytest.approx(0.5, abs=1e-12)


def test_eval_csv_has_full_precision(capsys, mz_file):
    code, out = run(capsys, "eval", "--scenario", mz_file, "--format", "csv")
    assert code == 0
    lines = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert lines[0].startswith("alternative,")
    value = float(lines[1].split(",")[1])
    assert abs(value - 0.5) < 1e-12


def test_eval_missing_file_is_usage_error(capsys, tmp_path):
    code, _ = run(capsys, "eval", "--scenario", str(tmp_path / "absent.json"))
    assert code == 2


def test_eval_malformed_json_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, "eval", "--scenario", str(bad))
    assert code == 2


def test_eval_runtime_error_exit_code(capsys, tmp_path, mz):
    # layer index past the chain: a run error, not a parse error
    path = tmp_path / "mz.json"
    save_scenario(path, mz)
    code, _ = run(capsys, "eval", "--scenario", str(path), "--layer", "7")
    assert code == 3


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2


def test_seed_header_from_env(capsys, monkeypatch, mz_file):
    monkeypatch.setenv("KNOWCTX_SEED", "42")
    code, out = run(capsys, "eval", "--scenario", mz_file)
    assert code == 0
    assert "# seed: 42" in out
    code, out = run(capsys, "eval", "--scenario", mz_file, "--seed", "7")
    assert "# seed: 7" in out  # explicit flag beats the environment


def test_output_flag_writes_file(capsys, tmp_path, mz_file):
    target = tmp_path / "report.json"
    code, out = run(
        capsys, "eval", "--scenario", mz_file, "--format", "json", "--output", str(target)
    )
    assert code == 0
    assert out == ""
    jsonschema.validate(json.loads(target.read_text()), EVAL_REPORT_SCHEMA)


# ---------------------------------------------------------------------------
# feasibility and scan
# ---------------------------------------------------------------------------


def test_feasibility_feasible_exit_zero(capsys):
    code, out = run(capsys, "feasibility", "--shape", "2,2", "--gamma", "1", "--restarts", "8")
    assert code == 0
    assert "verdict: feasible" in out


def test_feasibility_negative_verdicts_exit_one(capsys):
    code, out = run(capsys, "feasibility", "--shape", "4,2", "--gamma", "1", "--restarts", "2")
    assert code == 1
    assert "analytically_inadmissible" in out
    code, out = run(capsys, "feasibility", "--shape", "2,2", "--gamma", "2", "--restarts", "8")
    assert code == 1
    assert "no_solution_found" in out


def test_feasibility_json_validates_and_carries_witness_check(capsys):
    code, out = run(
        capsys,
        "feasibility", "--shape", "2,2", "--gamma", "1", "--restarts", "8",
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, FEASIBILITY_REPORT_SCHEMA)
    assert doc["verdict"] == "feasible"
    assert doc["independence_check"] < 1e-8
    assert doc["dof"]["available"] == 4


def test_feasibility_inadmissible_has_null_check(capsys):
    code, out = run(
        capsys,
        "feasibility", "--shape", "4,2", "--gamma", "1", "--restarts", "2",
        "--format", "json",
    )
    assert code == 1
    doc = json.loads(out)
    jsonschema.validate(doc, FEASIBILITY_REPORT_SCHEMA)
    assert doc["independence_check"] is None
    assert doc["best_residual"] is None


def test_feasibility_bad_shape_is_usage_error(capsys):
    code, _ = run(capsys, "feasibility", "--shape", "2x2", "--gamma", "1")
    assert code == 2


def test_scan_table_and_json(capsys):
    code, out = run(
        capsys, "scan", "--m", "1:2", "--m-prime", "1:2", "--gammas", "1", "--restarts", "4"
    )
    assert code == 0
    assert "verdict" in out
    code, out = run(
        capsys,
        "scan", "--m", "1,2", "--m-prime", "2", "--gammas", "1",
        "--restarts", "4", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCAN_REPORT_SCHEMA)
    assert len(doc["rows"]) == 2


def test_scan_empty_gammas_is_usage_error(capsys):
    code, _ = run(capsys, "scan", "--m", "2", "--m-prime", "2", "--gammas", "")
    assert code == 2


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def test_mc_table_and_determinism(capsys, tmp_path):
    from knowctx import KnowabilityLevel

    path = tmp_path / "mza.json"
    save_scenario(path, mz_network(middle_level=KnowabilityLevel.L3))
    code, out1 = run(capsys, "mc", "--scenario", str(path), "--trials", "10000", "--seed", "3")
    assert code == 0
    assert "count" in out1
    code, out2 = run(capsys, "mc", "--scenario", str(path), "--trials", "10000", "--seed", "3")
    assert out2 == out1

    code, out = run(
        capsys, "mc", "--scenario", str(path), "--trials", "1000", "--seed", "3",
        "--format", "csv",
    )
    assert code == 0
    body = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert body[0] == "alternative,count,freq,exact,sigma"

    code, out = run(
        capsys, "mc", "--scenario", str(path), "--trials", "1000", "--seed", "3",
        "--format", "json",
    )
    doc = json.loads(out)
    jsonschema.validate(doc, MC_REPORT_SCHEMA)
    assert sum(row["count"] for row in doc["rows"]) == 1000


def test_mc_refuses_unrecordable_path(capsys, mz_file):
    # the scenario's middle layer is level 2: no classical record exists yet
    code, _ = run(capsys, "mc", "--scenario", mz_file, "--trials", "100")
    assert code == 3
