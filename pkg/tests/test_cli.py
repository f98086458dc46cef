"""End-to-end command-line tests via subprocess."""

import json
import os
import subprocess
import sys

import pytest


def run_cli(*args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "bps_evalkit", *map(str, args)],
        capture_output=True, text=True, env=env, cwd=cwd,
    )


@pytest.fixture(scope="module")
def work(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def ref_csv(work):
    path = work / "ref.csv"
    proc = run_cli("gen-ref", "--seed", 3, "--cases", 40, "--out", path)
    assert proc.returncode == 0, proc.stderr
    return path


def test_gen_ref_writes_a_deterministic_csv(work, ref_csv):
    again = work / "ref_again.csv"
    proc = run_cli("gen-ref", "--seed", 3, "--cases", 40, "--out", again)
    assert proc.returncode == 0, proc.stderr
    assert again.read_bytes() == ref_csv.read_bytes()
    header = ref_csv.read_text().splitlines()[0]
    assert header == "case_id,activity,resource,start_time,end_time"
    other = work / "ref_other.csv"
    assert run_cli("gen-ref", "--seed", 4, "--cases", 40,
                   "--out", other).returncode == 0
    assert other.read_bytes() != ref_csv.read_bytes()


def test_split_partitions_the_cases(work, ref_csv):
    train, test = work / "train.csv", work / "test.csv"
    proc = run_cli("split", "--log", ref_csv, "--ratio", 0.8,
                   "--out-train", train, "--out-test", test)
    assert proc.returncode == 0, proc.stderr

    def case_ids(path):
        rows = path.read_text().splitlines()[1:]
        return {line.split(",")[0] for line in rows}

    train_ids, test_ids = case_ids(train), case_ids(test)
    assert len(train_ids) == 32 and len(test_ids) == 8
    assert not train_ids & test_ids
    assert train_ids | test_ids == case_ids(ref_csv)


def test_discover_perturb_simulate_round_trip(work, ref_csv):
    model, perturbed = work / "model.json", work / "model_dur.json"
    sim = work / "sim.csv"
    assert run_cli("discover", "--log", ref_csv,
                   "--out-model", model).returncode == 0
    doc = json.loads(model.read_text())
    assert {"activities", "arrival", "calendars"} <= set(doc)

    proc = run_cli("perturb", "--model", model, "--scenario", "DUR:2.0",
                   "--out-model", perturbed)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(perturbed.read_text()) != doc

    proc = run_cli("simulate", "--model", perturbed, "--cases", 10,
                   "--start", "2024-03-04T09:00:00Z", "--seed", 1,
                   "--out", sim)
    assert proc.returncode == 0, proc.stderr
    rows = sim.read_text().splitlines()
    assert rows[0] == "case_id,activity,resource,start_time,end_time"
    assert len({line.split(",")[0] for line in rows[1:]}) == 10


def test_eval_standard_writes_a_report(work, ref_csv):
    out = work / "std_out"
    proc = run_cli(
        "eval-standard", "--log", ref_csv, "--replications", 2,
        "--reference", "train", "--mode", "hourly_counts",
        "--base-seed", 5, "--jobs", 1, "--out", out,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads((out / "standard_report.json").read_text())
    assert list(doc) == ["config", "mean", "replications", "warnings"]
    assert doc["mean"]["mode"] == "HOURLY_COUNTS"
    assert doc["mean"]["reference_kind"] == "TRAIN"
    assert len(doc["replications"]) == 2


def test_eval_utility_writes_json_and_markdown(work, ref_csv):
    out = work / "util_out"
    proc = run_cli(
        "eval-utility", "--log", ref_csv, "--replications", 2,
        "--seeds", 2, "--base-seed", 5, "--jobs", 1, "--out", out,
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads((out / "utility_report.json").read_text())
    assert doc["scenario"] == "GT"
    assert set(doc["tasks"]) == {"NAP", "NRP", "NPP", "NWP", "RTP"}
    md = (out / "utility_report.md").read_text()
    assert md.startswith("# Utility evaluation: scenario GT")
    assert "| NWP | hour |" in md


def test_out_dir_env_variable_is_the_fallback(work, ref_csv):
    env_out = work / "env_out"
    env_out.mkdir()
    proc = run_cli(
        "eval-standard", "--log", ref_csv, "--replications", 1,
        "--jobs", 1, env_extra={"BPS_EVALKIT_OUT": str(env_out)},
    )
    assert proc.returncode == 0, proc.stderr
    assert (env_out / "standard_report.json").exists()


def test_usage_errors_exit_one(work):
    proc = run_cli("gen-ref", "--seed", 3)  # --cases and --out missing
    assert proc.returncode == 1
    assert "code=usage" in proc.stderr
    proc = run_cli("gen-ref", "--seed", 3, "--cases", 0,
                   "--out", work / "x.csv")
    assert proc.returncode == 1
    assert "code=usage" in proc.stderr


def test_missing_input_file_exits_two(work):
    proc = run_cli("split", "--log", work / "absent.csv", "--ratio", 0.8,
                   "--out-train", work / "a.csv",
                   "--out-test", work / "b.csv")
    assert proc.returncode == 2
    assert "code=io_error" in proc.stderr


def test_invalid_scenario_exits_one(work, ref_csv):
    model = work / "model_for_bad.json"
    assert run_cli("discover", "--log", ref_csv,
                   "--out-model", model).returncode == 0
    proc = run_cli("perturb", "--model", model, "--scenario", "WAT:1",
                   "--out-model", work / "bad.json")
    assert proc.returncode == 1
    assert "code=invalid_value" in proc.stderr


def test_domain_errors_carry_structured_codes(work):
    empty = work / "empty.csv"
    empty.write_text("case_id,activity,resource,start_time,end_time\n")
    proc = run_cli("split", "--log", empty, "--ratio", 0.8,
                   "--out-train", work / "a.csv",
                   "--out-test", work / "b.csv")
    assert proc.returncode == 1
    assert "code=empty_log" in proc.stderr


def test_failed_runs_leave_no_partial_outputs(work, ref_csv):
    target = work / "no_partial"
    proc = run_cli(
        "eval-standard", "--log", ref_csv, "--replications", 1,
        "--scenario", "DUR:-1", "--jobs", 1, "--out", target,
    )
    assert proc.returncode == 1
    assert not (target / "standard_report.json").exists()
