# tests/test_cli.py
import pytest
from typer.testing import CliRunner

from pacrank.main import app

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, list(args))


def test_max():
    result = invoke("max", "--model", "adjacent-gap:0.6", "--n", "8", "--eps", "0.1", "--seed", "3")
    assert result.exit_code == 0, result.output
    assert "winner" in result.output
    assert "comparisons" in result.output


def test_max_with_threads_matches_serial():
    serial = invoke("max", "--model", "adjacent-gap:0.6", "--n", "12", "--seed", "5")
    threaded = invoke("max", "--model", "adjacent-gap:0.6", "--n", "12", "--seed", "5", "--threads", "4")
    assert serial.exit_code == threaded.exit_code == 0
    assert serial.output == threaded.output


def test_rank_merge_writes_the_ranking(tmp_path):
    out = tmp_path / "ranking.txt"
    result = invoke("rank-merge", "--model", "adjacent-gap:1.0", "--n", "6", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert out.read_text().split() == ["6", "5", "4", "3", "2", "1"]


def test_rank_merge_with_threads_matches_serial():
    args = ("rank-merge", "--model", "adjacent-gap:0.6", "--n", "12", "--eps", "0.1", "--seed", "2")
    serial = invoke(*args)
    threaded = invoke(*args, "--threads", "4")
    assert serial.exit_code == threaded.exit_code == 0, serial.output
    assert serial.output == threaded.output


def test_rank_bsr_with_anchor_override():
    result = invoke("rank-bsr", "--model", "adjacent-gap:1.0", "--n", "30", "--eps", "0.2", "--anchors", "5")
    assert result.exit_code == 0, result.output
    assert "eps-ranking" in result.output


def test_verify_model():
    result = invoke("verify-model", "--model", "single-gap:0.01", "--n", "8")
    assert result.exit_code == 0, result.output
    assert "holds" in result.output


def test_verify_model_from_a_matrix_file(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("0.5,0.55,0.8\n0.45,0.5,0.55\n0.2,0.45,0.5\n")
    result = invoke("verify-model", "--model", f"matrix:{path}")
    assert result.exit_code == 0, result.output
    assert "violations" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("max", "--model", "adjacent-gap:0.6", "--n", "8", "--eps", "0.7"),
        ("max", "--model", "plackett:0.3", "--n", "8"),
        ("max", "--model", "adjacent-gap", "--n", "8"),
        ("max", "--model", "matrix:/nonexistent/p.csv", "--n", "3"),
        ("experiment", "-a", "quicksort", "--model", "adjacent-gap:0.6", "--n", "8"),
        ("sweep", "knockout-huge-n"),
    ],
)
def test_invalid_input_exits_with_2(args):
    assert invoke(*args).exit_code == 2


def test_experiment_csv(tmp_path):
    out = tmp_path / "runs.csv"
    result = invoke("experiment", "-a", "knockout", "--model", "adjacent-gap:0.6", "--n", "6", "--eps", "0.1", "--runs", "5", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert len(out.read_text().splitlines()) == 6


def test_experiment_csv_is_reproducible(tmp_path):
    args = ["experiment", "-a", "merge-rank", "--model", "adjacent-gap:0.6", "--n", "8", "--runs", "3", "--seed", "9"]
    assert invoke(*args, "--out", str(tmp_path / "a.csv")).exit_code == 0
    assert invoke(*args, "--out", str(tmp_path / "b.csv"), "--threads", "3").exit_code == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_unwritable_csv_exits_with_1(tmp_path):
    result = invoke("experiment", "-a", "knockout", "--model", "adjacent-gap:0.6", "--n", "4", "--runs", "2", "--out", str(tmp_path))
    assert result.exit_code == 1


def test_experiment_db_and_history():
    stored = invoke("experiment", "-a", "knockout", "--model", "adjacent-gap:0.6", "--n", "6", "--eps", "0.1", "--runs", "2", "--db")
    assert stored.exit_code == 0, stored.output
    experiment_id = stored.output.split("stored as experiment")[1].split()[0]

    listed = invoke("history")
    assert listed.exit_code == 0, listed.output
    assert "experiments" in listed.output

    runs = invoke("history", "--experiment", experiment_id)
    assert runs.exit_code == 0, runs.output


def test_sweep_writes_a_summary(tmp_path):
    out = tmp_path / "sweep.csv"
    result = invoke("sweep", "knockout-small-n", "--runs", "2", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert len(out.read_text().splitlines()) == 4
