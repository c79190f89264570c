import json
import subprocess
import sys

import pytest

from hypermatch.bounds import chebyshev_ratio, expected_matchings_bounds
from hypermatch.cli import main
from hypermatch.experiments import read_summary_csv, read_trials_csv
from hypermatch.hypergraph import (
    RNG_FAMILY,
    complete_hypergraph,
    parse_instance,
    sample_hypergraph,
    serialize_instance,
)
from hypermatch.solver import export_ilp, max_matching_exact


@pytest.fixture
def complete3(tmp_path):
    path = tmp_path / "k3.txt"
    path.write_text(serialize_instance(complete_hypergraph(3)))
    return str(path)


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_complete(capsys, complete3):
    assert run(capsys, "solve", "-i", complete3) == (0, "3\n", "")


def test_solve_witness_json(capsys, complete3):
    code, out, _ = run(capsys, "solve", "-i", complete3, "--witness")
    assert code == 0
    assert json.loads(out) == {"matching_number": 3, "witness": [[1], [2], [3]]}


def test_sample_then_solve(capsys, tmp_path):
    f = str(tmp_path / "f")
    assert run(capsys, "sample", "-n", "2", "-m", "3", "--seed", "1", "-o", f)[0] == 0
    assert run(capsys, "solve", "-i", f) == (0, "2\n", "")


def test_sample_matches_library(capsys):
    code, out, _ = run(capsys, "sample", "-n", "9", "-m", "40", "--seed", "77")
    assert code == 0
    assert out == serialize_instance(sample_hypergraph(9, 40, 77))
    assert parse_instance(out) == sample_hypergraph(9, 40, 77)


def test_analyze_expected_upper(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "3", "-m", "7", "-k", "2", "--quantity", "expected-upper")
    assert code == 0
    data = json.loads(out)
    assert data["value"] == pytest.approx(6)
    assert data["exact"] == "6"
    assert data["quantity"] == "expected-upper"
    assert {"n", "M", "k_or_f", "log10_value", "clamped", "regime"} <= set(data)


def test_analyze_large_n_is_log_only(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "40", "-m", str(2**40 - 1), "-f", "4", "--quantity", "chebyshev")
    data = json.loads(out)
    assert code == 0 and data["exact"] is None
    assert data["log10_value"] == pytest.approx(chebyshev_ratio(40, 2**40 - 1, 4).log10)
    assert data["regime"]["regime"] == "Dense"


def test_analyze_markov_clamped(capsys):
    _, out, _ = run(capsys, "analyze", "-n", "3", "-m", "7", "--quantity", "markov")
    data = json.loads(out)
    assert data["exact"] == "6" and data["clamped"] == 1.0


def test_analyze_conditional_and_regime(capsys):
    _, out, _ = run(capsys, "analyze", "-n", "4", "-k", "2", "--ell", "1",
                    "--overlap-support", "2", "--quantity", "conditional")
    assert json.loads(out)["exact"] == "3/13"
    _, out, _ = run(capsys, "analyze", "-n", "13", "-m", "1000", "--quantity", "regime")
    assert json.loads(out)["regime"]["regime"] == "Gap"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["solve"],
        ["analyze", "-n", "3", "-m", "7", "-k", "2", "-f", "2", "--quantity", "variance"],
        ["analyze", "-n", "3", "-m", "7", "--quantity", "variance"],
        ["solve", "-i", "x", "--unknown-flag"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == ""
    assert "usage:" in err


def test_runtime_errors(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1\n1\n")
    code, out, err = run(capsys, "solve", "-i", str(bad))
    assert code == 2 and out == "" and "duplicate" in err
    code, _, _ = run(capsys, "solve", "-i", str(tmp_path / "missing.txt"))
    assert code == 2
    code, _, _ = run(capsys, "sample", "-n", "3", "-m", "9", "--seed", "0")
    assert code == 2


def test_budget_exit_code(capsys, tmp_path):
    path = tmp_path / "h.txt"
    path.write_text(serialize_instance(sample_hypergraph(12, 80, 2)))
    code, out, err = run(capsys, "solve", "-i", str(path), "--node-budget", "1", "--no-preprocess")
    assert code == 2 and "budget" in err


def test_export_ilp(capsys, complete3, tmp_path):
    lp = tmp_path / "k3.lp"
    assert run(capsys, "export-ilp", "-i", complete3, "-o", str(lp))[0] == 0
    assert lp.read_text() == export_ilp(complete_hypergraph(3))
    code, out, _ = run(capsys, "export-ilp", "-i", complete3)
    assert out == export_ilp(complete_hypergraph(3))


def test_sweep_and_plot(capsys, tmp_path):
    t, s, fig = tmp_path / "t.csv", tmp_path / "s.csv", tmp_path / "fig.svg"
    code, out, _ = run(capsys, "sweep", "--mode", "unity", "--n-min", "5", "--n-max", "9",
                       "--trials", "4", "--seed", "3", "--trials-out", str(t),
                       "--summary-out", str(s), "--figure-out", str(fig))
    assert code == 0 and out == ""
    records = read_trials_csv(t.read_text())
    rows = read_summary_csv(s.read_text())
    assert len(records) == 20 and len(rows) == 5
    assert fig.read_text().lstrip().startswith("<?xml")
    svg = tmp_path / "again.svg"
    assert run(capsys, "plot", "-i", str(s), "-o", str(svg))[0] == 0
    assert svg.read_text() == fig.read_text()


def test_sweep_jobs_identical(capsys, tmp_path):
    outputs = []
    for jobs in ("1", "3"):
        t, s = tmp_path / f"t{jobs}.csv", tmp_path / f"s{jobs}.csv"
        code, _, _ = run(capsys, "sweep", "--mode", "gap", "-n", "7", "--step", "30", "--trials", "5",
                         "--seed", "11", "--jobs", jobs, "--trials-out", str(t), "--summary-out", str(s))
        assert code == 0
        outputs.append((t.read_bytes(), s.read_bytes()))
    assert outputs[0] == outputs[1]


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and RNG_FAMILY in out


def test_console_entry_point(complete3):
    proc = subprocess.run([sys.executable, "-m", "hypermatch", "solve", "-i", complete3],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "3\n"


def test_solve_reads_stdin():
    text = serialize_instance(sample_hypergraph(8, 20, 7))
    proc = subprocess.run([sys.executable, "-m", "hypermatch", "solve", "-i", "-"],
                          input=text, capture_output=True, text=True)
    expected = max_matching_exact(parse_instance(text))[0].size
    assert proc.returncode == 0 and proc.stdout == f"{expected}\n"
