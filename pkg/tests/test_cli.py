import json

import pytest

import permlab.classes as classes
from permlab.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_VIOLATED, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cache_file(tmp_path, monkeypatch):
    path = tmp_path / "counts.jsonl"
    monkeypatch.setenv("PERMLAB_CACHE", str(path))
    return path


def test_count_examples(capsys, cache_file):
    assert run(capsys, "count", "--basis", "132", "--max-n", "5")[1].strip() == "Av(132): 1, 2, 5, 14, 42"
    assert run(capsys, "count", "--basis", "1", "--max-n", "3")[1].strip() == "Av(1): 0, 0, 0"
    code, out, _ = run(capsys, "count", "--basis", "53241;43251", "--max-n", "6", "--check-brute", "6",
                       "--format", "structured")
    doc = json.loads(out)
    assert code == 0
    assert doc["result"]["terms"] == ["1", "2", "6", "24", "118", "672"]
    assert doc["result"]["brute_force_agrees"] is True


def test_cache_is_idempotent(capsys, cache_file, monkeypatch):
    calls = []
    real = classes._tree_count

    def counting(*a, **k):
        calls.append(a)
        return real(*a, **k)

    monkeypatch.setattr(classes, "_tree_count", counting)
    first = run(capsys, "count", "--basis", "1342", "--max-n", "8", "--format", "structured")
    lines = cache_file.read_text()
    second = run(capsys, "count", "--basis", "1342", "--max-n", "8", "--format", "structured")
    assert len(calls) == 1
    assert first == second
    assert cache_file.read_text() == lines


def test_no_cache_leaves_no_file(capsys, cache_file):
    run(capsys, "count", "--basis", "123", "--max-n", "4", "--no-cache")
    assert not cache_file.exists()


def test_exit_codes(capsys, cache_file):
    code, _, err = run(capsys, "count", "--basis", "12;1x3", "--max-n", "4")
    assert code == EXIT_INVALID and "element 2" in err and "character 2" in err
    code, _, err = run(capsys, "conjecture", "stankova-west", "--max-n", "12")
    assert code == EXIT_BUDGET and "opt-in" in err
    code, _, _ = run(capsys, "count", "--basis", "123", "--max-n", "30")
    assert code == EXIT_BUDGET
    assert len({0, EXIT_INVALID, EXIT_BUDGET, EXIT_VIOLATED}) == 4


def test_violated_conjecture_exit(capsys, cache_file):
    code, out, _ = run(capsys, "conjecture", "bona", "--k", "4", "--max-n", "7", "--format", "structured")
    doc = json.loads(out)
    assert (code == EXIT_VIOLATED) == (doc["result"]["verdict"] == "violated-with-witness")
    assert doc["exit_status"] == code


def test_conv_and_poset(capsys, cache_file):
    code, out, _ = run(capsys, "conv", "416352", "--poset")
    lines = out.split()
    assert code == 0 and lines[0] == "215436"
    assert "cover" in out and "rank" in out


def test_inflate(capsys, cache_file):
    code, out, _ = run(capsys, "inflate", "3142", "12", "315264", "231", "321")
    assert out.strip() == "10,11,3,1,5,2,6,4,13,14,12,9,8,7"


def test_shortest_unsortable(capsys, cache_file):
    code, out, _ = run(capsys, "stack", "shortest-unsortable", "--stacks", "2", "--max-len", "7",
                       "--format", "structured")
    res = json.loads(out)["result"]
    assert code == 0 and res["length"] == 7 and res["count"] == 22
    assert res["unsortable"] == sorted(res["unsortable"], key=lambda s: [int(x) for x in s.split(",")])


def test_fit_factorial(capsys, cache_file, tmp_path):
    f = tmp_path / "factorial.txt"
    f.write_text("\n".join(str(x) for x in [1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800]))
    code, out, _ = run(capsys, "fit", "--file", str(f), "--order", "1", "--degree", "1")
    assert code == 0 and "s_(n+1) - (n + 1)*s_n = 0" in out


def test_wilf_and_growth(capsys, cache_file):
    code, out, _ = run(capsys, "wilf", "--all", "3", "--max-n", "8")
    assert out.startswith("1 class ")
    code, out, _ = run(capsys, "growth", "--basis", "123", "--max-n", "10", "--format", "structured")
    assert float(json.loads(out)["result"]["lower_bound"]) < 4


def test_compositions(capsys, cache_file):
    code, out, _ = run(capsys, "compositions", "--max-n", "8", "--format", "structured")
    rows = json.loads(out)["result"]["rows"]
    assert [r["brute_force"] for r in rows[:6]] == ["1", "2", "4", "8", "16", "31"]


def test_structured_output_independent_of_workers(capsys, cache_file):
    outs = []
    for w in ("1", "3"):
        outs.append(run(capsys, "count", "--basis", "13254", "--max-n", "9", "--no-cache",
                        "--workers", w, "--format", "structured")[1])
    assert outs[0] == outs[1]
    assert "workers" not in outs[0]


def test_timing_adds_runtime(capsys, cache_file):
    _, out, _ = run(capsys, "count", "--basis", "12", "--max-n", "3", "--timing", "--format", "structured")
    assert "runtime" in json.loads(out)
