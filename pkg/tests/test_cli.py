import json
import subprocess
import sys

import pytest

from oberwolfach.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run


def test_partitions_count(capsys):
    assert run(["partitions", "--order", "41", "--min-cycles", "3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "2056"


def test_partitions_json_list(capsys):
    assert run(["partitions", "--order", "9", "--list", "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["count"] == 4 and "4,5" in d["types"]


def test_solve_known_unsolvable(capsys, tmp_path):
    assert run(["solve", "--type", "3^2,5", "--out", str(tmp_path)]) == EXIT_FAIL
    assert "known unsolvable" in capsys.readouterr().out


def test_solve_writes_verified_file(capsys, tmp_path):
    assert run(["solve", "--type", "[5,6]", "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verified" in out
    path = tmp_path / "11" / "5,6.obw"
    assert path.exists()
    assert run(["verify", str(path)]) == EXIT_OK
    assert "ok (5,6, order 11" in capsys.readouterr().out


def _swap_in_first_factor(text):
    lines = text.splitlines()
    i = next(k for k, ln in enumerate(lines) if ln.startswith("factor:"))
    head, cyc = lines[i].rsplit("(", 1)
    labels = cyc.rstrip(")").split(",")
    labels[0], labels[1] = labels[1], labels[0]
    lines[i] = f"{head}({','.join(labels)})"
    return "\n".join(lines) + "\n"


def test_tampered_file_is_rejected(capsys, tmp_path):
    assert run(["solve", "--type", "3,6", "--out", str(tmp_path)]) == EXIT_OK
    path = tmp_path / "9" / "3,6.obw"
    path.write_text(_swap_in_first_factor(path.read_text()))
    capsys.readouterr()
    assert run(["verify", str(path)]) == EXIT_FAIL
    assert "violation" in capsys.readouterr().out


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.obw"
    bad.write_text("obw 1\norder nine\n")
    assert run(["verify", str(bad)]) == EXIT_FAIL
    assert "malformed" in capsys.readouterr().out
    assert run(["verify", str(tmp_path / "missing.obw")]) == EXIT_FAIL


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["solve", "--type", "3,two"],
    ["partitions", "--order", "x"],
    ["solve-order", "--order", "5"],
    ["bench", "--from", "12", "--to", "10"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE


def test_prove_335(capsys, tmp_path):
    lp = tmp_path / "op335.lp"
    assert run(["prove-335", "--json", "--emit-model", str(lp)]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["status"] == "infeasible"
    assert lp.read_text().startswith("\\ seating model")


def test_prove_335_budget(capsys):
    assert run(["prove-335", "--no-fix", "--budget-ms", "1"]) == EXIT_FAIL


def test_solve_order_json(capsys, tmp_path):
    assert run(["solve-order", "--order", "11", "--out", str(tmp_path), "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["total"] == 6 and d["known_unsolvable"] == 1 and d["failed"] == 0


def test_solve_json(capsys, tmp_path):
    assert run(["solve", "--type", "3,6", "--out", str(tmp_path), "--json"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["verified"] and d["method"] == "1rot" and d["order"] == 9


def test_bench_sample(capsys):
    assert run(["bench", "--from", "12", "--to", "13", "--min-cycles", "1", "--sample", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split()[:2] == ["order", "types"]
    assert [ln.split()[:2] for ln in lines[1:]] == [["12", "3"], ["13", "3"]]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "oberwolfach.cli", "partitions", "--order", "9"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "4"
