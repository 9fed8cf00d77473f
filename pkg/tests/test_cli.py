import json
import math
import subprocess
import sys

import pytest

from expcong.cli import EXIT_CAPACITY, EXIT_USAGE, RunConfig, main, parse_terms


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_examples(capsys):
    code, out, _ = run(capsys, "solve", "--field", "7", "--terms", "1:3,1:3,1:3", "--b", "3")
    assert code == 0 and "solution: (0,0,0)" in out
    code, out, _ = run(capsys, "solve", "--field", "7", "--terms", "1:3,1:3,1:3", "--b", "3", "--quantum", "--seed", "1")
    assert code == 0 and "solution: (" in out
    code, out, _ = run(capsys, "solve", "--field", "7", "--terms", "1:1,1:1,1:1", "--b", "4")
    assert code == 1 and "NoSolution" in out


def test_solve_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "solve", "--field", "101", "--terms", "61:95,2:47,84:76", "--b", "61")
    assert code == 2 and "Inconclusive" in out
    code, _, _ = run(capsys, "solve", "--field", "101", "--terms", "61:95,2:47,84:76", "--b", "61", "--full-scan")
    assert code == 0


def test_census_example(capsys, tmp_path):
    out_file = tmp_path / "c.csv"
    code, out, _ = run(capsys, "census", "--field", "7", "--terms", "1:3,1:3,1:3", "--r", "6", "--out", str(out_file))
    assert code == 0
    assert out.strip() == f"E(r)=6/7 bound=294 exceptional=0/{7 / math.log(7):.12g}"
    rows = out_file.read_text().splitlines()
    assert rows[0] == "b,N,main_num,main_den,delta_num,delta_den,threshold,exceptional"
    assert len(rows) == 1 + 7
    assert rows[1].startswith("0,30,216,7,-6,7,")


def test_census_csv_to_stdout(capsys):
    code, out, err = run(capsys, "census", "--field", "3^2/1,0,1", "--terms", "1:3,2:4,1:5")
    assert code == 0 and len(out.splitlines()) == 10 and err.startswith("E(r)=")


def test_capacity_exit(capsys):
    code, _, err = run(capsys, "census", "--field", "1009", "--terms", "1:11,1:11,1:11", "--count-limit", "1000")
    assert code == EXIT_CAPACITY and "exceeds" in err


@pytest.mark.parametrize(
    "argv,token",
    [
        (["solve", "--field", "8x"], "8x"),
        (["solve", "--field", "6"], "6"),
        (["solve", "--field", "3^2/1,0,2"], "1,0,2"),
        (["solve", "--terms", "1:3,13"], "13"),
        (["solve", "--terms", "1:3,1:9"], "9"),
        (["solve", "--b", "7"], "7"),
        (["solve", "--delta", "big"], "big"),
        (["scan", "--range", "10-20"], "10-20"),
        (["weil", "--term", "5"], "5"),
    ],
)
def test_usage_errors_name_token(capsys, argv, token):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and token in err


def test_argparse_errors_use_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--b", "x"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--b", "3"],
        ["solve", "--b", "3", "--quantum"],
        ["census"],
        ["count", "--all-b"],
        ["weil"],
        ["grover", "--t", "64", "--m", "2", "--trials", "20"],
        ["costs"],
        ["scan", "--primes", "101,211,307"],
    ],
)
def test_every_command_emits_json(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code in (0, 1, 2)
    doc = json.loads(out)
    assert isinstance(doc, dict) and doc


def test_json_matches_text(capsys):
    _, out, _ = run(capsys, "costs", "--json")
    doc = json.loads(out)
    assert doc["classical_cost"] == 18 and doc["t2_queries"] == 3 and doc["t3_applicable"] is True
    _, out, _ = run(capsys, "count", "--all-b", "--json")
    assert json.loads(out)["counts"] == {str(b): (30 if b == 0 else 31) for b in range(7)}


def test_count_methods_agree(capsys):
    outs = []
    for method in ("convolution", "brute", "charsum"):
        code, out, _ = run(capsys, "count", "--field", "5^2", "--terms", "1:2,3:7,1:12", "--all-b", "--method", method)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_weil_and_grover(capsys):
    code, out, err = run(capsys, "weil", "--terms", "1:2,1:3,1:3")
    assert code == 0 and "violations=0" in err
    assert "1,1.41421356237,2.64575131106" in out
    code, out, err = run(capsys, "grover", "--t", "1024", "--m", "1", "--trials", "200", "--seed", "4")
    assert code == 0 and len(out.splitlines()) == 201
    mean = float(err.split("mean_queries=")[1])
    assert mean <= 8 * 32


def test_scan_warning(capsys):
    code, out, err = run(capsys, "scan", "--primes", "101,211")
    assert code == 0 and "warning" in err and out.splitlines()[-1].startswith("# classical_exp=")


def test_config_round_trip(tmp_path, capsys):
    cfg = RunConfig(field="3^2/1,0,1", terms=[(1, 3), (2, 4), (1, 5)], b=4, delta="0.75", seed=9, out=None)
    assert RunConfig.from_json(cfg.to_json()) == cfg
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    a = run(capsys, "census", "--config", str(path))
    b = run(capsys, "census", "--field", "3^2/1,0,1", "--terms", "1:3,2:4,1:5", "--b", "4", "--delta", "0.75")
    assert a == b
    assert parse_terms("1:3, 2:4") == [(1, 3), (2, 4)]


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"field": "7", "colour": "red"}))
    code, _, err = run(capsys, "census", "--config", str(path))
    assert code == EXIT_USAGE and "colour" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["census", "--field", "5^2", "--terms", "1:2,3:7,1:12"],
        ["count", "--all-b", "--method", "charsum"],
        ["weil", "--field", "101", "--terms", "1:2"],
        ["grover", "--t", "256", "--m", "3", "--trials", "50", "--seed", "12"],
        ["scan", "--range", "1000:5000", "--count", "5"],
    ],
)
def test_output_is_deterministic(tmp_path, capsys, argv):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, *argv, "--out", str(a))
    run(capsys, *argv, "--out", str(b))
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "expcong", "solve", "--b", "3"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and "(0,0,0)" in res.stdout
