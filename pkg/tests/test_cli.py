import csv
import io
import json
from pathlib import Path

import pytest

from multistate_kn.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"

# p(l) for l = 128..140 as printed (5 decimals)
TANK_PRINTED = (0.32768, 0.78926, 0.92148, 0.95644, 0.97187, 0.97805, 0.98136,
                0.98321, 0.98413, 0.98453, 0.98466, 0.98469, 0.98469)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_reliability_json(capsys):
    code, out, _ = run(capsys, "reliability", DATA / "example44.json", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [(r["level"], r["R"], r["r"]) for r in doc["rows"]] == [
        (0, 1.0, 0.11), (1, 0.89, 0.064), (2, 0.826, 0.43), (3, 0.396, 0.396)
    ]


def test_json_output_is_deterministic(capsys):
    outs = {run(capsys, "bounds", DATA / "s8-421.json", "--level", "3", "--format", "json")[1] for _ in range(2)}
    assert len(outs) == 1
    doc = json.loads(outs.pop())
    labels = [r["bound"] for r in doc["rows"]]
    assert labels[:2] == ["u1", "l2"] and labels[-3:] == ["exact", "l_path", "l_cut"]


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "reliability", DATA / "parallel2.json", "--format", "json", "--precision", "2")
    assert json.loads(out)["rows"][1]["R"] == 0.91


def test_generators_and_cuts(capsys):
    code, out, _ = run(capsys, "generators", DATA / "s8-421.json", "--level", "1", "--format", "json")
    assert code == 0 and json.loads(out)["count"] == 106
    _, out, _ = run(capsys, "cuts", DATA / "s8-421.json", "--level", "2", "--format", "json")
    assert json.loads(out)["count"] == 8


def test_boundary_upper(capsys):
    _, out, _ = run(capsys, "boundary", DATA / "example38.json", "--kind", "upper", "--level", "2", "--format", "json")
    states = {tuple(r["state"]) for r in json.loads(out)["rows"]}
    assert states == {(2, 3, 2, 2, 1), (4, 2, 2, 2, 1)}


def test_betti_table(capsys):
    code, out, _ = run(capsys, "betti", DATA / "sum_threshold_3_4_5.json")
    assert code == 0 and "exact: true" in out
    _, out, _ = run(capsys, "betti", DATA / "consecutive_2_5.json", "--multigraded", "--compatibility", "--format", "json")
    assert sum(r["upper"] for r in json.loads(out)["rows"]) == 9


def test_hilbert_collapsed(capsys):
    _, out, _ = run(capsys, "hilbert", DATA / "parallel2.json", "--level", "2", "--collapsed", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["monomial"]: int(r["coefficient"]) for r in rows} == {"x1^2": 1, "x2^2": 1, "x1^2*x2^2": -1}


def test_oracle_passes(capsys):
    code, out, _ = run(capsys, "oracle", DATA / "example44.json", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert {r["quantity"] for r in doc["rows"]} == {"generators", "numerator", "reliability", "sandwich"}


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "reliability", DATA / "sum_threshold_3_4_5.json")[0] == 1
    assert run(capsys, "generators", DATA / "example44.json", "--level", "9")[0] == 1
    assert run(capsys, "generators", tmp_path / "missing.json")[0] == 1
    code, _, err = run(capsys, "oracle", DATA / "s8-421.json", "--budget", "100")
    assert code == 2 and "budget" in err
    assert run(capsys, "cuts", DATA / "sum_threshold_3_4_5.json", "--budget", "10")[0] == 2


def test_oracle_mismatch_exit(capsys, monkeypatch):
    import multistate_kn.cli as cli

    monkeypatch.setattr(cli, "brute_force_generators", lambda spec, j, budget: [])
    assert run(capsys, "oracle", DATA / "parallel2.json")[0] == 3


def tank_rows(capsys, *extra):
    code, out, _ = run(capsys, "tank-sweep", DATA / "tank.json", "--no-timing", "--threads", "1", *extra)
    assert code == 0
    return list(csv.DictReader(io.StringIO(out)))


def test_tank_sweep_csv(capsys):
    rows = tank_rows(capsys)
    assert list(rows[0]) == ["level", "num_generators", "probability", "runtime_seconds"]
    assert [int(r["level"]) for r in rows] == list(range(125, 141))
    assert [int(r["num_generators"]) for r in rows[:3]] == [0, 0, 0]
    assert [float(r["probability"]) for r in rows[:3]] == [0.0, 0.0, 0.0]
    assert [int(r["num_generators"]) for r in rows[3:]] == [
        1, 121, 651, 1451, 2226, 2826, 3246, 3526, 3701, 3801, 3851, 3871, 3876
    ]
    assert {r["runtime_seconds"] for r in rows} == {"0.0"}


def test_tank_sweep_reproduces_printed_probabilities(capsys):
    # linear survival array; the printed column is good to one unit in the fifth decimal
    got = [float(r["probability"]) for r in tank_rows(capsys)[3:]]
    assert got == pytest.approx(TANK_PRINTED, abs=1e-5)


def test_tank_sweep_law_and_threads(capsys):
    serial = tank_rows(capsys, "--law", "1-(10/150*j)^3/2")
    parallel = tank_rows(capsys, "--law", "1-(10/150*j)^3/2", "--threads", "2")
    assert serial == parallel
    probs = [float(r["probability"]) for r in serial]
    assert probs == sorted(probs)
