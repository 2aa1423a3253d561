from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

import oracles
from covdc.cli import SWEEP_COLUMNS, main
from covdc.fileio import dumps, load_scheme, loads

DATA = Path(__file__).parent / "data"


def test_build_worked_example_round_trip(tmp_path, capsys, worked):
    out = tmp_path / "w.json"
    assert main(["build", "--worked-example", "-o", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["verified"] and summary["costs"]["gamma"] == "3/4"
    assert summary["costs"]["delta"] == "19/32"
    s = load_scheme(out)
    assert s.F == worked.F and s.D == worked.D and s.E == worked.E
    assert dumps(loads(out.read_text())) == out.read_text()
    assert main(["verify", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "OK"


def test_example_alias_and_stdout(capsys):
    assert main(["build", "--paper-example"]) == 0
    cap = capsys.readouterr()
    assert loads(cap.out).q == 7 and json.loads(cap.err)["verified"]


def test_random_full_covering_build(tmp_path, capsys):
    out = tmp_path / "s.json"
    rc = main(["build", "--q", "2", "--K", "2", "--N", "6", "--L", "3", "--strategy", "full-covering",
               "--seed", "4", "-o", str(out)])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 4
    assert load_scheme(out).provenance["seed"] == 4
    assert main(["costs", str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["verified"]


def test_bad_configurations_exit_2(tmp_path, capsys):
    assert main(["build", "--q", "2", "--K", "3", "--N", "3", "--L", "2", "--strategy", "full-covering"]) == 2
    assert main(["build", "--q", "4", "--K", "1", "--N", "3", "--L", "1"]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    assert main(["bounds", "--q", "2", "--K", "2", "--N", "8", "--L", "5"]) == 2
    capsys.readouterr()


def test_verify_flags_flipped_entry(tmp_path, capsys):
    out = tmp_path / "w.json"
    main(["build", "--worked-example", "-o", str(out)])
    d = json.loads(out.read_text())
    d["E"][0][0] = (d["E"][0][0] + 1) % 7
    out.write_text(json.dumps(d))
    capsys.readouterr()
    assert main(["verify", str(out)]) == 1
    assert "mismatch at" in capsys.readouterr().out


def test_bounds_csv(capsys):
    assert main(["bounds", "--q", "2", "--K", "4", "--N", "8", "--L", "16"]) == 0
    cap = capsys.readouterr()
    rows = list(csv.DictReader(io.StringIO(cap.out)))
    assert [r["point"] for r in rows] == ["1", "2", "3", "4", "5"]
    assert float(rows[2]["gamma"]) == pytest.approx(oracles.Hq_inv(0.5, 2), abs=1e-11)
    assert "converse_gamma" in json.loads(cap.err)


def _sweep(capsys, *extra):
    assert main(["sweep", "--q", "2", "--rate", "0.5", "--N", "4", "6", "8", "10", "12", *extra]) == 0
    return capsys.readouterr().out


def test_sweep_columns_and_monotonicity(capsys):
    text = _sweep(capsys)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == SWEEP_COLUMNS
    dl = [float(r["asymptotic_delta"]) for r in rows]
    assert all(a > b for a, b in zip(dl, dl[1:]))
    for r in rows:
        assert float(r["converse_gamma"]) <= float(r["achievable_gamma"]) + 1e-12
        assert float(r["achievable_gamma"]) == pytest.approx(oracles.Hq_inv(0.5, 2), abs=1e-11)


def test_sweep_snapshot(capsys):
    assert _sweep(capsys) == (DATA / "sweep_q2_rate05.csv").read_text()


def test_multishot_sweep_snapshot(capsys):
    assert main(["sweep", "--q", "3", "--rate", "0.25", "--N", "8", "12", "16", "--T", "2"]) == 0
    text = capsys.readouterr().out
    assert text == (DATA / "sweep_q3_rate025_T2.csv").read_text()
    for r in csv.DictReader(io.StringIO(text)):
        K, N = int(r["K"]), int(r["N"])
        assert float(r["multishot_gamma"]) == pytest.approx(2 * oracles.Hq_inv(K / (2 * N), 3), abs=1e-11)


def test_sweep_constructions(capsys):
    for how in ("greedy", "block"):
        text = _sweep(capsys, "--construction", how, "--block", "2")
        rows = list(csv.DictReader(io.StringIO(text)))
        for r in rows:
            assert 0 < float(r["achieved_gamma"]) <= 1
            assert float(r["converse_gamma"]) <= float(r["achieved_gamma"]) + 1e-12
    assert main(["sweep", "--q", "2", "--N", "6", "--construction", "block", "--block", "4"]) == 2
