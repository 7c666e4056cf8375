import io

import pytest

from parsched.cli import main
from parsched.config import RunConfig, SweepConfig
from parsched.experiment import (AGG_COLUMNS, RAW_COLUMNS, aggregate, compare, csv_text, read_csv,
                                 run_sweep)
from parsched.metrics import mean_std
from parsched.scheduler import Policy

SMALL = "[scenario]\nhorizon_ms = 500.0\n[sweep]\nprecision_step = 100\nreps = 2\n"


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL)
    return str(path)


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["generate", "--seed", "1", "--n-precision", "10", "--out", str(a)]) == 0
    assert main(["generate", "--seed", "1", "--n-precision", "10", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "requests" in capsys.readouterr().out


def test_generate_header_only(tmp_path):
    cfg = tmp_path / "quiet.toml"
    cfg.write_text("[scenario]\nn_general_tracking = 0\nverify_rate_hz = 0\nsearch = false\n")
    out = tmp_path / "s.txt"
    assert main(["generate", "--config", str(cfg), "--out", str(out)]) == 0
    assert all(line.startswith("#") for line in out.read_text().splitlines())


def test_run_rows_identical_and_timeline(tmp_path, small_cfg):
    scen = tmp_path / "s.txt"
    main(["generate", "--config", small_cfg, "--seed", "2", "--n-precision", "40", "--out", str(scen)])
    rows = []
    for i in range(2):
        out = tmp_path / f"r{i}.csv"
        assert main(["run", str(scen), "--config", small_cfg, "--out", str(out),
                     "--timeline", str(tmp_path / f"t{i}.csv")]) == 0
        rows.append(out.read_text())
    assert rows[0] == rows[1]
    assert (tmp_path / "t0.csv").read_bytes() == (tmp_path / "t1.csv").read_bytes()
    row = read_csv(io.StringIO(rows[0]))[0]
    assert list(row) == list(RAW_COLUMNS)
    assert float(row["tur"]) > 0 and 0 < float(row["ssr"]) <= 1
    assert (row["seed"], row["n_precision"]) == ("2", "40")


def test_run_empty_scenario_flags(tmp_path, capsys):
    scen = tmp_path / "e.txt"
    scen.write_text("# nothing\n")
    assert main(["run", str(scen)]) == 0
    row = read_csv(io.StringIO(capsys.readouterr().out))[0]
    assert row["empty"] == "1" and row["n_requests"] == "0"


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 Verify 0\n")
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "missing.txt")]) == 2
    assert main(["run", str(bad), "--config", str(tmp_path / "nope.toml")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["run", str(bad), "--policy", "Nope"])
    assert exc.value.code == 1
    assert main(["compare", "--policy", "HpedfPointer", "--out-dir", str(tmp_path)]) == 1


def test_sweep_single_row(tmp_path, small_cfg):
    cfg = tmp_path / "one.toml"
    cfg.write_text("[scenario]\nhorizon_ms = 300.0\n[sweep]\nprecision_from = 40\nprecision_to = 40\n")
    assert main(["sweep", "--config", str(cfg), "--reps", "1", "--policy", "HpedfPointer",
                 "--out-dir", str(tmp_path / "o")]) == 0
    raw = read_csv(open(tmp_path / "o" / "raw.csv"))
    agg = read_csv(open(tmp_path / "o" / "aggregate.csv"))
    assert len(raw) == 1 and len(agg) == 1
    assert list(agg[0]) == list(AGG_COLUMNS)


def test_compare_writes_deltas(tmp_path, small_cfg):
    assert main(["compare", "--config", small_cfg, "--reps", "1", "--out-dir", str(tmp_path)]) == 0
    rows = read_csv(open(tmp_path / "compare.csv"))
    assert {r["baseline"] for r in rows} == {"HpedfInterleave", "HpedfPointer"}
    assert len(rows) == 2 * 3  # loads 0, 100, 200


def small_run(workers):
    base = RunConfig()
    from dataclasses import replace
    scen = replace(base.scenario, horizon_ms=400.0)
    return replace(base, scenario=scen, sweep=SweepConfig(precision_step=40, reps=2, workers=workers))


def test_desk_grid_shape_and_parallel_equivalence():
    serial = run_sweep(small_run(1))
    parallel = run_sweep(small_run(2))
    assert csv_text(serial, RAW_COLUMNS) == csv_text(parallel, RAW_COLUMNS)
    agg = aggregate(serial)
    assert len(agg) == 18
    first = [r for r in serial if r["policy"] == agg[0]["policy"] and r["n_precision"] == agg[0]["n_precision"]]
    assert agg[0]["mean_ssr"] == mean_std(r["ssr"] for r in first)[0]
    deltas = compare(agg)
    assert len(deltas) == 12


def test_csv_round_trip():
    rows = run_sweep(small_run(1))[:4]
    text = csv_text(rows, RAW_COLUMNS)
    back = read_csv(io.StringIO(text))
    assert [float(r["tur"]) for r in back] == [r["tur"] for r in rows]
    assert csv_text(back, RAW_COLUMNS) == text
