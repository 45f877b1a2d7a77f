import json
import os

import numpy as np
import pytest

import bornrate as br
from bornrate.cli import main

GAUSS_SPEC = {"kind": "gaussian", "sigma": 1.0, "support_halfwidth": 10.0}


def write_config(tmp_path, name="config.json", **overrides):
    cfg = {"spec": GAUSS_SPEC, "seed": 4, "emitted": 2000, "out": str(tmp_path / "out")}
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def test_simulate_writes_expected_rows(tmp_path, capsys):
    cfg = write_config(tmp_path, emitted=100)
    assert main(["simulate", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "recorded=100" in out
    lines = (tmp_path / "out" / "events.csv").read_text().splitlines()
    data_rows = [l for l in lines if l and not l.startswith("#") and l != "seq,x"]
    assert len(data_rows) == 100
    assert any(l.startswith("# tool=bornrate/") for l in lines)
    assert any(l.startswith("# config_hash=") for l in lines)


def test_simulate_rerun_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["simulate", "--config", str(cfg)]) == 0
    first = (tmp_path / "out" / "events.csv").read_bytes()
    assert main(["simulate", "--config", str(cfg)]) == 0
    assert (tmp_path / "out" / "events.csv").read_bytes() == first


def test_flags_override_config(tmp_path):
    cfg = write_config(tmp_path, emitted=50)
    out2 = tmp_path / "flagged"
    assert main(["simulate", "--config", str(cfg), "--emitted", "75",
                 "--out", str(out2)]) == 0
    rows = [l for l in (out2 / "events.csv").read_text().splitlines()
            if l and not l.startswith("#") and l != "seq,x"]
    assert len(rows) == 75


def test_analyze_produces_series_and_fit(tmp_path, capsys):
    cfg = write_config(tmp_path, emitted=20_000)
    main(["simulate", "--config", str(cfg)])
    log_path = tmp_path / "out" / "events.csv"
    assert main(["analyze", str(log_path), "--bins", "64",
                 "--out", str(tmp_path / "ana")]) == 0
    printed = capsys.readouterr().out
    assert "alpha_hat=" in printed and "C_min_alpha1=" in printed

    fit = json.loads((tmp_path / "ana" / "fit.json").read_text())
    for field in ("alpha_hat", "alpha_se", "C_hat", "r_squared", "C_min_alpha1",
                  "C_trend_alpha1", "C_min_alpha05", "C_trend_alpha05",
                  "M", "e", "seed"):
        assert field in fit
    assert fit["M"] == 64 and fit["e"] == 1.0 and fit["seed"] == 4

    series_lines = (tmp_path / "ana" / "series.csv").read_text().splitlines()
    assert "N,D" in series_lines
    first_row = [l for l in series_lines if l and not l.startswith("#") and l != "N,D"][0]
    assert first_row.startswith("10,")


def test_analyze_rerun_identical(tmp_path):
    cfg = write_config(tmp_path, emitted=5000)
    main(["simulate", "--config", str(cfg)])
    log_path = tmp_path / "out" / "events.csv"
    main(["analyze", str(log_path), "--out", str(tmp_path / "a1")])
    main(["analyze", str(log_path), "--out", str(tmp_path / "a2")])
    assert ((tmp_path / "a1" / "fit.json").read_bytes()
            == (tmp_path / "a2" / "fit.json").read_bytes())
    assert ((tmp_path / "a1" / "series.csv").read_bytes()
            == (tmp_path / "a2" / "series.csv").read_bytes())


def test_analyze_injected_series_exact_inverse_law(tmp_path):
    series = tmp_path / "series.csv"
    rows = ["N,D"] + [f"{n},{1.0 / n:.17g}" for n in (100, 1000, 10_000)]
    series.write_text("\n".join(rows) + "\n")
    assert main(["analyze", "--inject-series", str(series),
                 "--out", str(tmp_path / "inj")]) == 0
    fit = json.loads((tmp_path / "inj" / "fit.json").read_text())
    assert fit["alpha_hat"] == pytest.approx(1.0, abs=1e-12)
    assert fit["C_hat"] == pytest.approx(1.0, abs=1e-12)


def test_analyze_large_gaussian_exponent_near_half(tmp_path):
    cfg = write_config(tmp_path, emitted=1_000_000, seed=12345)
    main(["simulate", "--config", str(cfg)])
    assert main(["analyze", str(tmp_path / "out" / "events.csv"), "--bins", "64",
                 "--out", str(tmp_path / "big")]) == 0
    fit = json.loads((tmp_path / "big" / "fit.json").read_text())
    assert 0.4 <= fit["alpha_hat"] <= 0.6


def test_sweep_single_cell_matches_library(tmp_path):
    cfg = write_config(tmp_path, emitted=20_000, seed=5, bins=[64], efficiency=[1.0])
    assert main(["sweep", "--config", str(cfg), "--replicas", "1"]) == 0
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    data = [l for l in lines if l and not l.startswith("#")][1:]
    assert len(data) == 1
    m, e, alpha, c1, c05 = data[0].split(",")
    dist = br.validate(br.spec_from_config(GAUSS_SPEC))
    manual = br.run_replica(dist, 64, 1.0, 20_000, br.derive_seed(5, 0))
    assert float(alpha) == manual.fit.exponent
    assert float(c1) == manual.bound_inverse.c_min
    assert float(c05) == manual.bound_sqrt.c_min


def test_sweep_factorial_rows(tmp_path):
    cfg = write_config(tmp_path, emitted=3000, bins=[8, 16], efficiency=[1.0, 0.5])
    assert main(["sweep", "--config", str(cfg), "--replicas", "2"]) == 0
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    data = [l for l in lines if l and not l.startswith("#")][1:]
    assert len(data) == 4


def test_report_single_input_passthrough(tmp_path):
    cfg = write_config(tmp_path, emitted=5000)
    main(["simulate", "--config", str(cfg)])
    main(["analyze", str(tmp_path / "out" / "events.csv"), "--out", str(tmp_path / "ana")])
    fit_path = tmp_path / "ana" / "fit.json"
    assert main(["report", str(fit_path), "--out", str(tmp_path / "rep")]) == 0

    report_lines = (tmp_path / "rep" / "report.csv").read_text().splitlines()
    header = [l for l in report_lines if not l.startswith("#")][0]
    assert header.startswith("run,N,D,log10_N,log10_D,alpha_hat,")
    data = [l for l in report_lines if l and not l.startswith("#")][1:]
    series_rows = [l for l in (tmp_path / "ana" / "series.csv").read_text().splitlines()
                   if l and not l.startswith("#") and l != "N,D"]
    assert len(data) == len(series_rows)
    # data columns pass straight through
    for out_row, src_row in zip(data, series_rows):
        n, d = src_row.split(",")
        assert out_row.split(",")[1] == n
        assert out_row.split(",")[2] == d


def test_report_merges_and_is_idempotent_on_data(tmp_path):
    cfg = write_config(tmp_path, emitted=4000)
    main(["simulate", "--config", str(cfg)])
    main(["analyze", str(tmp_path / "out" / "events.csv"), "--bins", "16",
          "--out", str(tmp_path / "a1")])
    main(["analyze", str(tmp_path / "out" / "events.csv"), "--bins", "64",
          "--out", str(tmp_path / "a2")])
    f1, f2 = str(tmp_path / "a1" / "fit.json"), str(tmp_path / "a2" / "fit.json")
    main(["report", f1, f2, "--out", str(tmp_path / "r1")])
    main(["report", f1, f2, "--out", str(tmp_path / "r2")])
    r1 = (tmp_path / "r1" / "report.csv").read_bytes()
    assert r1 == (tmp_path / "r2" / "report.csv").read_bytes()
    rows = [l for l in r1.decode().splitlines() if l and not l.startswith("#")][1:]
    runs = {row.split(",")[0] for row in rows}
    assert runs == {f1, f2}


def test_report_schema_mismatch_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"alpha_hat": 1.0}))
    assert main(["report", str(bad), "--out", str(tmp_path)]) == 2
    assert capsys.readouterr().err.startswith("CONFIG_ERROR:")


# ---------------------------------------------------------------------------
# error paths and exit codes
# ---------------------------------------------------------------------------

def test_invalid_spec_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, spec={"kind": "gaussian", "sigma": -1.0,
                                       "support_halfwidth": 10.0})
    assert main(["simulate", "--config", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("CONFIG_ERROR:") and "sigma" in err


def test_missing_spec_exits_2(tmp_path, capsys):
    path = tmp_path / "nospec.json"
    path.write_text(json.dumps({"seed": 1}))
    assert main(["simulate", "--config", str(path)]) == 2
    assert capsys.readouterr().err.startswith("CONFIG_ERROR:")


def test_malformed_config_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["simulate", "--config", str(path)]) == 2
    assert capsys.readouterr().err.startswith("CONFIG_ERROR:")


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, bogus_knob=3)
    assert main(["simulate", "--config", str(cfg)]) == 2
    assert "bogus_knob" in capsys.readouterr().err


def test_corrupt_log_exits_3_with_line_number(tmp_path, capsys):
    cfg = write_config(tmp_path, emitted=20)
    main(["simulate", "--config", str(cfg)])
    log_path = tmp_path / "out" / "events.csv"
    text = log_path.read_text().splitlines()
    text[8] = "not,a,row,at,all"
    log_path.write_text("\n".join(text) + "\n")
    assert main(["analyze", str(log_path), "--out", str(tmp_path / "x")]) == 3
    err = capsys.readouterr().err
    assert err.startswith("DATA_ERROR:") and ":9:" in err


def test_insufficient_events_exits_3(tmp_path, capsys):
    cfg = write_config(tmp_path, emitted=1)
    main(["simulate", "--config", str(cfg)])
    assert main(["analyze", str(tmp_path / "out" / "events.csv"),
                 "--out", str(tmp_path / "x")]) == 3
    assert capsys.readouterr().err.startswith("DATA_ERROR:")


def test_unwritable_out_exits_4(tmp_path, capsys):
    cfg = write_config(tmp_path, emitted=10, out=os.devnull + "/sub")
    assert main(["simulate", "--config", str(cfg)]) == 4
    assert capsys.readouterr().err.startswith("IO_ERROR:")


def test_tabulated_spec_via_csv_config(tmp_path):
    (tmp_path / "table.csv").write_text("-2.0,0.5\n0.0,2.0\n2.0,0.5\n")
    cfg = write_config(tmp_path, spec={"table_csv": "table.csv"}, emitted=500)
    assert main(["simulate", "--config", str(cfg)]) == 0
    log = br.read_event_log(tmp_path / "out" / "events.csv")
    assert log.spec.kind == "tabulated"
    assert np.all(np.abs(log.positions) <= 2.0)
