"""CLI surface: JSON records, CSV grids, presets, exit codes, determinism."""

import csv
import json
import math

import pytest

from pairtel.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def last_json(out):
    return json.loads(out.strip().splitlines()[-1])


# -- fidelity -------------------------------------------------------------------

def test_fidelity_g1_classical_point(capsys):
    code, out = run_cli(capsys, "fidelity", "--zeta", "0", "--gain", "1",
                        "--method", "g1-series")
    rec = last_json(out)
    assert code == 0
    assert rec["value"] == 0.5
    assert rec["method"] == "series"
    assert rec["params"]["zeta"] == 0.0


def test_fidelity_g1_reported_maximum(capsys):
    code, out = run_cli(capsys, "fidelity", "--zeta", "1.2357", "--gain", "1",
                        "--method", "g1-series")
    assert code == 0
    assert last_json(out)["value"] == pytest.approx(0.75884, abs=1e-3)


def test_fidelity_smeared_vacuum(capsys):
    code, out = run_cli(capsys, "fidelity", "--zeta", "0", "--method", "smeared")
    assert code == 0
    assert last_json(out)["value"] == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_fidelity_series_with_gain(capsys):
    code, out = run_cli(capsys, "fidelity", "--alpha", "1", "--zeta", "0.5",
                        "--gain", "0.8", "--method", "series")
    assert code == 0
    assert last_json(out)["value"] == pytest.approx(0.8046351574, abs=1e-8)


def test_fidelity_quadrature(capsys):
    code, out = run_cli(capsys, "fidelity", "--alpha", "1+0j", "--zeta", "0",
                        "--gain", "1", "--method", "quadrature")
    assert code == 0
    rec = last_json(out)
    assert rec["value"] == pytest.approx(0.5, abs=1e-4)
    assert rec["method"] == "quadrature"
    assert rec["quad_residual"] < 1e-8


def test_fidelity_tmsv(capsys):
    code, out = run_cli(capsys, "fidelity", "--method", "tmsv", "--r", "0.5",
                        "--gain", "1")
    assert code == 0
    assert last_json(out)["value"] == pytest.approx(1 / (1 + math.exp(-1.0)), rel=1e-12)


def test_fidelity_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["fidelity", "--method", "g1-series", "--gain", "0.9"])
    assert info.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as info:
        main(["fidelity", "--method", "tmsv"])
    assert info.value.code == 2


def test_fidelity_numerical_error_exits_3(capsys):
    code, out = run_cli(capsys, "fidelity", "--alpha", "200", "--zeta", "3",
                        "--gain", "0.5", "--method", "series")
    assert code == 3
    assert last_json(out)["error"]["type"] == "ConvergenceError"


def test_fidelity_output_is_deterministic(capsys):
    _, out1 = run_cli(capsys, "fidelity", "--zeta", "0.7", "--method", "g1-series")
    _, out2 = run_cli(capsys, "fidelity", "--zeta", "0.7", "--method", "g1-series")
    assert out1 == out2


# -- scan -----------------------------------------------------------------------

def test_scan_zeta_axis_csv(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, out = run_cli(capsys, "scan", "--zeta-axis", "0:2:3", "--gain", "1",
                        "--output", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert len(rows) == 3
    assert [r["zeta"] for r in rows] == ["0", "1", "2"]
    from pairtel.teleport import avg_fidelity_g1_series
    for r, z in zip(rows, (0.0, 1.0, 2.0)):
        # 17-significant-digit serialization round-trips the double exactly
        assert float(r["value"]) == avg_fidelity_g1_series(z, 1e-8).value
        assert r["error"] == ""
    summary = last_json(out)
    assert summary["points"] == 3


def test_scan_csv_bytes_are_deterministic(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(capsys, "scan", "--zeta-axis", "0:1.5:4", "--gain-axis", "0.7:1:3",
            "--alpha-abs", "1", "--output", str(p1))
    run_cli(capsys, "scan", "--zeta-axis", "0:1.5:4", "--gain-axis", "0.7:1:3",
            "--alpha-abs", "1", "--output", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_scan_json_round_trip(tmp_path, capsys):
    out_path = tmp_path / "scan.json"
    code, _ = run_cli(capsys, "scan", "--zeta-axis", "0:2:5", "--format", "json",
                      "--output", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["axes"][0]["name"] == "zeta"
    assert len(doc["points"]) == 5
    from pairtel.teleport import avg_fidelity_g1_series
    assert doc["points"][2]["value"] == avg_fidelity_g1_series(1.0, 1e-8).value


def test_scan_without_axis_exits_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["scan", "--output", str(tmp_path / "x.csv")])
    assert info.value.code == 2


def test_scan_io_error_exits_4(capsys):
    code, out = run_cli(capsys, "scan", "--zeta-axis", "0:1:2",
                        "--output", "/nonexistent-dir/sub/x.csv")
    assert code == 4
    assert last_json(out)["error"]["type"] in ("FileNotFoundError", "OSError")


def test_preset_fig2(tmp_path, capsys):
    out_path = tmp_path / "fig2.csv"
    code, _ = run_cli(capsys, "scan", "--preset", "fig2", "--points", "7",
                      "--output", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert list(rows[0]) == ["zeta", "f_pair_g1", "f_tmsv", "f_smeared"]
    assert len(rows) == 7
    assert all(float(r["f_smeared"]) < 0.5 for r in rows)
    assert float(rows[0]["f_pair_g1"]) == pytest.approx(0.5, abs=1e-12)


def test_preset_fig1(tmp_path, capsys):
    out_path = tmp_path / "fig1.csv"
    code, _ = run_cli(capsys, "scan", "--preset", "fig1", "--points", "2",
                      "--output", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert list(rows[0]) == ["alpha_abs", "f_opt", "zeta_opt", "g_opt"]
    assert len(rows) == 2
    assert all(0.0 <= float(r["g_opt"]) < 1.0 for r in rows)


# -- wigner ----------------------------------------------------------------------

def test_wigner_vacuum_section_is_positive(tmp_path, capsys):
    out_path = tmp_path / "w0.csv"
    code, out = run_cli(capsys, "wigner", "--zeta", "0",
                        "--xspec=-1.5:1.5:11", "--yspec=-1.5:1.5:11",
                        "--output", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(out_path.open()))
    assert len(rows) == 121
    assert all(float(r["w"]) > 0.0 for r in rows)
    assert last_json(out)["min_w"] > 0.0


def test_wigner_negativity_witness(tmp_path, capsys):
    out_path = tmp_path / "w1.csv"
    code, out = run_cli(capsys, "wigner", "--zeta", "1",
                        "--xspec", "0:2:15", "--yspec", "0:2:15",
                        "--output", str(out_path))
    assert code == 0
    assert last_json(out)["min_w"] < 0.0


def test_wigner_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["wigner", "--zeta", "1", "--xspec", "0:2:0",
              "--output", str(tmp_path / "w.csv")])
    assert info.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as info:
        main(["wigner", "--zeta", "1", "--x", "re_alpha", "--y", "re_alpha",
              "--output", str(tmp_path / "w.csv")])
    assert info.value.code == 2


def test_wigner_csv_round_trips_grid(tmp_path, capsys):
    from pairtel.states import PairCoherentState, wigner_batch
    import numpy as np

    out_path = tmp_path / "w.csv"
    run_cli(capsys, "wigner", "--zeta", "0.5", "--xspec=-1:1:5",
            "--yspec=-1:1:5", "--output", str(out_path))
    rows = list(csv.DictReader(out_path.open()))
    xs = np.linspace(-1, 1, 5)
    grid = wigner_batch(PairCoherentState(0.5),
                        np.meshgrid(xs, xs, indexing="ij")[0].astype(complex),
                        np.meshgrid(xs, xs, indexing="ij")[1].astype(complex),
                        tol=1e-8)
    for k, row in enumerate(rows):
        i, j = divmod(k, 5)
        assert float(row["w"]) == grid[i, j]
