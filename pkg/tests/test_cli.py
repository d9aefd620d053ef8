import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from nlqm.cli import main
from nlqm.output import fmt, write_csv, write_json, write_svg_lines


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def test_csv_round_trip_precision(tmp_path):
    values = np.array([1.0 / 3.0, math.sqrt(17.0), -1e-17, 2.0**-52])
    path = tmp_path / "x.csv"
    write_csv(path, {"v": values})
    back = [float(row["v"]) for row in csv.DictReader(path.open())]
    assert back == list(values)  # exact round trip
    text = path.read_text()
    assert text.splitlines()[0] == "v"
    assert "," not in text.splitlines()[1]  # '.' decimals, no locale commas


def test_csv_rejects_ragged_columns(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "x.csv", {"a": [1.0, 2.0], "b": [1.0]})


def test_fmt_shortest_roundtrip():
    assert fmt(0.1) == "0.1"
    assert float(fmt(math.pi)) == math.pi


def test_json_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_json(a, {"z": 1.0, "a": [1, 2], "m": {"y": 0.5, "x": 0.25}})
    write_json(b, {"m": {"x": 0.25, "y": 0.5}, "a": [1, 2], "z": 1.0})
    assert a.read_bytes() == b.read_bytes()


def test_svg_plot_is_valid_and_deterministic(tmp_path):
    x = np.linspace(0.0, 1.0, 50)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    write_svg_lines(a, x, {"y": np.sin(x)}, title="t", x_label="x", y_label="y")
    write_svg_lines(b, x, {"y": np.sin(x)}, title="t", x_label="x", y_label="y")
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg ") and text.rstrip().endswith("</svg>")
    assert "polyline" in text


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def test_figures_preset(tmp_path, capsys):
    out = tmp_path / "fig"
    assert main(["figures", "--out", str(out)]) == 0
    for name in ("taudelta.csv", "kappa.svg", "tau.svg", "delta.svg", "summary.json"):
        assert (out / name).exists()
    rows = list(csv.DictReader((out / "taudelta.csv").open()))
    mid = [r for r in rows if float(r["s"]) == 0.0][0]
    assert float(mid["kappa_closed"]) == 0.0
    assert float(mid["delta_closed"]) == 1.0
    assert float(mid["tau_closed"]) == pytest.approx(math.sqrt(17.0), abs=1e-13)
    assert max(float(r["gap"]) for r in rows) <= 1e-6
    summary = json.loads((out / "summary.json").read_text())
    assert summary["max_gap"] <= 1e-6
    assert summary["h_drift_numeric"] <= 1e-10


def test_taudelta_rejects_conflicting_solver(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"b": 1.0, "mu": -0.25, "N": 5.0},  # p = -1/3, not -1
        "solver": "closed",
    }))
    assert main(["taudelta", "--config", str(config), "--out", str(tmp_path / "o")]) == 2


def test_taudelta_unknown_keys_rejected(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"params": {"b": 1.0}, "bogus": 1}))
    assert main(["taudelta", "--config", str(config), "--out", str(tmp_path / "o")]) == 2


def test_taudelta_integrate_only_general_p(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"b": 1.0, "mu": -0.25, "N": 3.0},
        "c": 1.5, "s_min": 0.0, "s_max": 2.0, "n_samples": 51, "substep": 1e-3,
    }))
    out = tmp_path / "o"
    assert main(["taudelta", "--config", str(config), "--out", str(out)]) == 0
    rows = list(csv.DictReader((out / "taudelta.csv").open()))
    assert "kappa_num" in rows[0] and "kappa_closed" not in rows[0]
    c_rec = [float(r["c_recovered"]) for r in rows]
    assert max(abs(c - c_rec[0]) for c in c_rec) < 1e-8


def test_state_fixed_point_outputs(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"a": 0.7, "b": 1.0, "mu": -0.5, "lambda": 0.3, "alpha1": 0.11,
                   "alpha2": -0.04, "beta1": 0.06, "beta2": 0.09, "N": 2.0},
        "energies": [0.3, 1.1, 2.2, 3.5],
        "mode": "fixed_point", "t_max": 6.0, "n_samples": 31,
    }))
    out = tmp_path / "st"
    assert main(["state", "--config", str(config), "--out", str(out), "--seed", "7"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["max_norm_sum_residual"] <= 1e-10
    assert report["gamma_phase_slope_residual"] <= 1e-10
    states = json.loads((out / "states.json").read_text())
    assert len(states) == 31
    assert len(states[0]["psi"]) == 4
    rows = list(csv.DictReader((out / "residuals.csv").open()))
    assert abs(float(rows[-1]["norm_sum_resid"])) <= 1e-10


def test_state_seed_repeatability(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"a": 0.7, "b": 1.0, "mu": -0.5, "lambda": 0.3, "N": 2.0},
        "energies": [0.3, 1.1, 2.2, 3.5], "mode": "fixed_point",
        "t_max": 3.0, "n_samples": 11,
    }))
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    main(["state", "--config", str(config), "--out", str(out1), "--seed", "5"])
    main(["state", "--config", str(config), "--out", str(out2), "--seed", "5"])
    for name in ("states.json", "residuals.csv", "report.json"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    out3 = tmp_path / "s3"
    main(["state", "--config", str(config), "--out", str(out3), "--seed", "6"])
    assert (out1 / "states.json").read_bytes() != (out3 / "states.json").read_bytes()


def test_state_general_background(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"a": 0.3, "b": 1.0, "mu": -0.5, "lambda": 0.2, "alpha1": 0.1,
                   "alpha2": -0.05, "beta1": 0.08, "beta2": 0.12, "N": 5.0},
        "energies": [0.2, 0.9, 1.7, 2.6], "mode": "general", "c": 4.0,
        "n_samples": 41,
    }))
    out = tmp_path / "gen"
    assert main(["state", "--config", str(config), "--out", str(out), "--seed", "3"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["wronskian_drift"] <= 1e-8
    assert report["max_norm_sum_residual"] <= 1e-7
    assert report["max_gamma_residual"] <= 1e-7


def test_trajectory_outputs(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"a": 1.0, "b": 1.0, "mu": -0.5, "lambda": 0.25, "N": 2.0},
        "energies": [0.15, 0.9, 1.6, 2.8], "n_samples": 64, "periods": 1.0,
    }))
    out = tmp_path / "tr"
    assert main(["trajectory", "--config", str(config), "--out", str(out), "--seed", "21"]) == 0
    fit = json.loads((out / "ellipse.json").read_text())
    assert fit["conic_residual"] <= 1e-9
    assert fit["planarity_residual"] <= 1e-10
    assert fit["period"] == pytest.approx(math.pi / fit["sigma"], abs=1e-10)
    rows = list(csv.DictReader((out / "trajectory.csv").open()))
    assert float(rows[0]["period"]) == pytest.approx(math.pi / fit["sigma"], abs=1e-12)
    assert (out / "orbit.svg").exists()


def test_trajectory_explicit_position_model(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({
        "params": {"a": 1.0, "b": 1.0, "mu": -0.5, "N": 2.0},
        "position_model": {
            "diag_plus": [1.0, 0.0, 0.0], "diag_minus": [0.5, 0.2, 0.0],
            "cross_re": [0.3, 0.0, 0.1], "cross_im": [0.0, 0.2, 0.0],
        },
        "n_samples": 64,
    }))
    out = tmp_path / "tr2"
    assert main(["trajectory", "--config", str(config), "--out", str(out)]) == 0
    assert json.loads((out / "ellipse.json").read_text())["R1"] > 0


def test_sweep_with_jobs(tmp_path):
    config = tmp_path / "c.json"
    config.write_text(json.dumps({"sweep": [
        {"label": "n25", "params": {"b": 1.0, "mu": -0.5, "N": 5.0}, "c": 4.0,
         "s_min": -1.0, "s_max": 1.0, "n_samples": 21, "substep": 1e-3},
        {"label": "n16", "params": {"b": 1.0, "mu": -0.5, "N": 4.0}, "c": 4.0,
         "s_min": -1.0, "s_max": 1.0, "n_samples": 21, "substep": 1e-3},
    ]}))
    out = tmp_path / "sweep"
    assert main(["taudelta", "--config", str(config), "--out", str(out), "--jobs", "2"]) == 0
    assert (out / "n25" / "taudelta.csv").exists()
    assert (out / "n16" / "taudelta.csv").exists()
    serial = tmp_path / "serial"
    assert main(["taudelta", "--config", str(config), "--out", str(serial)]) == 0
    assert (out / "n25" / "taudelta.csv").read_bytes() == (serial / "n25" / "taudelta.csv").read_bytes()


def test_out_dir_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("NLQM_OUT_DIR", str(tmp_path / "env_out"))
    assert main(["figures"]) == 0
    assert (tmp_path / "env_out" / "taudelta.csv").exists()


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_passes_and_reports(tmp_path, capsys):
    out = tmp_path / "v"
    code = main(["verify", "--out", str(out)])
    captured = capsys.readouterr().out
    assert code == 0
    report = json.loads((out / "verify.json").read_text())
    ids = [r["id"] for r in report]
    assert len(ids) == len(set(ids))  # stable unique IDs
    assert all(r["passed"] for r in report)
    for r in report:
        assert r["id"] in captured


def test_verify_tolerance_override_produces_failures(tmp_path):
    # tightening every tolerance to 1e-15 must fail some invariants
    code = main(["verify", "--out", str(tmp_path / "v"), "--tol", "1e-15"])
    assert code == 1
    report = json.loads((tmp_path / "v" / "verify.json").read_text())
    assert any(not r["passed"] for r in report)
    assert all(r["tol"] == 1e-15 for r in report)
