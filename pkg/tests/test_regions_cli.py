"""Tests for grid scans, their serialization, and the command-line interface."""

import io
import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellgap.lhv import lhv_validity_bound
from bellgap.polytope import violation_threshold
from bellgap.regions import (
    CSV_HEADER,
    LpSettings,
    ScanConfig,
    check_point,
    classify_point,
    parse_csv,
    point_json_dict,
    scan,
    write_csv,
    write_json,
)
from bellgap.states import XI_MAX


def _scan_csv(config):
    buf = io.StringIO()
    write_csv(scan(config), buf)
    return buf.getvalue()


def _run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "bellgap", *args],
        capture_output=True,
        text=True,
        timeout=300,
    )


def test_csv_header_is_pinned():
    assert CSV_HEADER == "xi_rad,xi_over_pi,p,entangled,lhv_modelled,bell_violating,lhv_bound,p_star,pt_min_eig"


def test_classify_point_regions():
    assert classify_point(0.0, 0.2).region == "separable"
    assert classify_point(0.5, 0.0).region == "separable"
    assert classify_point(0.3, XI_MAX).region == "entangled-lhv-modelled"
    assert classify_point(0.6, XI_MAX).region == "gap"
    assert classify_point(0.9, XI_MAX).region == "bell-violating"


def test_classify_point_fields_are_plain_python():
    pt = classify_point(np.float64(0.5), np.float64(0.2))
    assert type(pt.p) is float and type(pt.xi) is float
    assert type(pt.entangled) is bool
    json.dumps(point_json_dict(pt))  # must be serializable as-is


def test_classify_point_matches_the_analytic_pieces():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p, xi = float(rng.random()), float(rng.random() * XI_MAX)
        pt = classify_point(p, xi)
        assert pt.lhv_bound == pytest.approx(lhv_validity_bound(xi), abs=1e-15)
        assert pt.p_star == pytest.approx(violation_threshold(xi).p_star, abs=1e-15)
        assert pt.entangled == (p > 0.0 and xi > 0.0)
        assert pt.lhv_modelled == (p <= pt.lhv_bound)
        assert pt.bell_violating == (p > pt.p_star)


def test_check_point_report_shape():
    report = check_point(0.5, 0.4)
    assert set(report) == {"point", "region", "meta"}
    assert set(report["meta"]) == {"version", "seed", "generator"}
    assert report["point"]["xiRad"] == 0.4


def test_scan_grid_layout_and_flags():
    config = ScanConfig(n_xi=21, n_p=21)
    result = scan(config)
    assert len(result.points) == 21 * 21
    xi_vals = sorted({pt.xi for pt in result.points})
    assert len(xi_vals) == 21
    assert xi_vals[0] == 0.0 and abs(xi_vals[-1] - XI_MAX) < 1e-15
    for pt in result.points:
        assert not (pt.lhv_modelled and pt.bell_violating)
        assert pt.v_critical is None


def test_scan_output_is_deterministic():
    config = ScanConfig(n_xi=12, n_p=9, seed=4)
    assert _scan_csv(config) == _scan_csv(config)
    one, two = io.StringIO(), io.StringIO()
    write_json(scan(config), one)
    write_json(scan(config), two)
    assert one.getvalue() == two.getvalue()


def test_scan_csv_round_trip_full_precision():
    config = ScanConfig(n_xi=7, n_p=7)
    result = scan(config)
    text = _scan_csv(config)
    assert text.splitlines()[0] == CSV_HEADER
    records = parse_csv(text)
    assert len(records) == len(result.points)
    for rec, pt in zip(records, result.points):
        assert rec["xi_rad"] == pt.xi
        assert rec["p"] == pt.p
        assert rec["pt_min_eig"] == pt.pt_min_eig
        assert rec["entangled"] == pt.entangled
    with pytest.raises(ValueError):
        parse_csv("wrong,header\n")


def test_scan_json_payload_shape():
    config = ScanConfig(n_xi=3, n_p=3, lp_settings=LpSettings(m=2, restarts=2))
    buf = io.StringIO()
    write_json(scan(config), buf)
    payload = json.loads(buf.getvalue())
    assert set(payload) == {"config", "points", "meta"}
    assert payload["config"]["lpSettings"] == {"m": 2, "restarts": 2}
    assert payload["meta"]["generator"] == "numpy-PCG64"
    point_keys = {
        "xiRad",
        "xiOverPi",
        "p",
        "entangled",
        "lhvModelled",
        "bellViolating",
        "lhvBound",
        "pStar",
        "ptMinEig",
        "vCritical",
    }
    assert all(set(pt) == point_keys for pt in payload["points"])


def test_scan_lp_augmentation_is_consistent_with_flags():
    config = ScanConfig(
        xi_range=(XI_MAX, XI_MAX),
        p_range=(0.0, 1.0),
        n_xi=1,
        n_p=5,
        lp_settings=LpSettings(m=2, restarts=4),
    )
    for pt in scan(config).points:
        assert pt.v_critical is not None
        if pt.bell_violating:
            assert pt.v_critical < 1.0 - 1e-9
        if pt.p <= 1.0 / np.sqrt(2.0):
            assert pt.v_critical >= 1.0 - 1e-7


def test_scan_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(xi_range=(0.3, 0.1))
    with pytest.raises(ValueError):
        ScanConfig(p_range=(0.0, 1.5))
    with pytest.raises(ValueError):
        ScanConfig(n_xi=0)


@settings(max_examples=80, deadline=None)
@given(st.floats(0.0, 1.0, allow_nan=False), st.floats(0.0, float(XI_MAX), allow_nan=False))
def test_no_point_is_both_modelled_and_violating(p, xi):
    pt = classify_point(p, xi)
    assert not (pt.lhv_modelled and pt.bell_violating)
    # the two boundaries never touch where sin 2xi is resolvable; below that
    # both bounds round to 1 in doubles and the gap collapses to width zero
    assert pt.lhv_bound < pt.p_star or np.sin(2.0 * xi) < 1e-12


def test_cli_check_reports_the_region():
    # p = 0.6 at xi = pi/4 sits above the mimic bound 1/2 and below 1/sqrt(2)
    proc = _run_cli("check", "--p", "0.6", "--xi", "0.25pi")
    assert proc.returncode == 0
    assert "region: gap" in proc.stdout
    assert "entangled: true" in proc.stdout


def test_cli_scan_csv_stdout():
    proc = _run_cli("scan", "--grid", "4x5")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 4 * 5


def test_cli_scan_json_with_lp(tmp_path):
    out = tmp_path / "scan.json"
    proc = _run_cli(
        "scan", "--grid", "2x3", "--settings", "2", "--restarts", "2",
        "--format", "json", "--out", str(out),
    )
    assert proc.returncode == 0
    payload = json.loads(out.read_text())
    assert all("vCritical" in pt for pt in payload["points"])


def test_cli_scan_rejects_lp_columns_in_csv():
    proc = _run_cli("scan", "--settings", "2", "--format", "csv")
    assert proc.returncode == 2
    assert "invalid arguments" in proc.stderr


def test_cli_rejects_malformed_values():
    assert _run_cli("check", "--p", "1.5", "--xi", "0").returncode == 2
    assert _run_cli("check", "--p", "0.5", "--xi", "0.3pi").returncode == 2
    assert _run_cli("scan", "--grid", "0x5").returncode == 2
    assert _run_cli("lp", "--p", "0.5", "--xi", "0.1", "--settings", "9").returncode == 2
    assert _run_cli("mimic-verify", "--p", "0.4", "--xi", "0.1", "--samples", "-3").returncode == 2
    assert _run_cli("no-such-command").returncode == 2


def test_cli_mimic_verify_refuses_beyond_bound():
    proc = _run_cli("mimic-verify", "--p", "0.8", "--xi", "0.25pi", "--samples", "100")
    assert proc.returncode == 3
    assert "refused" in proc.stderr


def test_cli_mimic_verify_passes_inside_bound():
    proc = _run_cli("mimic-verify", "--p", "0.4", "--xi", "0.25pi", "--samples", "20000")
    assert proc.returncode == 0
    assert "pass: true" in proc.stdout


def test_cli_werner_prints_thresholds():
    proc = _run_cli("werner", "--d", "2")
    assert proc.returncode == 0
    assert "entanglement threshold: 0.3333333333333333" in proc.stdout
    assert "projective lhv threshold: 0.5" in proc.stdout
    assert "ppt boundary (bisection): 0.333333333" in proc.stdout
    assert _run_cli("werner", "--d", "5").returncode == 2


def test_cli_lp_reports_visibility_and_audit(tmp_path):
    out = tmp_path / "lp.json"
    proc = _run_cli(
        "lp", "--p", "1.0", "--xi", "0.25pi", "--settings", "2",
        "--restarts", "6", "--seed", "1", "--out", str(out),
    )
    assert proc.returncode == 0
    payload = json.loads(out.read_text())
    assert set(payload) == {"p", "xi", "vMin", "restarts", "result", "certificateAudit", "meta"}
    assert abs(payload["vMin"] - 1.0 / np.sqrt(2.0)) < 1e-4
    assert payload["certificateAudit"] is True
    assert payload["result"]["certificateType"] == "inequality"
