"""Command-line behavior: reports, determinism, exit codes, round trips."""

import json

import numpy as np
import pytest

from bertrand_kit.cli import main
from bertrand_kit.curves import AnalyticCurve
from bertrand_kit.io import dumps, load_curve, save_curve


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    rc = main(["generate", "--sphere-curve", "wobble", "--n", "256",
               "--out", str(d / "base.json")])
    assert rc == 0
    rc = main(["mate", str(d / "base.json"), "--auto", "--n", "256",
               "--out", str(d / "mate.json")])
    assert rc == 0
    helix = AnalyticCurve("3*cos(t)", "3*sin(t)", "4*t", (0.0, 6.0), label="helix")
    save_curve(helix, str(d / "helix.json"))
    return d


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_frenet_report_and_csv(workdir, capsys):
    csv = workdir / "fren.csv"
    rc, out, err = run(capsys, ["frenet", str(workdir / "helix.json"),
                                "--grid", "16", "--csv", str(csv)])
    assert rc == 0
    rep = json.loads(out)
    assert rep["command"] == "frenet"
    assert rep["results"]["n_rows"] == 16
    lines = csv.read_text().strip().splitlines()
    assert lines[0].startswith("t,s,Tx")
    assert len(lines) == 17
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert float(row["kappa"]) == pytest.approx(0.12, abs=1e-12)
    assert float(row["tau"]) == pytest.approx(0.16, abs=1e-12)


def test_frenet_at_single_point(workdir, capsys):
    rc, out, _ = run(capsys, ["frenet", str(workdir / "helix.json"),
                              "--at", "1.5"])
    assert rc == 0
    rep = json.loads(out)
    assert rep["results"]["n_rows"] == 1


def test_results_only_on_stdout(workdir, capsys):
    rc, out, err = run(capsys, ["frenet", str(workdir / "helix.json"),
                                "--at", "1.0"])
    assert rc == 0
    assert err == ""
    json.loads(out)


def test_verify_passes_and_lines(workdir, capsys):
    rc, out, _ = run(capsys, ["verify", str(workdir / "base.json"),
                              str(workdir / "mate.json"), "--n", "48"])
    assert rc == 0
    rep = json.loads(out)
    lines = rep["results"]["lines"]
    assert all(l.startswith(("PASS", "FAIL")) for l in lines)
    assert all(l.startswith("PASS") for l in lines)


def test_verify_tol_override_fails_identity(workdir, capsys):
    rc, out, _ = run(capsys, ["verify", str(workdir / "base.json"),
                              str(workdir / "mate.json"), "--n", "48",
                              "--tol", "th2=1e-20"])
    assert rc == 7
    rep = json.loads(out)
    assert not rep["results"]["entries"]["th2"]["passed"]


def test_verify_deterministic_across_threads(workdir, capsys, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("BERTRAND_KIT_THREADS", threads)
        rc, out, _ = run(capsys, ["verify", str(workdir / "base.json"),
                                  str(workdir / "mate.json"), "--n", "48"])
        assert rc == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_frenet_deterministic_across_threads(workdir, capsys, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("BERTRAND_KIT_THREADS", threads)
        rc, out, _ = run(capsys, ["frenet", str(workdir / "base.json"),
                                  "--grid", "32"])
        assert rc == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_indicatrix_csv_and_affine_block(workdir, capsys):
    csv = workdir / "ind.csv"
    rc, out, _ = run(capsys, ["indicatrix", str(workdir / "base.json"),
                              str(workdir / "mate.json"), "--kind", "b-base",
                              "--n", "32", "--csv", str(csv)])
    assert rc == 0
    rep = json.loads(out)
    assert "affine_fit" in rep["results"]
    assert rep["results"]["affine_fit"]["rms_residual"] < 1e-8
    header = csv.read_text().splitlines()[0].split(",")
    for col in ("kappa_closed", "kappa_direct", "kappa_gap", "tau_gap"):
        assert col in header


def test_indicatrix_tangent_no_affine_block(workdir, capsys):
    rc, out, _ = run(capsys, ["indicatrix", str(workdir / "base.json"),
                              str(workdir / "mate.json"), "--kind", "t-mate",
                              "--n", "16"])
    assert rc == 0
    rep = json.loads(out)
    assert "affine_fit" not in rep["results"]


def test_classify_single(workdir, capsys):
    rc, out, _ = run(capsys, ["classify", str(workdir / "helix.json")])
    assert rc == 0
    rep = json.loads(out)
    assert rep["results"]["general_helix"] is True
    assert rep["results"]["planar"] is False


def test_classify_pair(workdir, capsys):
    rc, out, _ = run(capsys, ["classify", str(workdir / "base.json"),
                              str(workdir / "mate.json"), "--n", "48"])
    assert rc == 0
    rep = json.loads(out)
    assert rep["results"]["verdict"] == "bertrand"


def test_exit_parse_error_bad_file(workdir, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nope": 1}')
    rc, out, err = run(capsys, ["frenet", str(bad), "--grid", "8"])
    assert rc == 2
    assert out == ""
    assert "error" in err


def test_exit_parse_error_missing_file(capsys):
    rc, _, err = run(capsys, ["frenet", "no-such-file.json", "--grid", "8"])
    assert rc == 2
    assert err


def test_exit_parse_error_bad_expression(capsys, tmp_path):
    f = tmp_path / "expr.json"
    f.write_text(dumps({"schema_version": 1, "label": "", "type": "analytic",
                        "analytic": {"x": "sinh(t)", "y": "t", "z": "t",
                                     "domain": [0.0, 1.0]}}))
    rc, _, err = run(capsys, ["frenet", str(f), "--grid", "8"])
    assert rc == 2


def test_exit_domain_error(workdir, capsys):
    rc, _, err = run(capsys, ["frenet", str(workdir / "helix.json"),
                              "--at", "99.0"])
    assert rc == 3


def test_exit_singular_without_mask(capsys, tmp_path):
    f = tmp_path / "cusp.json"
    save_curve(AnalyticCurve("t^2", "t^3", "t^4", (-1.0, 1.0)), str(f))
    rc, _, err = run(capsys, ["frenet", str(f), "--grid", "9"])
    assert rc == 4
    rc, out, _ = run(capsys, ["frenet", str(f), "--grid", "9", "--mask"])
    assert rc == 0
    rep = json.loads(out)
    assert rep["masked_intervals"]


def test_exit_degenerate_ratio_auto_lambda(workdir, capsys):
    # circular helix: constant kappa and tau, lambda is not unique
    rc, _, err = run(capsys, ["mate", str(workdir / "helix.json"), "--auto"])
    assert rc == 5


def test_exit_not_a_pair(workdir, capsys, tmp_path):
    f = tmp_path / "other.json"
    save_curve(AnalyticCurve("t", "t^2", "t^3", (0.0, 0.4)), str(f))
    rc, _, err = run(capsys, ["verify", str(workdir / "base.json"), str(f),
                              "--n", "32"])
    assert rc == 6


def test_exit_degenerate_sphere_curve(capsys, tmp_path):
    rc, _, err = run(capsys, ["generate", "--sphere-curve", "greatcircle",
                              "--out", str(tmp_path / "x.json")])
    assert rc == 8


def test_generate_metadata_round_trip(workdir):
    base = load_curve(str(workdir / "base.json"))
    meta = base.metadata
    assert meta["generator"] == "bertrand"
    assert meta["n"] == 256
    assert meta["seed_label"] == "wobble"


def test_curve_file_round_trip_byte_identical(workdir, tmp_path):
    c = load_curve(str(workdir / "base.json"))
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_curve(c, str(p1))
    save_curve(load_curve(str(p1)), str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_bad_threads_env(workdir, capsys, monkeypatch):
    monkeypatch.setenv("BERTRAND_KIT_THREADS", "zero")
    rc, _, err = run(capsys, ["frenet", str(workdir / "helix.json"),
                              "--at", "1.0"])
    assert rc == 2
