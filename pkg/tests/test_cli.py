import json
import math
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from splinefit import cli
from splinefit.contours import polygon_contour, square_contour
from splinefit.modeldoc import (
    dumps_document,
    load_document,
    model_from_document,
    read_contour_csv,
    write_contour_csv,
)

TRIANGLE = [(0.0, 0.0), (12.0, 0.0), (12.0, 9.0)]

FAST = ["--max-iters", "30000", "--tol-abs", "1e-9", "--tol-rel", "1e-7"]


def run_cli(*argv):
    return cli.main(list(argv))


def report_value(captured, key):
    for line in captured.splitlines():
        parts = line.split()
        if parts and parts[0] == key:
            return parts[1]
    raise AssertionError(f"no {key!r} line in output:\n{captured}")


@pytest.fixture
def square_csv(tmp_path):
    path = tmp_path / "square.csv"
    write_contour_csv(path, square_contour(16, 4.0))
    return str(path)


@pytest.fixture
def triangle_csv(tmp_path):
    path = tmp_path / "triangle.csv"
    write_contour_csv(path, polygon_contour(TRIANGLE, 36, offset=0.5))
    return str(path)


def test_fit_interpolation_limit(square_csv, tmp_path, capsys):
    out = str(tmp_path / "model.json")
    code = run_cli("fit", "--input", square_csv, "--output", out,
                   "--degree", "1", "--lambda", "1e-8", *FAST)
    captured = capsys.readouterr().out
    assert code == 0
    assert float(report_value(captured, "qfe")) <= 1e-6
    assert report_value(captured, "K") == "4"
    assert report_value(captured, "converged") == "true"
    doc = load_document(out)
    assert doc["kind"] == "single"
    assert len(doc["blocks"][0]["coeffs_x"]) == 16


def test_fit_centroid_limit(square_csv, tmp_path, capsys):
    out = str(tmp_path / "model.json")
    code = run_cli("fit", "--input", square_csv, "--output", out,
                   "--degree", "1", "--lambda", "1e12", *FAST)
    captured = capsys.readouterr().out
    assert code == 0
    pts = read_contour_csv(square_csv)
    variance = float(np.mean(np.sum((pts - pts.mean(axis=0)) ** 2, axis=1)))
    assert float(report_value(captured, "qfe")) == pytest.approx(variance, rel=1e-6)


def test_fit_printed_qfe_is_reproducible_from_document(square_csv, tmp_path, capsys):
    out = str(tmp_path / "model.json")
    run_cli("fit", "--input", square_csv, "--output", out,
            "--degree", "3", "--lambda", "0.5", *FAST)
    captured = capsys.readouterr().out
    model = model_from_document(load_document(out))
    from splinefit import qfe

    recomputed = qfe(model, read_contour_csv(square_csv))
    assert float(report_value(captured, "qfe")) == pytest.approx(recomputed, rel=1e-12)


def test_fit_missing_input(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    code = run_cli("fit", "--input", missing, "--output", str(tmp_path / "m.json"),
                   "--degree", "1", "--lambda", "1.0")
    err = capsys.readouterr().err
    assert code == 1
    assert err.count("\n") == 1
    assert "nope.csv" in err


def test_fit_unwritable_output(square_csv, tmp_path, capsys):
    out = str(tmp_path / "does" / "not" / "exist" / "m.json")
    code = run_cli("fit", "--input", square_csv, "--output", out,
                   "--degree", "1", "--lambda", "1.0", *FAST)
    err = capsys.readouterr().err
    assert code == 1
    assert "m.json" in err


def test_fit_bad_degree(square_csv, tmp_path, capsys):
    code = run_cli("fit", "--input", square_csv, "--output", str(tmp_path / "m.json"),
                   "--degree", "7", "--lambda", "1.0")
    err = capsys.readouterr().err
    assert code == 1
    assert err.strip() and "\n" not in err.strip()


def test_csv_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0,0\n1,2,3\n4,5\n")
    code = run_cli("fit", "--input", str(bad), "--output", str(tmp_path / "m.json"),
                   "--degree", "1", "--lambda", "1.0")
    err = capsys.readouterr().err
    assert code == 1
    assert "bad.csv:3" in err

    bad.write_text("0,0\n1,zap\n2,2\n")
    code = run_cli("fit", "--input", str(bad), "--output", str(tmp_path / "m.json"),
                   "--degree", "1", "--lambda", "1.0")
    err = capsys.readouterr().err
    assert code == 1
    assert "bad.csv:2" in err


def test_csv_header_and_blank_lines(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("x, y\n0,0\n\n1,0\n0,1\n")
    pts = read_contour_csv(str(path))
    assert pts.shape == (3, 2)


def test_usage_errors_exit_one(capsys):
    assert run_cli("fit", "--lambda", "1.0") == 1
    capsys.readouterr()
    assert run_cli("no-such-command") == 1
    capsys.readouterr()
    with pytest.raises(SystemExit):
        # argparse exits directly for --help; main() remaps it to 0
        cli.build_parser().parse_args(["--help"])
    capsys.readouterr()
    assert run_cli("--help") == 0
    capsys.readouterr()
    assert run_cli("fit", "--help") == 0
    capsys.readouterr()


def test_fit_hybrid_large_lambda2_kills_block_two(triangle_csv, tmp_path, capsys):
    out = str(tmp_path / "model.json")
    code = run_cli("fit-hybrid", "--input", triangle_csv, "--output", out,
                   "--degree1", "1", "--degree2", "3",
                   "--lambda1", "0.5", "--lambda2", "1e6",
                   "--rho", "100", "--max-iters", "40000",
                   "--tol-abs", "1e-10", "--tol-rel", "1e-8")
    captured = capsys.readouterr().out
    assert code == 0
    assert report_value(captured, "K2") == "0"
    assert report_value(captured, "K1") == "6"
    assert float(report_value(captured, "x1_abs")) <= 1e-8
    assert float(report_value(captured, "y1_abs")) <= 1e-8
    doc = load_document(out)
    assert doc["kind"] == "hybrid"
    assert doc["fit"]["report"]["K_per_block"] == [6, 0]


def test_fit_hybrid_rejects_degree_order(triangle_csv, tmp_path, capsys):
    code = run_cli("fit-hybrid", "--input", triangle_csv,
                   "--output", str(tmp_path / "m.json"),
                   "--degree1", "3", "--degree2", "1",
                   "--lambda1", "1.0", "--lambda2", "1.0")
    err = capsys.readouterr().err
    assert code == 1
    assert "degree" in err


def test_model_document_round_trip_bytes(square_csv, tmp_path, capsys):
    out = tmp_path / "model.json"
    run_cli("fit", "--input", square_csv, "--output", str(out),
            "--degree", "1", "--lambda", "0.3", *FAST)
    capsys.readouterr()
    original = out.read_text()
    assert dumps_document(json.loads(original)) == original


def test_identical_invocations_are_byte_identical(square_csv, tmp_path, capsys):
    args = ("fit", "--input", square_csv, "--degree", "1", "--lambda", "0.3", *FAST)
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    run_cli(*args, "--output", str(out_a))
    text_a = capsys.readouterr().out
    run_cli(*args, "--output", str(out_b))
    text_b = capsys.readouterr().out
    assert text_a == text_b
    assert out_a.read_bytes() == out_b.read_bytes()


def test_no_temp_files_left_behind(square_csv, tmp_path, capsys):
    run_cli("fit", "--input", square_csv, "--output", str(tmp_path / "m.json"),
            "--svg", str(tmp_path / "m.svg"), "--degree", "1", "--lambda", "0.3", *FAST)
    capsys.readouterr()
    leftovers = [p.name for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]
    assert leftovers == []


def _write_constant_model(path):
    from splinefit import CurveModel, SplineBlock, SplineSpace
    from splinefit.modeldoc import save_document

    space = SplineSpace(alpha=1, period=8, num_coeffs=8)
    model = CurveModel(blocks=(SplineBlock(space, np.tile([2.0, 3.0], (8, 1))),))
    doc = {
        "format_version": 1,
        "kind": "single",
        "blocks": [
            {
                "degree": 1,
                "period": 8,
                "num_coeffs": 8,
                "coeffs_x": [2.0] * 8,
                "coeffs_y": [3.0] * 8,
            }
        ],
    }
    save_document(str(path), doc)
    return model


def test_render_constant_model_degenerate_path(tmp_path, capsys):
    doc_path = tmp_path / "const.json"
    _write_constant_model(doc_path)
    svg_path = tmp_path / "const.svg"
    code = run_cli("render", "--input", str(doc_path), "--svg", str(svg_path))
    capsys.readouterr()
    assert code == 0
    text = svg_path.read_text()
    ET.fromstring(text)
    match = re.search(r'd="([^"]+)"', text)
    vertices = set(re.findall(r"[-0-9.e+]+ [-0-9.e+]+", match.group(1)))
    assert vertices == {"2 3"}
    assert "href" not in text


def test_render_marker_shapes(tmp_path, capsys):
    # hand-built hybrid: square-corner kinks in block 1, one coefficient
    # impulse in block 2 whose knot span crosses two block-1 knots
    from splinefit.modeldoc import save_document

    corners = square_contour(16, 4.0)
    c2x = [0.0] * 16
    c2x[6] = 1.0
    doc = {
        "format_version": 1,
        "kind": "hybrid",
        "blocks": [
            {
                "degree": 1,
                "period": 16,
                "num_coeffs": 16,
                "coeffs_x": list(corners[:, 0]),
                "coeffs_y": list(corners[:, 1]),
            },
            {
                "degree": 3,
                "period": 16,
                "num_coeffs": 16,
                "coeffs_x": c2x,
                "coeffs_y": c2x,
            },
        ],
    }
    doc_path = tmp_path / "hybrid.json"
    save_document(str(doc_path), doc)
    svg_path = tmp_path / "hybrid.svg"
    code = run_cli("render", "--input", str(doc_path), "--svg", str(svg_path),
                   "--show-knots")
    capsys.readouterr()
    assert code == 0
    text = svg_path.read_text()
    ET.fromstring(text)
    assert text.count("<circle") == 2
    polygons = re.findall(r'<polygon[^>]*stroke="(#[0-9a-f]{6})"', text)
    assert polygons.count("#1f77b4") == 3  # triangles
    assert polygons.count("#2ca02c") == 2  # coincidence diamonds


def test_render_unit_sampling_hits_system_matrix(tmp_path, capsys):
    from splinefit import SplineSpace, build_system_matrix
    from splinefit.modeldoc import save_document

    rng = np.random.default_rng(2)
    coeffs = rng.normal(size=(10, 2)).round(3)
    doc = {
        "format_version": 1,
        "kind": "single",
        "blocks": [
            {
                "degree": 2,
                "period": 10,
                "num_coeffs": 10,
                "coeffs_x": list(coeffs[:, 0]),
                "coeffs_y": list(coeffs[:, 1]),
            }
        ],
    }
    doc_path = tmp_path / "m.json"
    save_document(str(doc_path), doc)
    svg_path = tmp_path / "m.svg"
    run_cli("render", "--input", str(doc_path), "--svg", str(svg_path),
            "--samples-per-unit", "1")
    capsys.readouterr()
    match = re.search(r'd="M ([^"]+) Z"', svg_path.read_text())
    vertices = np.array([
        [float(v) for v in pair.split()]
        for pair in match.group(1).split(" L ")
    ])
    space = SplineSpace(alpha=2, period=10, num_coeffs=10)
    expected = build_system_matrix(space).entries @ coeffs
    assert np.abs(vertices - expected).max() <= 1e-9


def test_render_rejects_corrupt_document(tmp_path, capsys):
    doc_path = tmp_path / "bad.json"
    doc_path.write_text('{"format_version": 1, "kind": "single", "blocks": [{"degree": 1, "period": 8, "num_coeffs": 8, "coeffs_x": [0.0], "coeffs_y": [0.0]}]}\n')
    code = run_cli("render", "--input", str(doc_path), "--svg", str(tmp_path / "x.svg"))
    err = capsys.readouterr().err
    assert code == 1 and "coeffs" in err.replace("_", "")

    doc_path.write_text("not json\n")
    code = run_cli("render", "--input", str(doc_path), "--svg", str(tmp_path / "x.svg"))
    assert code == 1
    capsys.readouterr()


def test_experiment_rotate_group_constant_k(tmp_path, capsys):
    path = tmp_path / "tri.csv"
    write_contour_csv(path, polygon_contour(TRIANGLE, 18, offset=0.5))
    code = run_cli("experiment-rotate", "--input", str(path), "--degree", "1",
                   "--lambda", "0.5", "--theta", "0", "--theta", "40", *FAST)
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "theta_deg qfe K"
    rows = [line.split() for line in lines[1:3]]
    assert [r[0] for r in rows] == ["0", "40"]
    assert rows[0][2] == rows[1][2] == "6"
    assert lines[3] == "K_constant true"

    # the theta = 0 row is a plain fit of the unrotated input
    out_model = str(tmp_path / "m.json")
    run_cli("fit", "--input", str(path), "--output", out_model,
            "--degree", "1", "--lambda", "0.5", *FAST)
    fit_out = capsys.readouterr().out
    assert rows[0][1] == report_value(fit_out, "qfe")


def test_experiment_rotate_separable_varies(triangle_csv, capsys):
    code = run_cli("experiment-rotate", "--input", triangle_csv, "--degree", "1",
                   "--lambda", "1.0", "--reg", "tvl1",
                   "--theta", "0", "--theta", "10", "--theta", "25", "--theta", "40",
                   *FAST)
    out = capsys.readouterr().out
    assert code == 0
    ks = [line.split()[2] for line in out.splitlines()[1:5]]
    assert len(set(ks)) > 1
    assert "K_constant" not in out


def test_experiment_noise_table(triangle_csv, capsys):
    args = ("experiment-noise", "--input", triangle_csv, "--degree", "1",
            "--lambda", "1.0", "--snr-db", "inf", "--snr-db", "47", "--snr-db", "41",
            "--seed", "0", *FAST)
    code = run_cli(*args)
    out_a = capsys.readouterr().out
    assert code == 0
    lines = out_a.splitlines()
    assert lines[0] == "snr_db lambda qfe K"
    assert len(lines) == 4
    assert all(line.split()[3] == "6" for line in lines[1:])

    run_cli(*args)
    out_b = capsys.readouterr().out
    assert out_b == out_a

    # the no-noise row reproduces a plain fit
    run_cli("fit", "--input", triangle_csv, "--output", "/dev/null",
            "--degree", "1", "--lambda", "1.0", *FAST)
    fit_out = capsys.readouterr().out
    assert lines[1].split()[2] == report_value(fit_out, "qfe")


def test_compare_sparsity_square(square_csv, capsys):
    code = run_cli("compare-sparsity", "--input", square_csv, "--degree", "3",
                   "--lambda", "0.5", "--max-iters", "40000",
                   "--tol-abs", "1e-10", "--tol-rel", "1e-8")
    out = capsys.readouterr().out
    assert code == 0
    assert report_value(out, "K_match") == "true"
    assert report_value(out, "K_fit") == report_value(out, "K_baseline")
    assert float(report_value(out, "qfe_fit")) <= float(report_value(out, "qfe_baseline"))


def test_compare_sparsity_dense_limit(square_csv, capsys):
    code = run_cli("compare-sparsity", "--input", square_csv, "--degree", "3",
                   "--lambda", "1e-9", "--max-iters", "40000",
                   "--tol-abs", "1e-11", "--tol-rel", "1e-9")
    out = capsys.readouterr().out
    assert code == 0
    assert report_value(out, "K_fit") == "16"
    assert report_value(out, "K_baseline") == "16"
    assert float(report_value(out, "qfe_fit")) <= 1e-10
    assert float(report_value(out, "qfe_baseline")) <= 1e-10


def test_compare_sparsity_mismatch_exits_two(square_csv, capsys, monkeypatch):
    import splinefit.fitting as fitting

    real = cli.knot_removal_baseline

    def lying_baseline(points, alpha, target_K, knot_eps=1e-4):
        return real(points, alpha, max(0, target_K - 1), knot_eps=knot_eps)

    monkeypatch.setattr(cli, "knot_removal_baseline", lying_baseline)
    code = run_cli("compare-sparsity", "--input", square_csv, "--degree", "3",
                   "--lambda", "0.5", "--max-iters", "40000",
                   "--tol-abs", "1e-10", "--tol-rel", "1e-8")
    captured = capsys.readouterr()
    assert code == 2
    assert "does not match" in captured.err


def test_console_entry_point(tmp_path):
    csv = tmp_path / "sq.csv"
    write_contour_csv(csv, square_contour(16, 4.0))
    out = tmp_path / "m.json"
    proc = subprocess.run(
        [sys.executable, "-m", "splinefit.cli", "fit", "--input", str(csv),
         "--output", str(out), "--degree", "1", "--lambda", "1e-8", *FAST],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "qfe" in proc.stdout
    assert out.exists()
