"""Model documents and contour files.

A model document is a JSON text file holding the blocks of a fitted curve plus
the fit metadata.  Serialization is canonical (fixed key order, full-precision
floats, trailing newline), so parse followed by serialize reproduces the bytes
exactly.  All writes go through a temp-file/rename pair, so readers never see a
partial document.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .bspline import SplineSpace
from .errors import UsageError
from .fitting import CurveModel, FitReport, SplineBlock, as_contour

FORMAT_VERSION = 1


def build_document(
    model: CurveModel,
    lambdas: list[float],
    regularizer: str,
    admm_settings: dict,
    report: FitReport,
) -> dict:
    """Assemble the JSON-ready dict for a fitted model."""
    blocks = []
    for block in model.blocks:
        blocks.append(
            {
                "degree": int(block.space.alpha),
                "period": int(block.space.period),
                "num_coeffs": int(block.space.num_coeffs),
                "coeffs_x": [float(v) for v in block.coeffs[:, 0]],
                "coeffs_y": [float(v) for v in block.coeffs[:, 1]],
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "blocks": blocks,
        "fit": {
            "lambdas": [float(v) for v in lambdas],
            "regularizer": regularizer,
            "admm": {key: admm_settings[key] for key in sorted(admm_settings)},
            "report": {
                "qfe": float(report.qfe),
                "K": int(report.K),
                "K_per_block": [
                    len(report.knots_in_block(i + 1)) for i in range(len(model.blocks))
                ],
                "objective": float(report.objective),
                "iterations": int(report.iterations),
                "converged": bool(report.converged),
                "knot_eps": float(report.knot_eps),
                "knots": [
                    {
                        "t": float(k.t),
                        "ax": float(k.ax),
                        "ay": float(k.ay),
                        "block": int(k.block),
                    }
                    for k in report.knots
                ],
            },
        },
    }


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def loads_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"model document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("model document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise UsageError(
            f"unsupported model document version {doc.get('format_version')!r}"
        )
    if doc.get("kind") not in ("single", "hybrid"):
        raise UsageError(f"unknown model kind {doc.get('kind')!r}")
    blocks = doc.get("blocks")
    expected = 1 if doc["kind"] == "single" else 2
    if not isinstance(blocks, list) or len(blocks) != expected:
        raise UsageError(f"model document must contain {expected} block(s)")
    return doc


def model_from_document(doc: dict) -> CurveModel:
    blocks = []
    for raw in doc["blocks"]:
        try:
            space = SplineSpace(
                alpha=int(raw["degree"]),
                period=int(raw["period"]),
                num_coeffs=int(raw["num_coeffs"]),
            )
            cx = np.asarray(raw["coeffs_x"], dtype=float)
            cy = np.asarray(raw["coeffs_y"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed model block: {exc}") from exc
        if cx.shape != (space.num_coeffs,) or cy.shape != (space.num_coeffs,):
            raise UsageError("coefficient arrays disagree with num_coeffs")
        blocks.append(SplineBlock(space=space, coeffs=np.column_stack([cx, cy])))
    return CurveModel(blocks=tuple(blocks))


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}") from exc
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def save_document(path: str, doc: dict) -> None:
    write_text_atomic(path, dumps_document(doc))


def load_document(path: str) -> dict:
    try:
        with open(path, "r") as handle:
            text = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read model document {path!r}: {exc}") from exc
    return loads_document(text)


def read_contour_csv(path: str) -> np.ndarray:
    """Read an ``x,y`` CSV contour; a single ``x,y`` header line is allowed."""
    try:
        with open(path, "r") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read contour file {path!r}: {exc}") from exc
    rows = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if lineno == 1 and stripped.lower().replace(" ", "") == "x,y":
            continue
        parts = stripped.split(",")
        if len(parts) != 2:
            raise UsageError(
                f"{path}:{lineno}: expected 'x,y' with two fields, got {line!r}"
            )
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: non-numeric coordinate: {exc}") from exc
    if len(rows) < 3:
        raise UsageError(f"{path}: contour needs at least 3 points, got {len(rows)}")
    try:
        return as_contour(np.asarray(rows))
    except UsageError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def write_contour_csv(path: str, points) -> None:
    pts = as_contour(points)
    lines = ["x,y"] + [f"{float(x)!r},{float(y)!r}" for x, y in pts]
    write_text_atomic(path, "\n".join(lines) + "\n")
