"""Matrix files and polyline CSV output.

A matrix file is JSON with fields ``name``, ``dim`` and ``rows``. Floats are
written with ``repr`` (shortest round-trip form, at most 17 significant
digits), so a write/read cycle reproduces every entry exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError

SYMMETRY_TOL = 1e-9


def parse_matrix(doc, source: str = "<input>") -> tuple[str, np.ndarray]:
    if not isinstance(doc, dict) or "rows" not in doc:
        raise InputError(f"{source}: expected an object with a 'rows' field")
    rows = doc["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError(f"{source}: 'rows' must be a non-empty list of lists")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError(f"{source}: matrix is not square")
    if "dim" in doc and doc["dim"] != n:
        raise InputError(f"{source}: dim {doc['dim']} does not match {n} rows")
    try:
        A = np.array([[float(v) for v in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{source}: non-numeric entry ({exc})") from None
    if not np.all(np.isfinite(A)):
        raise InputError(f"{source}: non-finite entry")
    if np.abs(A - A.T).max() > SYMMETRY_TOL * max(1.0, np.abs(A).max()):
        raise InputError(f"{source}: matrix is not symmetric")
    return str(doc.get("name", Path(source).stem)), A


def read_matrix(path) -> tuple[str, np.ndarray]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None
    return parse_matrix(doc, str(path))


def matrix_doc(A, name: str) -> dict:
    A = np.asarray(A, dtype=float)
    return {"name": name, "dim": int(A.shape[0]), "rows": [[float(v) for v in r] for r in A]}


def write_json(path, doc) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return path


def write_matrix(path, A, name: str = "matrix") -> Path:
    return write_json(path, matrix_doc(A, name))


def _num(x: float) -> str:
    if not math.isfinite(x):
        raise InputError("refusing to write a non-finite coordinate")
    return repr(float(x))


def write_polylines(path, polylines) -> Path:
    """CSV with header ``label,k,x,y``; one row per point."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["label", "k", "x", "y"])
        for pl in polylines:
            for k, (x, y) in enumerate(pl.points):
                out.writerow([pl.label, k, _num(x), _num(y)])
    return path


def read_polylines(path) -> dict[str, np.ndarray]:
    groups: dict[str, list] = {}
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            groups.setdefault(row["label"], []).append((float(row["x"]), float(row["y"])))
    return {k: np.array(v) for k, v in groups.items()}
