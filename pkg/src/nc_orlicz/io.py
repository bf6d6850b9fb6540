"""JSON ingestion and canonical report serialisation."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .nfunction import NFunction, from_json as nfunction_from_json
from .spectra import DecreasingStepFunction, ParametricDecay, TracedMatrix

__all__ = [
    "InputError",
    "SCHEMA_VERSION",
    "parse_json",
    "load_json",
    "matrix_from_json",
    "steps_from_json",
    "decay_from_json",
    "rearrangement_from_json",
    "load_matrix",
    "load_nfunction",
    "load_rearrangement",
    "to_jsonable",
    "dumps_report",
    "dumps_csv",
]

SCHEMA_VERSION = 1


@dataclass
class InputError(Exception):
    """Malformed input; ``line``/``column`` are 1-based when known."""

    message: str
    source: str = "<input>"
    line: int | None = None
    column: int | None = None

    def __str__(self):
        where = self.source
        if self.line is not None:
            where += f":{self.line}:{self.column}"
        return f"{where}: {self.message}"

    def to_json(self) -> dict:
        return {"error": "input", "message": self.message, "source": self.source, "line": self.line, "column": self.column}


def parse_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, source, exc.lineno, exc.colno) from None


def load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", str(p)) from None
    return parse_json(text, str(p))


def _require(obj: Any, key: str, source: str):
    if not isinstance(obj, dict):
        raise InputError("expected a JSON object", source)
    if key not in obj:
        raise InputError(f"missing key {key!r}", source)
    return obj[key]


def _real(v: Any, what: str, source: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise InputError(f"{what} must be a number", source)
    try:
        return float(v)
    except ValueError:
        raise InputError(f"{what} must be a number, got {v!r}", source) from None


def matrix_from_json(obj: Any, source: str = "<input>") -> TracedMatrix:
    """``{"n", "trace_scale", "entries": [[[re, im], ...], ...]}``.

    Entries may also be plain real numbers.
    """
    n = _require(obj, "n", source)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("'n' must be a positive integer", source)
    c = _real(obj.get("trace_scale", 1.0), "trace_scale", source)
    rows = _require(obj, "entries", source)
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise InputError(f"'entries' must be an {n}x{n} array", source)
    a = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            if isinstance(e, list):
                if len(e) != 2:
                    raise InputError(f"entry [{i}][{j}] must be [re, im]", source)
                a[i, j] = complex(_real(e[0], "re", source), _real(e[1], "im", source))
            else:
                a[i, j] = _real(e, f"entry [{i}][{j}]", source)
    if not np.all(np.isfinite(a)):
        raise InputError("entries must be finite", source)
    try:
        return TracedMatrix(a, c)
    except ValueError as exc:
        raise InputError(str(exc), source) from None


def steps_from_json(obj: Any, source: str = "<input>") -> DecreasingStepFunction:
    """``{"steps": [[value, length], ...]}``."""
    steps = _require(obj, "steps", source)
    if not isinstance(steps, list) or any(not isinstance(s, list) or len(s) != 2 for s in steps):
        raise InputError("'steps' must be a list of [value, length] pairs", source)
    if not steps:
        return DecreasingStepFunction.zero()
    vals = [_real(s[0], "value", source) for s in steps]
    lens = [_real(s[1], "length", source) for s in steps]
    try:
        return DecreasingStepFunction(np.array(vals), np.array(lens))
    except ValueError as exc:
        raise InputError(str(exc), source) from None


def decay_from_json(obj: Any, source: str = "<input>") -> ParametricDecay:
    """``{"pieces": [[a, b, c, beta], ...]}``; ``b`` may be ``"inf"``."""
    pieces = _require(obj, "pieces", source)
    if not isinstance(pieces, list) or any(not isinstance(p, list) or len(p) != 4 for p in pieces):
        raise InputError("'pieces' must be a list of [a, b, c, beta]", source)
    try:
        return ParametricDecay(tuple(tuple(_real(v, "piece field", source) for v in p) for p in pieces))
    except ValueError as exc:
        raise InputError(str(exc), source) from None


def rearrangement_from_json(obj: Any, source: str = "<input>"):
    """Matrix, step function or decay, chosen by the keys present."""
    if isinstance(obj, dict):
        if "entries" in obj:
            return matrix_from_json(obj, source)
        if "steps" in obj:
            return steps_from_json(obj, source)
        if "pieces" in obj:
            return decay_from_json(obj, source)
    raise InputError("expected a matrix, step function or decay object", source)


def load_matrix(path: str | Path) -> TracedMatrix:
    return matrix_from_json(load_json(path), str(path))


def load_rearrangement(path: str | Path):
    return rearrangement_from_json(load_json(path), str(path))


def load_nfunction(path: str | Path) -> NFunction:
    obj = load_json(path)
    try:
        return nfunction_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid N-function: {exc}", str(path)) from None


def to_jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become ``"inf"``, ``"-inf"``, ``"nan"``."""
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps_report(report: dict) -> str:
    body = dict(report)
    body["schema_version"] = SCHEMA_VERSION
    return json.dumps(to_jsonable(body), sort_keys=True, indent=2, allow_nan=False) + "\n"


def dumps_csv(rows: Iterable[dict], columns: list[str]) -> str:
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for k, v in to_jsonable(row).items()})
    return buf.getvalue()
