"""Serialization of run outputs: JSON with fixed key order, CSV, six-decimal floats."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
from pathlib import Path

FLOAT_FMT = "{:.6f}"


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    return obj


def _encode(obj, indent, level) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if obj != obj or obj in (float("inf"), float("-inf")):
            return "null"
        if obj != 0 and abs(obj) < 1e-4:
            return repr(obj)
        return FLOAT_FMT.format(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _encode(_plain(obj), indent, 0) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return FLOAT_FMT.format(v)
    return str(v)


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps_json(obj), encoding="utf-8")
    return path


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.write_text(dumps_csv(header, rows), encoding="utf-8")
    return path


SWEEP_HEADER = ["p_cosine", "p_presenter", "p_break", "auc", "accuracy"]
INFLUENCE_HEADER = ["key", "probability", "ci_lo", "ci_hi", "n"]
PREDICTION_HEADER = ["participant", "slot", "talk", "raw_score", "norm_score", "predicted", "correct", "tie"]
EDGE_HEADER = ["slot", "layer", "src", "dst", "weight"]


def prediction_rows(decisions):
    """One row per candidate talk; ``correct`` marks the talk actually attended."""
    for d in decisions:
        norm = d.normalized
        for t in sorted(d.scores):
            yield (d.participant, d.slot, t, float(d.scores[t]), float(norm[t]),
                   t == d.predicted, t == d.attended, d.tie)


def emit_report(report, path, fmt: str | None = None) -> Path:
    """Write an evaluation report (JSON) or a list of sweep points / influence rows (CSV)."""
    from .evaluation import InfluenceRow
    from .predict import SweepPoint

    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".")
    if fmt == "json":
        return write_json(path, report)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    rows = list(report)
    if rows and isinstance(rows[0], SweepPoint):
        return write_csv(path, SWEEP_HEADER,
                         [(p.p_cosine, p.p_presenter, p.p_break, p.auc, p.accuracy) for p in rows])
    if rows and isinstance(rows[0], InfluenceRow):
        return write_csv(path, INFLUENCE_HEADER,
                         [(r.key, r.probability, r.ci_lo, r.ci_hi, r.n) for r in rows])
    raise TypeError("CSV output needs sweep points or influence rows")
