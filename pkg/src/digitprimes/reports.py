"""JSON/CSV report writing with a canonical, timestamp-free comparison form."""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable, Mapping

import numpy as np

SCHEMA_VERSION = 1
# keys dropped before byte comparison of two reports
VOLATILE_KEYS = frozenset({"timestamp", "timings"})


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars, Fractions, complex and non-finite floats."""
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return str(obj)


def envelope(command: str, config: Mapping, result: Mapping, ok: bool = True) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "ok": ok,
        "config": to_jsonable(config),
        "result": to_jsonable(result),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _strip(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def canonical(report: Mapping) -> str:
    """Sorted-key JSON without timestamp and timing fields."""
    return json.dumps(_strip(to_jsonable(report)), sort_keys=True, separators=(",", ":"))


def dumps(report: Mapping) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def write_json(report: Mapping, path: str | None) -> str:
    text = dumps(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def rows_to_csv(rows: Iterable[Mapping], header: list[str] | None = None) -> str:
    """CSV text with a mandatory header line; nested values are JSON-encoded."""
    rows = [dict(r) for r in rows]
    if header is None:
        header = []
        for r in rows:
            header += [k for k in r if k not in header]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        cells = []
        for k in header:
            v = to_jsonable(r.get(k, ""))
            cells.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        w.writerow(cells)
    return buf.getvalue()


def write_csv(rows: Iterable[Mapping], path: str | None, header: list[str] | None = None) -> str:
    text = rows_to_csv(rows, header)
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
