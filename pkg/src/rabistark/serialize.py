"""Tabular serialization (CSV and JSON) shared by the command-line tools."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

__all__ = ["Table", "to_csv", "to_json", "from_json", "format_value", "serialize", "version"]


def version() -> str:
    try:
        from importlib.metadata import version as _v

        return _v("artifact")
    except Exception:  # pragma: no cover - not installed
        from . import __version__

        return __version__


@dataclass
class Table:
    """Column names, rows and a metadata mapping."""

    columns: list
    rows: list
    meta: dict = field(default_factory=dict)

    def records(self) -> list:
        return [dict(zip(self.columns, r)) for r in self.rows]


def format_value(v) -> str:
    """Render one cell: floats with 12 significant digits, None/NaN empty."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.12g}"
    try:
        import numpy as np

        if isinstance(v, np.integer):
            return str(int(v))
        if isinstance(v, np.floating):
            return format_value(float(v))
    except ImportError:  # pragma: no cover
        pass
    return str(v)


def _meta_items(meta: dict, timestamp: bool):
    items = dict(meta)
    items.setdefault("code_version", version())
    if timestamp:
        items["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return items


def to_csv(table: Table, timestamp: bool = True) -> str:
    buf = io.StringIO()
    for k, v in _meta_items(table.meta, timestamp).items():
        buf.write(f"# {k} = {format_value(v) if not isinstance(v, (dict, list)) else json.dumps(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([format_value(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    try:
        import numpy as np

        if isinstance(v, np.integer):
            return int(v)
        if isinstance(v, np.floating):
            return _jsonable(float(v))
    except ImportError:  # pragma: no cover
        pass
    return v


def to_json(table: Table, timestamp: bool = True) -> str:
    meta = {k: _jsonable(v) for k, v in _meta_items(table.meta, timestamp).items()}
    obj = {"meta": meta, "columns": list(table.columns),
           "rows": [[_jsonable(v) for v in r] for r in table.rows]}
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def from_json(text: str) -> Table:
    obj = json.loads(text)
    rows = [[math.nan if v is None else v for v in r] for r in obj["rows"]]
    return Table(columns=obj["columns"], rows=rows, meta=obj.get("meta", {}))


def serialize(table: Table, fmt: str = "csv", timestamp: bool = True) -> bytes:
    if fmt == "csv":
        return to_csv(table, timestamp).encode()
    if fmt == "json":
        return to_json(table, timestamp).encode()
    raise ValueError(f"unknown format {fmt!r}")
