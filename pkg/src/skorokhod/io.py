"""Reading and writing paths, integrators and reports.

Path JSON: ``{"horizon": T, "breakpoints": [...], "values": [...]}``.
Integrator JSON: ``{"horizon": T, "nodes": [...], "values": [...]}``; the
horizon may be omitted, in which case the last node is used.
Path CSV: an optional ``# horizon=T`` comment, an optional ``t,value``
header, then one ``t_i,c_i`` row per segment.

Floats are written with ``repr`` (shortest round-trip), so a file written
and read back reproduces the path bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

from .core import CadlagStep, IntegratorPath
from .errors import ParseError, SkorokhodError

__all__ = [
    "path_to_dict",
    "path_from_dict",
    "integrator_to_dict",
    "integrator_from_dict",
    "path_to_csv",
    "path_from_csv",
    "load_path",
    "save_path",
    "load_integrator",
    "dumps_json",
    "write_json",
    "write_text",
]


def path_to_dict(x: CadlagStep) -> dict[str, Any]:
    return {"horizon": x.horizon, "breakpoints": list(x.breakpoints), "values": list(x.values)}


def _floats(obj: dict, key: str) -> list[float]:
    if key not in obj:
        raise ParseError(f"missing key {key!r}")
    seq = obj[key]
    if not isinstance(seq, list):
        raise ParseError(f"{key!r} must be a list")
    try:
        return [float(v) for v in seq]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{key!r} holds a non-numeric entry") from exc


def path_from_dict(obj: Any) -> CadlagStep:
    if not isinstance(obj, dict):
        raise ParseError("path must be a JSON object")
    try:
        horizon = float(obj["horizon"])
    except KeyError as exc:
        raise ParseError("missing key 'horizon'") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError("'horizon' must be a number") from exc
    try:
        return CadlagStep(horizon, _floats(obj, "breakpoints"), _floats(obj, "values"))
    except ParseError:
        raise
    except SkorokhodError as exc:
        raise ParseError(str(exc)) from exc


def integrator_to_dict(a: IntegratorPath) -> dict[str, Any]:
    return {"horizon": a.horizon, "nodes": list(a.nodes), "values": list(a.values)}


def integrator_from_dict(obj: Any) -> IntegratorPath:
    if not isinstance(obj, dict):
        raise ParseError("integrator must be a JSON object")
    nodes = _floats(obj, "nodes")
    values = _floats(obj, "values")
    if not nodes:
        raise ParseError("'nodes' must be non-empty")
    horizon = float(obj.get("horizon", nodes[-1]))
    try:
        return IntegratorPath(horizon, nodes, values)
    except SkorokhodError as exc:
        raise ParseError(str(exc)) from exc


def path_to_csv(x: CadlagStep) -> str:
    buf = io.StringIO()
    buf.write(f"# horizon={x.horizon!r}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "value"])
    for t, c in zip(x.breakpoints, x.values):
        writer.writerow([repr(t), repr(c)])
    return buf.getvalue()


def path_from_csv(text: str, horizon: float | None = None) -> CadlagStep:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            if key.strip() == "horizon" and horizon is None:
                try:
                    horizon = float(val)
                except ValueError as exc:
                    raise ParseError(f"bad horizon comment {line!r}") from exc
            continue
        rows.append(line)
    if rows and rows[0].replace(" ", "").lower() == "t,value":
        rows = rows[1:]
    bps, vals = [], []
    for row in csv.reader(rows):
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {row!r}")
        try:
            bps.append(float(row[0]))
            vals.append(float(row[1]))
        except ValueError as exc:
            raise ParseError(f"non-numeric row {row!r}") from exc
    if not bps:
        raise ParseError("no data rows")
    if horizon is None:
        raise ParseError("CSV path needs a '# horizon=T' line")
    if not math.isfinite(horizon):
        raise ParseError("horizon must be finite")
    try:
        return CadlagStep(horizon, bps, vals)
    except SkorokhodError as exc:
        raise ParseError(str(exc)) from exc


def _read(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_path(path: str | Path) -> CadlagStep:
    """Load a path from ``.json`` or ``.csv`` (by suffix). OSError propagates."""
    text = _read(path)
    if str(path).lower().endswith(".csv"):
        return path_from_csv(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return path_from_dict(obj)


def load_integrator(path: str | Path) -> IntegratorPath:
    try:
        obj = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return integrator_from_dict(obj)


def save_path(x: CadlagStep, path: str | Path) -> None:
    if str(path).lower().endswith(".csv"):
        write_text(path, path_to_csv(x))
    else:
        write_json(path, path_to_dict(x))


def dumps_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path: str | Path, text: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text, encoding="utf-8")


def write_json(path: str | Path, obj: Any) -> None:
    write_text(path, dumps_json(obj))
