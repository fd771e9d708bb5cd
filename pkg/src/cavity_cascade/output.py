"""CSV/JSON emitters with fixed column sets and JSON schemas.

CSV files have a header row, comma separators, '.' decimals and LF line
endings. Floats are written with ``repr`` (shortest round-trip form), so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import jsonschema

CSV_COLUMNS: dict[str, tuple[str, ...]] = {
    "modes": (
        "kind", "m", "frequency_rad_per_s", "relative_frequency", "relative_detuning",
        "band_edge_rad_per_s",
    ),
    "suppress": (
        "kind", "m", "branch", "mismatch_phase", "omega_rad_per_s", "weight", "geometric",
        "value", "geometric_total", "total_prefactor", "suppression_ratio",
    ),
    "scan": (
        "index", "length_nm", "theta2_deg", "theta3_deg", "ratio", "ratio_sequential",
        "ratio_parallel", "error",
    ),
    "optimize": (
        "step", "length_nm", "theta2_deg", "theta3_deg", "ratio", "half_width_length_nm",
        "half_width_theta2_deg", "half_width_theta3_deg",
    ),
    "signal2d": (
        "t2_fs", "t4_fs", "direct_re", "direct_im", "sequential_re", "sequential_im",
        "parallel_re", "parallel_im", "total_re", "total_im",
    ),
}

_num = {"type": ["number", "null"]}
_params = {
    "type": "object",
    "required": ["length_nm", "theta2_deg", "theta3_deg"],
    "properties": {k: {"type": "number"} for k in ("length_nm", "theta2_deg", "theta3_deg")},
}
_term = {
    "type": "object",
    "required": ["m", "branch", "geometric", "value", "weight"],
    "properties": {
        "m": {"type": "integer", "minimum": 1},
        "branch": {"enum": [-1, 1]},
        "geometric": {"type": "number", "minimum": 0},
        "value": {"type": "number", "minimum": 0},
        "weight": {"type": "number", "minimum": 0},
    },
}
_report = {
    "type": "object",
    "required": [
        "kind", "terms", "total_prefactor", "geometric_total", "suppression_ratio",
        "reference_value", "denominator_convention", "reference_convention", "branch_policy",
        "modes", "notes",
    ],
    "properties": {
        "kind": {"enum": ["sequential", "parallel"]},
        "terms": {"type": "array", "items": _term},
        "suppression_ratio": {"type": "number", "minimum": 0, "maximum": 1},
        "modes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

JSON_SCHEMAS: dict[str, dict] = {
    "modes": {
        "type": "object",
        "required": ["command", "modes"],
        "properties": {
            "command": {"const": "modes"},
            "modes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["kind", "m", "frequency_rad_per_s", "relative_detuning"],
                    "properties": {"m": {"type": "integer", "minimum": 1}},
                },
            },
        },
    },
    "suppress": {
        "type": "object",
        "required": ["command", "reports", "suppression_ratio"],
        "properties": {
            "command": {"const": "suppress"},
            "reports": {"type": "array", "items": _report, "minItems": 1},
            "suppression_ratio": {"type": "number", "minimum": 0, "maximum": 1},
        },
    },
    "scan": {
        "type": "object",
        "required": ["command", "swept", "shape", "rows"],
        "properties": {
            "command": {"const": "scan"},
            "swept": {"type": "array", "items": {"enum": ["length", "theta2", "theta3"]}},
            "shape": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["index", "params", "ratio", "error"],
                    "properties": {"params": _params, "ratio": _num},
                },
            },
        },
    },
    "optimize": {
        "type": "object",
        "required": ["command", "optimum", "ratio", "grid_shape", "refinement_steps", "trace"],
        "properties": {
            "command": {"const": "optimize"},
            "optimum": _params,
            "ratio": {"type": "number", "minimum": 0, "maximum": 1},
            "trace": {"type": "array"},
        },
    },
    "signal2d": {
        "type": "object",
        "required": ["command", "t2_fs", "t4_fs", "surfaces", "prefactors"],
        "properties": {
            "command": {"const": "signal2d"},
            "surfaces": {
                "type": "object",
                "required": ["direct", "sequential", "parallel", "total"],
            },
        },
    },
}


def fmt(x: Any) -> str:
    """Deterministic text form of a cell value."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return repr(x + 0.0)  # folds -0.0 into 0.0
    return str(x)


def to_csv(command: str, rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = CSV_COLUMNS[command]
    w.writerow(cols)
    for row in rows:
        if len(row) != len(cols):
            raise ValueError(f"{command} row has {len(row)} cells, expected {len(cols)}")
        w.writerow([fmt(c) for c in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else obj + 0.0
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def to_json(command: str, payload: dict) -> str:
    """Validate ``payload`` against the command's schema and serialise it."""
    doc = _clean(payload)
    jsonschema.validate(doc, JSON_SCHEMAS[command])
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_atomic(path: Path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
