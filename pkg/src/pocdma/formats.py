"""CSV and JSON run records.

A run record is ``(subcommand, parameters, columns, rows, summary)``.  CSV
output carries the tool name, version and resolved parameters as leading
``#`` comment lines, then a header row and one line per row.  JSON output
holds the same content in one object; :data:`RUN_RECORD_SCHEMA` describes it.
Floats are written with 17 significant digits in CSV; JSON uses Python's
shortest round-trip representation, with NaN and infinities as ``null``.
"""

from __future__ import annotations

import io
import json
import math

from . import __version__

TOOL = "pocdma"

COLUMNS = {
    "solve": (
        "beta", "gamma", "a_star", "b_star", "t_star", "r_a", "r_b", "residual_inf_norm",
        "iterations", "converged", "h_nats", "h_bits", "eta", "eta_direct",
    ),
    "optimize": ("beta", "gamma_opt", "eta_opt"),
    "sweep": ("beta", "gamma_opt", "eta_opt", "eta_decorrelator", "eta_lmmse", "eta_optimal_mud", "status"),
    "mc-count": ("instance", "instance_seed", "count", "log2_count_per_user"),
    "mc-entropy": (
        "k", "n", "k_prime", "instances", "h_emp_bits", "h_emp_stderr", "cv",
        "h_analytic_bits", "gap", "anomalies",
    ),
    "link-ber": ("sigma", "snr_db", "ber_constrained", "ber_unconstrained", "frames"),
}

RUN_RECORD_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["tool", "version", "subcommand", "parameters", "columns", "rows", "summary"],
    "additionalProperties": False,
    "properties": {
        "tool": {"const": TOOL},
        "version": {"type": "string"},
        "subcommand": {"enum": sorted(COLUMNS)},
        "parameters": {"type": "object"},
        "columns": {"type": "array", "items": {"type": "string"}},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": {"type": ["number", "integer", "string", "boolean", "null"]},
            },
        },
        "summary": {"type": "object"},
    },
    "allOf": [
        {
            "if": {"properties": {"subcommand": {"const": name}}},
            "then": {
                "properties": {
                    "columns": {"const": list(cols)},
                    "rows": {"items": {"required": list(cols), "additionalProperties": False,
                                       "properties": {c: {} for c in cols}}},
                }
            },
        }
        for name, cols in COLUMNS.items()
    ],
}


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (list, tuple)):
        return ";".join(fmt(v) for v in value)
    return str(value)


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def run_record(subcommand, parameters, rows, summary=None) -> dict:
    cols = COLUMNS[subcommand]
    return {
        "tool": TOOL,
        "version": __version__,
        "subcommand": subcommand,
        "parameters": dict(parameters),
        "columns": list(cols),
        "rows": [{c: row[c] for c in cols} for row in rows],
        "summary": dict(summary or {}),
    }


def render_json(record: dict) -> str:
    return json.dumps(_jsonable(record), indent=2, allow_nan=False) + "\n"


def render_csv(record: dict) -> str:
    out = io.StringIO()
    out.write(f"# tool={record['tool']}\n# version={record['version']}\n# subcommand={record['subcommand']}\n")
    for key, value in record["parameters"].items():
        out.write(f"# param.{key}={fmt(value)}\n")
    for key, value in record["summary"].items():
        out.write(f"# summary.{key}={fmt(value)}\n")
    out.write(",".join(record["columns"]) + "\n")
    for row in record["rows"]:
        out.write(",".join(fmt(row[c]) for c in record["columns"]) + "\n")
    return out.getvalue()


def read_csv_rows(text: str) -> list[dict]:
    """Parse CSV produced by :func:`render_csv` back into string-valued rows."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:]]
