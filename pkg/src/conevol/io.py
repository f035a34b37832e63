"""Input documents and report serialization.

An input document is one JSON object::

    {"n": 4,
     "vectors": [["1", "0", "0", "0"], ["0", "1", "0", "0"], ...],
     "weights": ["1/6", "1/6", ...],          # optional
     "normalize_total_to_n": false}          # optional

Vector entries and weights are rational strings ("p/q", integers, decimals)
or JSON numbers.  JSON numbers with a fractional part are read by exact
decimal expansion, never through a binary float.
"""
from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, DimensionMismatch, InputError
from .exact import to_rational
from .matroid import VectorConfiguration

SCHEMA_VERSION = 1
FORMATS = ("json", "text", "csv")


@dataclass(frozen=True)
class InputDocument:
    n: int
    config: VectorConfiguration
    weights: tuple | None  # Fractions, normalized if requested
    normalize_total_to_n: bool = False
    raw_weights: tuple | None = None  # as given, before normalization

    @property
    def N(self) -> int:
        return self.config.N


def _rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise InputError(f"{where}: binary float {value!r}; use a string or decimal literal")
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot read {value!r} as a rational") from exc


def parse_document(data: dict, source: str = "<input>") -> InputDocument:
    """Validate an already-decoded input object."""
    if not isinstance(data, dict):
        raise InputError(f"{source}: top level must be a JSON object")
    unknown = set(data) - {"n", "vectors", "weights", "normalize_total_to_n"}
    if unknown:
        raise InputError(f"{source}: unknown field(s) {sorted(unknown)}")
    if "n" not in data or "vectors" not in data:
        raise InputError(f"{source}: fields 'n' and 'vectors' are required")
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InputError(f"{source}: field 'n' must be an integer >= 2, got {n!r}")
    vecs = data["vectors"]
    if not isinstance(vecs, list) or not vecs:
        raise InputError(f"{source}: field 'vectors' must be a nonempty list")
    rows = []
    for i, v in enumerate(vecs):
        if not isinstance(v, list):
            raise InputError(f"{source}: vectors[{i}] must be a list")
        if len(v) != n:
            raise InputError(f"{source}: vectors[{i}] has {len(v)} entries, expected n={n}")
        rows.append(tuple(_rational(c, f"vectors[{i}][{j}]") for j, c in enumerate(v)))
    if len(rows) < n:
        raise InputError(
            f"{source}: configuration does not span Q^{n} ({len(rows)} vectors given)")
    config = VectorConfiguration(tuple(rows))
    try:
        config.validate()
    except (ConfigurationError, DimensionMismatch) as exc:
        raise InputError(f"{source}: {exc}") from exc
    normalize = data.get("normalize_total_to_n", False)
    if not isinstance(normalize, bool):
        raise InputError(f"{source}: 'normalize_total_to_n' must be true or false")
    weights = raw = None
    if data.get("weights") is not None:
        w = data["weights"]
        if not isinstance(w, list) or len(w) != len(rows):
            count = len(w) if isinstance(w, list) else "non-list"
            raise InputError(f"{source}: 'weights' has {count} entries, expected {len(rows)}")
        raw = tuple(_rational(c, f"weights[{i}]") for i, c in enumerate(w))
        for i, c in enumerate(raw):
            if c < 0:
                raise InputError(f"{source}: weights[{i}] is negative ({c})")
        weights = raw
        if normalize:
            t = sum(raw)
            if t <= 0:
                raise InputError(f"{source}: weights sum to zero, cannot normalize")
            weights = tuple(c * n / t for c in raw)
    return InputDocument(n, config, weights, normalize, raw)


def parse_input(path: str | Path) -> InputDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_document(data, str(path))


def to_input_dict(doc: InputDocument) -> dict:
    """Inverse of :func:`parse_document` (weights as given, not normalized)."""
    out = {
        "n": doc.n,
        "vectors": [[str(c) for c in v] for v in doc.config.vectors],
        "normalize_total_to_n": doc.normalize_total_to_n,
    }
    if doc.raw_weights is not None:
        out["weights"] = [str(c) for c in doc.raw_weights]
    return out


# ---------------------------------------------------------------------------
# reports


def jsonable(obj):
    """Recursively convert Fractions, numpy scalars and tuples for JSON output."""
    import numpy as np
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def make_report(command: str, payload: dict, *, summary: dict | None = None,
                passed: bool = True, seed: int | None = None, checks: dict | None = None) -> dict:
    import numpy
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "passed": bool(passed),
        "results": payload,
        "versions": {"conevol": __version__, "numpy": numpy.__version__},
    }
    if summary is not None:
        report["configuration"] = summary
    if checks is not None:
        report["checks"] = checks
    if seed is not None:
        report["seed"] = seed
    return jsonable(report)


def emit(report: dict, fmt: str = "json") -> bytes:
    """Serialize a report; identical reports give identical bytes."""
    if fmt == "json":
        return (json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "text":
        return _text(jsonable(report)).encode()
    if fmt == "csv":
        table = report.get("results", {}).get("table") if isinstance(report.get("results"), dict) else None
        if not table:
            raise ValueError(f"csv output needs a tabular payload; '{report.get('command')}' has none")
        buf = _io.StringIO()
        keys = list(table[0].keys())
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for row in table:
            w.writerow({k: jsonable(row.get(k)) for k in keys})
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def _text(report: dict) -> str:
    lines = [f"conevol {report.get('command')}  (schema {report.get('schema_version')})"]
    if "configuration" in report:
        lines.append("")
        lines.append("configuration")
        lines.extend(_kv(report["configuration"], 2))
    res = report.get("results", {})
    lines.append("")
    lines.append("results")
    if isinstance(res, dict):
        for k in sorted(res):
            v = res[k]
            if k == "flats_by_rank" and isinstance(v, dict):
                lines.append("  flats by rank")
                width = max((len(r) for r in v), default=1)
                for r in sorted(v, key=int):
                    sets = " ".join("{" + ",".join(str(i) for i in F) + "}" for F in v[r])
                    lines.append(f"    {r.rjust(width)}  {sets}")
            elif _is_table(v):
                lines.append(f"  {k}")
                lines.extend(_table(v, 4))
            else:
                lines.extend(_kv({k: v}, 2))
    if "checks" in report:
        lines.append("")
        lines.append("checks")
        lines.extend(_kv(report["checks"], 2))
    lines.append("")
    lines.append("PASS" if report.get("passed") else "FAIL")
    if "seed" in report:
        lines.append(f"seed {report['seed']}")
    return "\n".join(lines) + "\n"


def _is_table(v) -> bool:
    return (isinstance(v, list) and bool(v) and all(isinstance(r, dict) for r in v)
            and all(r.keys() == v[0].keys() for r in v))


def _kv(d: dict, indent: int) -> list:
    pad = " " * indent
    width = max((len(str(k)) for k in d), default=0)
    out = []
    for k in sorted(d):
        v = d[k]
        if isinstance(v, dict):
            out.append(f"{pad}{k}")
            out.extend(_kv(v, indent + 2))
        else:
            out.append(f"{pad}{str(k).ljust(width)}  {json.dumps(v)}")
    return out


def _cell(v) -> str:
    if isinstance(v, list):
        return "{" + ",".join(str(i) for i in v) + "}"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _table(rows: list, indent: int) -> list:
    keys = list(rows[0].keys())
    cells = [[_cell(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    pad = " " * indent
    out = [pad + "  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    out.extend(pad + "  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    return out
